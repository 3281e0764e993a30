#include "taxdyn/bifurcation.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace taxdyn {

namespace {

using cplx = std::complex<double>;

cplx eval_p(const DelayCharCoefficients &n, cplx l) {
  return (((l + n.n43) * l + n.n42) * l + n.n41) * l + n.n40;
}

cplx eval_q(const DelayCharCoefficients &n, cplx l) {
  return (n.n22 * l + n.n21) * l + n.n20;
}

} // namespace

OmegaPolynomial omega_polynomial(const DelayCharCoefficients &n) {
  OmegaPolynomial r;
  r.r6 = n.n43 * n.n43 - 2.0 * n.n42;
  r.r4 = n.n42 * n.n42 + 2.0 * n.n40 - 2.0 * n.n43 * n.n41 - n.n22 * n.n22;
  r.r2 = n.n41 * n.n41 - 2.0 * n.n42 * n.n40 + 2.0 * n.n22 * n.n20 -
         n.n21 * n.n21;
  r.r0 = n.n40 * n.n40 - n.n20 * n.n20;
  return r;
}

std::vector<double> crossing_frequencies(const OmegaPolynomial &r) {
  const double coeffs[4] = {r.r6, r.r4, r.r2, r.r0};
  const auto roots = polynomial_roots(coeffs);
  std::vector<double> omegas;
  for (const auto &y : roots) {
    if (std::abs(y.imag()) >= 1e-9 * (1.0 + std::abs(y)))
      continue;
    if (!(y.real() > 1e-12))
      continue;
    const double omega = std::sqrt(y.real());
    // a tangency shows up as a near-double root; report it once
    if (!omegas.empty() &&
        std::abs(omega - omegas.back()) <= 1e-7 * (1.0 + omega))
      continue;
    omegas.push_back(omega);
  }
  return omegas;
}

CriticalDelay critical_delay(const DelayCharCoefficients &n, double omega0) {
  if (!(omega0 > 0.0))
    throw std::invalid_argument("omega0 must be > 0");
  CriticalDelay result;
  const double w2 = omega0 * omega0;
  result.eval.a1 = w2 * w2 - n.n42 * w2 + n.n40;
  result.eval.a2 = -n.n43 * w2 * omega0 + n.n41 * omega0;
  result.eval.a3 = n.n22 * w2 - n.n20;
  result.eval.a4 = n.n21 * omega0;
  const double qmag2 =
      result.eval.a3 * result.eval.a3 + result.eval.a4 * result.eval.a4;
  const cplx p = eval_p(n, cplx(0.0, omega0));
  if (!(std::sqrt(qmag2) > 1e-12 * std::max(1.0, std::abs(p))))
    throw degenerate_crossing("degenerate crossing: |Q(i omega0)| ~ 0");
  // e^{-i w tau} = -P/Q gives cos and sin of the crossing angle
  const double cos_angle =
      (result.eval.a1 * result.eval.a3 - result.eval.a2 * result.eval.a4) /
      qmag2;
  const double sin_angle =
      -(result.eval.a1 * result.eval.a4 + result.eval.a2 * result.eval.a3) /
      qmag2;
  double tau = std::atan2(sin_angle, cos_angle) / omega0;
  const double turn = 2.0 * std::numbers::pi / omega0;
  while (tau <= 0.0)
    tau += turn;
  result.tau0 = tau;
  result.residual = std::abs(
      p + eval_q(n, cplx(0.0, omega0)) * std::exp(cplx(0.0, -omega0 * tau)));
  return result;
}

double transversality(const DelayCharCoefficients &n, double omega0,
                      double tau0) {
  const cplx l(0.0, omega0);
  const cplx p_prime =
      ((4.0 * l + 3.0 * n.n43) * l + 2.0 * n.n42) * l + n.n41;
  const cplx q_prime = 2.0 * n.n22 * l + n.n21;
  const cplx q = eval_q(n, l);
  const cplx shift = std::exp(-l * tau0);
  const cplx denom = p_prime + (q_prime - tau0 * q) * shift;
  if (!(std::abs(denom) > 1e-12))
    throw degenerate_crossing("degenerate transversality: denominator ~ 0");
  return (l * q * shift / denom).real();
}

const char *to_string(Classification classification) {
  switch (classification) {
  case Classification::StableForAllDelays:
    return "StableForAllDelays";
  case Classification::StableUntilTau0:
    return "StableUntilTau0";
  case Classification::UnstableAtZeroDelay:
    return "UnstableAtZeroDelay";
  }
  return "unknown";
}

HopfAnalysis classify(const ModelParams &params,
                      const AdjustmentSpeeds &speeds) {
  validate(params);
  validate(speeds);
  HopfAnalysis analysis;
  analysis.jacobian = jacobian_coefficients(params);
  analysis.char_poly =
      char_poly_no_delay(jacobian_matrix(analysis.jacobian, speeds));
  analysis.routh = routh_hurwitz(analysis.char_poly);
  analysis.delay_coeffs = delay_split(analysis.jacobian, speeds);
  analysis.omega_poly = omega_polynomial(analysis.delay_coeffs);
  if (!analysis.routh.stable) {
    analysis.classification = Classification::UnstableAtZeroDelay;
    return analysis;
  }
  analysis.crossings = crossing_frequencies(analysis.omega_poly);
  if (analysis.crossings.empty()) {
    analysis.classification = Classification::StableForAllDelays;
    return analysis;
  }
  // several crossings are possible; stability is first lost at the
  // smallest candidate delay
  bool have_best = false;
  double best_omega = 0.0;
  CriticalDelay best{};
  for (double omega : analysis.crossings) {
    const CriticalDelay candidate = critical_delay(analysis.delay_coeffs, omega);
    if (!have_best || candidate.tau0 < best.tau0) {
      have_best = true;
      best = candidate;
      best_omega = omega;
    }
  }
  analysis.classification = Classification::StableUntilTau0;
  analysis.omega0 = best_omega;
  analysis.tau0 = best.tau0;
  analysis.crossing_residual = best.residual;
  analysis.transversality_value =
      transversality(analysis.delay_coeffs, best_omega, best.tau0);
  analysis.transversality_sign =
      analysis.transversality_value > 0.0
          ? 1
          : (analysis.transversality_value < 0.0 ? -1 : 0);
  return analysis;
}

} // namespace taxdyn
