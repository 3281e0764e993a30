#include "taxdyn/linear_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "taxdyn/model.hpp"

namespace taxdyn {

JacobianCoefficients jacobian_coefficients(const ModelParams &params) {
  validate(params);
  const EquilibriumReport eq = equilibrium(params);
  const double total = eq.state.x1 + eq.state.x2;
  const double dp = -1.0 / (total * total);
  const double d2p = 2.0 / (total * total * total);
  const double qst1 = params.q * params.s * params.t1;
  const double net = 1.0 - params.t1;
  JacobianCoefficients co;
  co.a10 = -qst1 * params.c1 * params.c1 / (net * net) +
           net * (2.0 * dp + eq.state.x1 * d2p);
  co.a01 = -qst1 * eq.state.x1 * dp * params.c1 / net +
           net * (dp + eq.state.x1 * d2p);
  co.a001 = qst1 * params.c1 / net;
  co.b10 = -qst1 * eq.state.x2 * dp * params.c2 / net +
           net * (dp + eq.state.x2 * d2p);
  co.b01 = -qst1 * params.c2 * params.c2 / (net * net) +
           net * (2.0 * dp + eq.state.x2 * d2p);
  co.b001 = qst1 * params.c2 / net;
  co.c10 = qst1 * params.c1 / net;
  co.c01 = qst1 * eq.state.x1 * dp;
  co.c001 = -qst1;
  co.d10 = qst1 * eq.state.x2 * dp;
  co.d01 = qst1 * params.c2 / net;
  co.d001 = -qst1;
  return co;
}

Matrix4 jacobian_matrix(const JacobianCoefficients &co,
                        const AdjustmentSpeeds &sp) {
  return {{{sp.k1 * co.a10, sp.k1 * co.a01, sp.k1 * co.a001, 0.0},
           {sp.k2 * co.b10, sp.k2 * co.b01, 0.0, sp.k2 * co.b001},
           {sp.h1 * co.c10, sp.h1 * co.c01, sp.h1 * co.c001, 0.0},
           {sp.h2 * co.d10, sp.h2 * co.d01, 0.0, sp.h2 * co.d001}}};
}

namespace {

double minor2(const Matrix4 &m, int i, int j) {
  return m[i][i] * m[j][j] - m[i][j] * m[j][i];
}

double minor3(const Matrix4 &m, int i, int j, int k) {
  return m[i][i] * (m[j][j] * m[k][k] - m[j][k] * m[k][j]) -
         m[i][j] * (m[j][i] * m[k][k] - m[j][k] * m[k][i]) +
         m[i][k] * (m[j][i] * m[k][j] - m[j][j] * m[k][i]);
}

double det4(const Matrix4 &m) {
  double det = 0.0;
  double sign = 1.0;
  for (int col = 0; col < 4; ++col) {
    int rest[3];
    for (int c = 0, n = 0; c < 4; ++c)
      if (c != col)
        rest[n++] = c;
    const double sub =
        m[1][rest[0]] * (m[2][rest[1]] * m[3][rest[2]] -
                         m[2][rest[2]] * m[3][rest[1]]) -
        m[1][rest[1]] * (m[2][rest[0]] * m[3][rest[2]] -
                         m[2][rest[2]] * m[3][rest[0]]) +
        m[1][rest[2]] * (m[2][rest[0]] * m[3][rest[1]] -
                         m[2][rest[1]] * m[3][rest[0]]);
    det += sign * m[0][col] * sub;
    sign = -sign;
  }
  return det;
}

} // namespace

CharPolyNoDelay char_poly_no_delay(const Matrix4 &m) {
  CharPolyNoDelay poly;
  poly.m43 = -(m[0][0] + m[1][1] + m[2][2] + m[3][3]);
  poly.m42 = minor2(m, 0, 1) + minor2(m, 0, 2) + minor2(m, 0, 3) +
             minor2(m, 1, 2) + minor2(m, 1, 3) + minor2(m, 2, 3);
  poly.m41 = -(minor3(m, 0, 1, 2) + minor3(m, 0, 1, 3) + minor3(m, 0, 2, 3) +
               minor3(m, 1, 2, 3));
  poly.m40 = det4(m);
  return poly;
}

RouthHurwitzReport routh_hurwitz(const CharPolyNoDelay &poly) {
  RouthHurwitzReport report;
  report.d1 = poly.m43;
  report.d2 = poly.m43 * poly.m42 - poly.m41;
  report.d3 = poly.m41 * report.d2 - poly.m43 * poly.m43 * poly.m40;
  report.d4 = poly.m40 * report.d3;
  report.stable = report.d1 > 0.0 && report.d2 > 0.0 && report.d3 > 0.0 &&
                  report.d4 > 0.0;
  return report;
}

std::vector<std::complex<double>>
polynomial_roots(std::span<const double> coeffs) {
  using cplx = std::complex<double>;
  const size_t degree = coeffs.size();
  if (degree == 0)
    return {};

  // Balance the coefficients first: with l = sigma w the substituted
  // polynomial has coefficients of order one, which keeps the iteration
  // well conditioned when the inputs span many orders of magnitude.
  double sigma = 0.0;
  for (size_t k = 0; k < degree; ++k)
    if (coeffs[k] != 0.0)
      sigma = std::max(sigma, std::pow(std::abs(coeffs[k]),
                                       1.0 / static_cast<double>(k + 1)));
  if (sigma == 0.0)
    return std::vector<cplx>(degree, cplx(0.0)); // l^n
  std::vector<double> scaled(degree);
  for (size_t k = 0; k < degree; ++k)
    scaled[k] = coeffs[k] / std::pow(sigma, static_cast<double>(k + 1));

  auto eval = [&](cplx w) {
    cplx value = 1.0;
    for (double c : scaled)
      value = value * w + c;
    return value;
  };

  // Durand-Kerner from staggered points on a circle enclosing every root.
  std::vector<cplx> roots(degree);
  const cplx seed(0.4, 0.9);
  cplx power = 1.0;
  for (size_t i = 0; i < degree; ++i) {
    power *= seed;
    roots[i] = 2.0 * power;
  }
  constexpr int kMaxIterations = 600;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double worst = 0.0;
    for (size_t i = 0; i < degree; ++i) {
      cplx denom = 1.0;
      for (size_t j = 0; j < degree; ++j)
        if (j != i)
          denom *= roots[i] - roots[j];
      const cplx delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(roots[i])));
    }
    if (worst < 1e-15)
      break;
  }
  // One Newton polish per root; keep whichever residual is smaller.
  for (auto &root : roots) {
    cplx value = eval(root);
    cplx derivative = 0.0;
    cplx horner = 1.0;
    for (double c : scaled) {
      derivative = derivative * root + horner;
      horner = horner * root + c;
    }
    if (std::abs(derivative) > 0.0) {
      const cplx polished = root - value / derivative;
      if (std::abs(eval(polished)) < std::abs(value))
        root = polished;
    }
  }
  for (const auto &root : roots) {
    const double scale = std::pow(std::max(1.0, std::abs(root)),
                                  static_cast<double>(degree));
    if (!(std::abs(eval(root)) < 1e-9 * scale))
      throw no_convergence("polynomial root iteration did not converge");
  }
  for (auto &root : roots)
    root *= sigma;
  std::sort(roots.begin(), roots.end(), [](const cplx &a, const cplx &b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

std::array<std::complex<double>, 4>
eigenvalue_oracle(const CharPolyNoDelay &poly) {
  const double coeffs[4] = {poly.m43, poly.m42, poly.m41, poly.m40};
  const auto roots = polynomial_roots(coeffs);
  for (const auto &root : roots) {
    const std::complex<double> value =
        ((((root + poly.m43) * root + poly.m42) * root + poly.m41) * root) +
        poly.m40;
    const double mag = std::abs(root);
    const double quartic = std::max(1.0, mag * mag * mag * mag);
    // evaluating the polynomial itself rounds at the scale of its largest
    // term, so the bound cannot sit below that
    const double term_scale =
        ((((mag + std::abs(poly.m43)) * mag + std::abs(poly.m42)) * mag +
          std::abs(poly.m41)) *
         mag) +
        std::abs(poly.m40);
    if (!(std::abs(value) < 1e-9 * std::max(quartic, term_scale)))
      throw no_convergence("eigenvalue residual bound violated");
  }
  return {roots[0], roots[1], roots[2], roots[3]};
}

DelayCharCoefficients delay_split(const JacobianCoefficients &co,
                                  const AdjustmentSpeeds &sp) {
  Matrix4 undelayed = jacobian_matrix(co, sp);
  undelayed[1][0] = 0.0;
  const CharPolyNoDelay p = char_poly_no_delay(undelayed);
  DelayCharCoefficients n;
  n.n43 = p.m43;
  n.n42 = p.m42;
  n.n41 = p.m41;
  n.n40 = p.m40;
  // -k2 b10 times the (2,1) cofactor of (lI - J0), expanded in l:
  //   cofactor = (l - h2 d001) k1 (a01 l - a01 h1 c001 + a001 h1 c01)
  const double k1k2b10 = sp.k1 * sp.k2 * co.b10;
  n.n22 = -k1k2b10 * co.a01;
  n.n21 = k1k2b10 * co.a01 * (sp.h1 * co.c001 + sp.h2 * co.d001) -
          k1k2b10 * sp.h1 * co.a001 * co.c01;
  n.n20 = k1k2b10 * sp.h1 * sp.h2 *
          (co.a001 * co.c01 * co.d001 - co.a01 * co.c001 * co.d001);
  return n;
}

} // namespace taxdyn
