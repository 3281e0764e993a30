#pragma once

// Shared helpers for the test suites: randomized parameter draws, finite
// differences and small complex-matrix utilities used as independent
// oracles.

#include <algorithm>
#include <array>
#include <complex>
#include <random>

#include "taxdyn/linear_analysis.hpp"
#include "taxdyn/model.hpp"
#include "taxdyn/types.hpp"

namespace testsupport {

struct ModelDraw {
  taxdyn::ModelParams params;
  taxdyn::AdjustmentSpeeds speeds;
};

// Parameters with a strictly feasible equilibrium: the penalty margin
// q s + q - 1 is kept away from zero and c2 is placed strictly inside the
// admissible interval.
inline ModelDraw draw_feasible(std::mt19937 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    taxdyn::ModelParams p;
    p.q = 0.05 + 0.95 * unit(rng);
    p.s = 1.0 + 99.0 * unit(rng);
    const double margin = p.q * p.s + p.q - 1.0;
    if (margin <= 0.05)
      continue;
    p.t1 = 0.05 + 0.85 * unit(rng);
    p.c1 = 0.05 + 4.95 * unit(rng);
    const double lower = (1.0 - p.q) * p.c1 / margin;
    // keep the cost spread within an order of magnitude or two so the
    // derived polynomial coefficients stay in a sane floating-point range
    const double upper =
        std::min(margin * p.c1 / (1.0 - p.q), 50.0 * p.c1);
    if (upper <= lower)
      continue;
    p.c2 = lower + (0.05 + 0.9 * unit(rng)) * (upper - lower);
    taxdyn::AdjustmentSpeeds sp;
    sp.k1 = 0.005 + 0.495 * unit(rng);
    sp.k2 = 0.005 + 0.495 * unit(rng);
    sp.h1 = 0.005 + 0.495 * unit(rng);
    sp.h2 = 0.005 + 0.495 * unit(rng);
    return {p, sp};
  }
}

// Central difference of profit with respect to one state component.
inline double profit_derivative(int firm, const taxdyn::MarketState &state,
                                const taxdyn::ModelParams &params,
                                int component, double delta = 1e-6) {
  auto shifted = [&](double sign) {
    taxdyn::MarketState s = state;
    switch (component) {
    case 0:
      s.x1 += sign * delta;
      break;
    case 1:
      s.x2 += sign * delta;
      break;
    case 2:
      s.z1 += sign * delta;
      break;
    default:
      s.z2 += sign * delta;
      break;
    }
    return taxdyn::profit(firm, s, params);
  };
  return (shifted(1.0) - shifted(-1.0)) / (2.0 * delta);
}

using cmatrix4 = std::array<std::array<std::complex<double>, 4>, 4>;

inline std::complex<double> det4(const cmatrix4 &m) {
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
           m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
           m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
  };
  return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
         m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

// det(lambda I - J0 - mu J1) where J0 is the matrix with the delayed entry
// (2,1) removed and J1 holds only that entry. Evaluating the quasi-polynomial
// without any coefficient extraction.
inline std::complex<double> quasi_det(const taxdyn::Matrix4 &jacobian,
                                      std::complex<double> lambda,
                                      std::complex<double> mu) {
  cmatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto ui = static_cast<size_t>(i);
      const auto uj = static_cast<size_t>(j);
      m[ui][uj] = (i == j ? lambda : std::complex<double>(0.0)) -
                  std::complex<double>(jacobian[ui][uj]);
    }
  m[1][0] = mu * (-jacobian[1][0]);
  return det4(m);
}

inline std::complex<double> eval_p(const taxdyn::DelayCharCoefficients &n,
                                   std::complex<double> l) {
  return (((l + n.n43) * l + n.n42) * l + n.n41) * l + n.n40;
}

inline std::complex<double> eval_q(const taxdyn::DelayCharCoefficients &n,
                                   std::complex<double> l) {
  return (n.n22 * l + n.n21) * l + n.n20;
}

// Set A and set B of the numerical experiments: identical but for c2.
inline taxdyn::ModelParams set_a() { return {0.3, 40.0, 0.16, 0.2, 2.0}; }
inline taxdyn::ModelParams set_b() { return {0.3, 40.0, 0.16, 0.2, 1.5}; }
inline taxdyn::AdjustmentSpeeds reference_speeds() {
  return {0.05, 0.01, 0.05, 0.01};
}

} // namespace testsupport
