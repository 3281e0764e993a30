#pragma once

#include <optional>
#include <vector>

#include "taxdyn/linear_analysis.hpp"
#include "taxdyn/types.hpp"

namespace taxdyn {

// Coefficients of |P(iw)|^2 - |Q(iw)|^2 = w^8 + r6 w^6 + r4 w^4 + r2 w^2 + r0.
// A positive root w0 puts i w0 on the imaginary axis for some delay.
struct OmegaPolynomial {
  double r6, r4, r2, r0;
};

OmegaPolynomial omega_polynomial(const DelayCharCoefficients &n);

// Positive crossing frequencies, ascending; empty when the stationary state
// never loses stability through a delay.
std::vector<double> crossing_frequencies(const OmegaPolynomial &r);

// Real and imaginary parts of P and Q on the imaginary axis:
// P(iw) = a1 + i a2, Q(iw) = -a3 + i a4.
struct ImaginaryAxisEvaluation {
  double a1, a2, a3, a4;
};

struct CriticalDelay {
  double tau0;
  ImaginaryAxisEvaluation eval;
  double residual; // |P(i w0) + Q(i w0) e^{-i w0 tau0}|
};

// Smallest tau > 0 placing i*omega0 on the imaginary axis. The angle is
// recovered with the two-argument arctangent of (sin, cos) from
// e^{-i w tau} = -P(iw)/Q(iw), which is branch-unambiguous.
CriticalDelay critical_delay(const DelayCharCoefficients &n, double omega0);

// Re(dl/dtau) at the crossing, from implicit differentiation of
// P(l) + Q(l) e^{-l tau} = 0. A nonzero value means the root pair actually
// crosses the axis.
double transversality(const DelayCharCoefficients &n, double omega0,
                      double tau0);

enum class Classification {
  StableForAllDelays,
  StableUntilTau0,
  UnstableAtZeroDelay,
};

const char *to_string(Classification classification);

struct HopfAnalysis {
  Classification classification;
  std::optional<double> omega0;
  std::optional<double> tau0;
  std::optional<int> transversality_sign;
  double transversality_value = 0.0;
  double crossing_residual = 0.0;
  std::vector<double> crossings; // all positive crossing frequencies
  // carried for reporting
  JacobianCoefficients jacobian;
  CharPolyNoDelay char_poly;
  RouthHurwitzReport routh;
  DelayCharCoefficients delay_coeffs;
  OmegaPolynomial omega_poly;
};

// Full pipeline: Routh-Hurwitz at tau = 0, crossing frequencies, smallest
// critical delay and transversality.
HopfAnalysis classify(const ModelParams &params,
                      const AdjustmentSpeeds &speeds);

} // namespace taxdyn
