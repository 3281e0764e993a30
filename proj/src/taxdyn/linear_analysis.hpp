#pragma once

#include <complex>
#include <span>
#include <vector>

#include "taxdyn/types.hpp"

namespace taxdyn {

using Matrix4 = std::array<std::array<double, 4>, 4>;

// Partial derivatives of the adjustment system at the stationary state,
// before multiplication by the speeds. c10 equals a001 and c001 equals d001
// by construction.
struct JacobianCoefficients {
  double a10, a01, a001;
  double b10, b01, b001;
  double c10, c01, c001;
  double d10, d01, d001;
};

JacobianCoefficients jacobian_coefficients(const ModelParams &params);

// Speed-scaled Jacobian. Zero pattern: (1,4), (2,3), (3,4), (4,3) vanish;
// entry (2,1) is the one coupling that becomes delayed.
Matrix4 jacobian_matrix(const JacobianCoefficients &coeffs,
                        const AdjustmentSpeeds &speeds);

// Coefficients of det(lI - J) = l^4 + m43 l^3 + m42 l^2 + m41 l + m40.
struct CharPolyNoDelay {
  double m43, m42, m41, m40;
};

// Extracted from principal-minor sums of the matrix, not from transcribed
// closed forms.
CharPolyNoDelay char_poly_no_delay(const Matrix4 &matrix);

struct RouthHurwitzReport {
  double d1, d2, d3, d4;
  bool stable; // all four determinants strictly positive
};

RouthHurwitzReport routh_hurwitz(const CharPolyNoDelay &poly);

// All roots of a monic real polynomial l^n + c[0] l^(n-1) + ... + c[n-1],
// by Durand-Kerner iteration. Throws no_convergence if the residual bound
// is not met.
std::vector<std::complex<double>>
polynomial_roots(std::span<const double> coeffs);

// The four quartic roots, sorted by (real, imaginary) part; independent
// stability check against the Hurwitz chain.
std::array<std::complex<double>, 4>
eigenvalue_oracle(const CharPolyNoDelay &poly);

// Quasi-polynomial split of the delayed linearization,
// P(l) + Q(l) e^{-l tau} with P(l) = l^4 + n43 l^3 + n42 l^2 + n41 l + n40
// and Q(l) = n22 l^2 + n21 l + n20. P is the characteristic polynomial of
// the Jacobian with the delayed entry (2,1) removed; Q collects that entry
// times its cofactor. At tau = 0 the split closes over the full matrix:
// n43 = m43 and n4j + n2j = m4j for j = 2, 1, 0.
struct DelayCharCoefficients {
  double n43, n42, n41, n40;
  double n22, n21, n20;
};

DelayCharCoefficients delay_split(const JacobianCoefficients &coeffs,
                                  const AdjustmentSpeeds &speeds);

} // namespace taxdyn
