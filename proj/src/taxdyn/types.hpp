#pragma once

#include <array>
#include <stdexcept>

namespace taxdyn {

// Economic parameters of the evasion game.
struct ModelParams {
  double q;  // detection probability, 0 < q <= 1
  double s;  // penalty scale, s >= 1
  double t1; // ad valorem tax rate, 0 < t1 < 1
  double c1; // marginal cost of firm 1, > 0
  double c2; // marginal cost of firm 2, > 0
};

// Gradient-adjustment speeds of the dynamic system, all > 0.
struct AdjustmentSpeeds {
  double k1; // output adjustment, firm 1
  double k2; // output adjustment, firm 2
  double h1; // declaration adjustment, firm 1
  double h2; // declaration adjustment, firm 2
};

// Outputs and declared revenues. Declarations may go negative along a
// transient; only the equilibrium is required nonnegative.
struct MarketState {
  double x1;
  double x2;
  double z1;
  double z2;
};

using Vec4 = std::array<double, 4>;

struct price_singularity : std::domain_error {
  using std::domain_error::domain_error;
};

struct degenerate_crossing : std::domain_error {
  using std::domain_error::domain_error;
};

struct no_convergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throw std::invalid_argument naming the offending field.
void validate(const ModelParams &params);
void validate(const AdjustmentSpeeds &speeds);

} // namespace taxdyn
