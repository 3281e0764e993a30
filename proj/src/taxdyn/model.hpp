#pragma once

#include <span>
#include <string>
#include <vector>

#include "taxdyn/types.hpp"

namespace taxdyn {

// Pointwise values of the model primitives: inverse demand p(x) = 1/x with
// its first two derivatives, penalty F(e) = (1/2) s t1 e^2 with derivative,
// and linear costs evaluated at `output`.
struct Primitives {
  double p;
  double dp;
  double d2p;
  double F;
  double dF;
  double C1;
  double C2;
};

Primitives evaluate_primitives(double x_total, double evasion, double output,
                               const ModelParams &params);

// Expected profit of firm 1 or 2 at an arbitrary state.
double profit(int firm, const MarketState &state, const ModelParams &params);

// Residuals (dP1/dx1, dP2/dx2, dP1/dz1, dP2/dz2) of the first-order
// conditions; all four vanish at the closed-form equilibrium.
Vec4 foc_residual(const MarketState &state, const ModelParams &params);

struct FeasibilityReport {
  bool feasible;      // nonnegative-declaration equilibrium exists
  bool attainable;    // false when q s + q - 1 <= 0
  double c2_lower;    // admissible range of c2 given the other params
  double c2_upper;
  std::string reason; // empty when feasible
};

FeasibilityReport feasibility_check(const ModelParams &params);

struct EquilibriumReport {
  MarketState state;
  double evaded; // common evaded revenue (1-q)/(q s)
  bool feasible;
  std::array<double, 2> profits;
};

// Closed-form stationary point. Reported even when infeasible (negative
// declarations); the flag carries the distinction.
EquilibriumReport equilibrium(const ModelParams &params);

struct SweepRow {
  double s_value;
  double z1_star;
  double z2_star;
  double p1_star;
  double p2_star;
  bool feasible;
};

// Equilibrium declarations and profits across a grid of penalty scales.
std::vector<SweepRow> static_sweep(const ModelParams &base,
                                   std::span<const double> s_grid);

} // namespace taxdyn
