#include "taxdyn/model.hpp"

#include <cmath>
#include <limits>

namespace taxdyn {

namespace {

void require(bool ok, const char *message) {
  if (!ok)
    throw std::invalid_argument(message);
}

// Slack applied to the feasibility bounds so exact-boundary grid points
// (z* = 0) are not flipped by rounding noise.
constexpr double kBoundarySlack = 1e-12;

} // namespace

void validate(const ModelParams &params) {
  require(std::isfinite(params.q) && params.q > 0.0 && params.q <= 1.0,
          "q must lie in (0, 1]");
  require(std::isfinite(params.s) && params.s >= 1.0, "s must be >= 1");
  require(std::isfinite(params.t1) && params.t1 > 0.0 && params.t1 < 1.0,
          "t1 must lie in (0, 1)");
  require(std::isfinite(params.c1) && params.c1 > 0.0, "c1 must be > 0");
  require(std::isfinite(params.c2) && params.c2 > 0.0, "c2 must be > 0");
}

void validate(const AdjustmentSpeeds &speeds) {
  require(std::isfinite(speeds.k1) && speeds.k1 > 0.0, "k1 must be > 0");
  require(std::isfinite(speeds.k2) && speeds.k2 > 0.0, "k2 must be > 0");
  require(std::isfinite(speeds.h1) && speeds.h1 > 0.0, "h1 must be > 0");
  require(std::isfinite(speeds.h2) && speeds.h2 > 0.0, "h2 must be > 0");
}

Primitives evaluate_primitives(double x_total, double evasion, double output,
                               const ModelParams &params) {
  validate(params);
  if (!(x_total > 0.0))
    throw price_singularity("price singularity: total output must be > 0");
  Primitives v;
  v.p = 1.0 / x_total;
  v.dp = -1.0 / (x_total * x_total);
  v.d2p = 2.0 / (x_total * x_total * x_total);
  v.F = 0.5 * params.s * params.t1 * evasion * evasion;
  v.dF = params.s * params.t1 * evasion;
  v.C1 = params.c1 * output;
  v.C2 = params.c2 * output;
  return v;
}

double profit(int firm, const MarketState &state, const ModelParams &params) {
  validate(params);
  require(firm == 1 || firm == 2, "firm index must be 1 or 2");
  const double total = state.x1 + state.x2;
  if (!(total > 0.0))
    throw price_singularity("price singularity: total output must be > 0");
  const double p = 1.0 / total;
  const double x = firm == 1 ? state.x1 : state.x2;
  const double z = firm == 1 ? state.z1 : state.z2;
  const double c = firm == 1 ? params.c1 : params.c2;
  const double revenue = x * p;
  const double cost = c * x;
  const double evaded = revenue - z;
  const double penalty = 0.5 * params.s * params.t1 * evaded * evaded;
  const double undetected = revenue - cost - params.t1 * z;
  const double detected = (1.0 - params.t1) * revenue - cost - penalty;
  return (1.0 - params.q) * undetected + params.q * detected;
}

Vec4 foc_residual(const MarketState &state, const ModelParams &params) {
  validate(params);
  const double total = state.x1 + state.x2;
  if (!(total > 0.0))
    throw price_singularity("price singularity: total output must be > 0");
  const double p = 1.0 / total;
  const double dp = -1.0 / (total * total);
  const double qst1 = params.q * params.s * params.t1;
  const double e1 = state.x1 * p - state.z1;
  const double e2 = state.x2 * p - state.z2;
  // cost enters through its derivative c_i, not c_i x_i
  const double dx1 =
      (1.0 - params.q * params.t1 - qst1 * e1) * (p + state.x1 * dp) -
      params.c1;
  const double dx2 =
      (1.0 - params.q * params.t1 - qst1 * e2) * (p + state.x2 * dp) -
      params.c2;
  const double dz1 = -(1.0 - params.q) * params.t1 + qst1 * e1;
  const double dz2 = -(1.0 - params.q) * params.t1 + qst1 * e2;
  return {dx1, dx2, dz1, dz2};
}

FeasibilityReport feasibility_check(const ModelParams &params) {
  validate(params);
  FeasibilityReport report;
  const double margin = params.q * params.s + params.q - 1.0;
  report.attainable = margin > 0.0;
  if (!report.attainable) {
    report.feasible = false;
    report.c2_lower = std::numeric_limits<double>::infinity();
    report.c2_upper = -std::numeric_limits<double>::infinity();
    report.reason = "declaration nonnegativity unattainable";
    return report;
  }
  report.c2_lower = (1.0 - params.q) * params.c1 / margin;
  report.c2_upper = margin * params.c1 / (1.0 - params.q);
  report.feasible = params.c2 >= report.c2_lower - kBoundarySlack &&
                    params.c2 <= report.c2_upper + kBoundarySlack;
  if (!report.feasible)
    report.reason = "c2 outside the nonnegative-declaration range";
  return report;
}

EquilibriumReport equilibrium(const ModelParams &params) {
  validate(params);
  const double total_cost = params.c1 + params.c2;
  const double evaded = (1.0 - params.q) / (params.q * params.s);
  EquilibriumReport report;
  report.state.x1 =
      params.c2 * (1.0 - params.t1) / (total_cost * total_cost);
  report.state.x2 =
      params.c1 * (1.0 - params.t1) / (total_cost * total_cost);
  report.state.z1 = params.c2 / total_cost - evaded;
  report.state.z2 = params.c1 / total_cost - evaded;
  report.evaded = evaded;
  report.feasible = feasibility_check(params).feasible;
  report.profits = {profit(1, report.state, params),
                    profit(2, report.state, params)};
  return report;
}

std::vector<SweepRow> static_sweep(const ModelParams &base,
                                   std::span<const double> s_grid) {
  std::vector<SweepRow> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    ModelParams params = base;
    params.s = s;
    const EquilibriumReport eq = equilibrium(params);
    rows.push_back({s, eq.state.z1, eq.state.z2, eq.profits[0],
                    eq.profits[1], eq.feasible});
  }
  return rows;
}

} // namespace taxdyn
