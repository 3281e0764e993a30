#include "taxdyn.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "taxdyn/bifurcation.hpp"
#include "taxdyn/dynamics.hpp"
#include "taxdyn/linear_analysis.hpp"
#include "taxdyn/model.hpp"

// C wrapper over the taxdyn core: exceptions become status codes, a
// thread-local message records the last failure, variable-length results
// live behind opaque handles.

struct td_trajectory {
  taxdyn::Trajectory data;
};

struct td_sweep {
  std::vector<taxdyn::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

taxdyn::ModelParams to_core(const td_params &p) {
  return {p.q, p.s, p.t1, p.c1, p.c2};
}

taxdyn::AdjustmentSpeeds to_core(const td_speeds &s) {
  return {s.k1, s.k2, s.h1, s.h2};
}

taxdyn::MarketState to_core(const td_state &s) {
  return {s.x1, s.x2, s.z1, s.z2};
}

td_state from_core(const taxdyn::MarketState &s) {
  return {s.x1, s.x2, s.z1, s.z2};
}

td_status fail(td_status status, const char *message) {
  g_last_error = message;
  return status;
}

// Runs `body` with the standard exception-to-status mapping.
template <class Body> td_status guarded(Body &&body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const std::invalid_argument &err) {
    return fail(TD_ERR_INVALID_PARAM, err.what());
  } catch (const taxdyn::price_singularity &err) {
    return fail(TD_ERR_PRICE_SINGULARITY, err.what());
  } catch (const taxdyn::degenerate_crossing &err) {
    return fail(TD_ERR_DEGENERATE, err.what());
  } catch (const taxdyn::no_convergence &err) {
    return fail(TD_ERR_NO_CONVERGENCE, err.what());
  } catch (const std::bad_alloc &) {
    return fail(TD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &err) {
    return fail(TD_ERR_INTERNAL, err.what());
  }
}

} // namespace

extern "C" {

const char *td_status_name(td_status status) {
  switch (status) {
  case TD_OK:
    return "TD_OK";
  case TD_ERR_INVALID_PARAM:
    return "TD_ERR_INVALID_PARAM";
  case TD_ERR_PRICE_SINGULARITY:
    return "TD_ERR_PRICE_SINGULARITY";
  case TD_ERR_NO_CONVERGENCE:
    return "TD_ERR_NO_CONVERGENCE";
  case TD_ERR_DEGENERATE:
    return "TD_ERR_DEGENERATE";
  case TD_ERR_INVALID_ARGUMENT:
    return "TD_ERR_INVALID_ARGUMENT";
  case TD_ERR_INTERNAL:
    return "TD_ERR_INTERNAL";
  }
  return "TD_STATUS_UNKNOWN";
}

const char *td_last_error(void) { return g_last_error.c_str(); }

td_status td_params_validate(const td_params *params) {
  if (!params)
    return fail(TD_ERR_INVALID_ARGUMENT, "params must not be NULL");
  return guarded([&] {
    taxdyn::validate(to_core(*params));
    return TD_OK;
  });
}

td_status td_speeds_validate(const td_speeds *speeds) {
  if (!speeds)
    return fail(TD_ERR_INVALID_ARGUMENT, "speeds must not be NULL");
  return guarded([&] {
    taxdyn::validate(to_core(*speeds));
    return TD_OK;
  });
}

td_status td_equilibrium(const td_params *params,
                         td_equilibrium_report *report) {
  if (!params || !report)
    return fail(TD_ERR_INVALID_ARGUMENT, "params and report must not be NULL");
  return guarded([&] {
    const taxdyn::EquilibriumReport eq = taxdyn::equilibrium(to_core(*params));
    report->state = from_core(eq.state);
    report->evaded = eq.evaded;
    report->feasible = eq.feasible ? 1 : 0;
    report->profit1 = eq.profits[0];
    report->profit2 = eq.profits[1];
    const taxdyn::Vec4 residual =
        taxdyn::foc_residual(eq.state, to_core(*params));
    for (int i = 0; i < 4; ++i)
      report->foc_residual[i] = residual[static_cast<size_t>(i)];
    return TD_OK;
  });
}

td_status td_feasibility(const td_params *params,
                         td_feasibility_report *report) {
  if (!params || !report)
    return fail(TD_ERR_INVALID_ARGUMENT, "params and report must not be NULL");
  return guarded([&] {
    const taxdyn::FeasibilityReport fr =
        taxdyn::feasibility_check(to_core(*params));
    report->feasible = fr.feasible ? 1 : 0;
    report->attainable = fr.attainable ? 1 : 0;
    report->c2_lower = fr.c2_lower;
    report->c2_upper = fr.c2_upper;
    return TD_OK;
  });
}

td_status td_profit(const td_params *params, const td_state *state, int firm,
                    double *value) {
  if (!params || !state || !value)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    *value = taxdyn::profit(firm, to_core(*state), to_core(*params));
    return TD_OK;
  });
}

td_status td_foc_residual(const td_params *params, const td_state *state,
                          double residual[4]) {
  if (!params || !state || !residual)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    const taxdyn::Vec4 r = taxdyn::foc_residual(to_core(*state),
                                                to_core(*params));
    for (int i = 0; i < 4; ++i)
      residual[i] = r[static_cast<size_t>(i)];
    return TD_OK;
  });
}

td_status td_ode_rhs(const td_params *params, const td_speeds *speeds,
                     const td_state *state, double deriv[4]) {
  if (!params || !speeds || !state || !deriv)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    taxdyn::validate(to_core(*params));
    taxdyn::validate(to_core(*speeds));
    const taxdyn::Vec4 d =
        taxdyn::ode_rhs(to_core(*state), to_core(*params), to_core(*speeds));
    for (int i = 0; i < 4; ++i)
      deriv[i] = d[static_cast<size_t>(i)];
    return TD_OK;
  });
}

td_status td_dde_rhs(const td_params *params, const td_speeds *speeds,
                     const td_state *state, double x1_delayed,
                     double deriv[4]) {
  if (!params || !speeds || !state || !deriv)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    taxdyn::validate(to_core(*params));
    taxdyn::validate(to_core(*speeds));
    const taxdyn::Vec4 d = taxdyn::dde_rhs(to_core(*state), x1_delayed,
                                           to_core(*params), to_core(*speeds));
    for (int i = 0; i < 4; ++i)
      deriv[i] = d[static_cast<size_t>(i)];
    return TD_OK;
  });
}

td_status td_simulate(const td_params *params, const td_speeds *speeds,
                      const td_state *initial, double tau, double step,
                      double t_end, td_trajectory **out) {
  if (!params || !speeds || !initial || !out)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  *out = nullptr;
  return guarded([&] {
    taxdyn::Trajectory traj;
    if (tau > 0.0) {
      const double x10 = initial->x1;
      const taxdyn::HistorySpec history{[x10](double) { return x10; },
                                        initial->x2, initial->z1,
                                        initial->z2};
      traj = taxdyn::integrate_dde(history, to_core(*params),
                                   to_core(*speeds), tau, step, t_end);
    } else if (tau == 0.0) {
      traj = taxdyn::integrate_ode(to_core(*initial), to_core(*params),
                                   to_core(*speeds), step, t_end);
    } else {
      throw std::invalid_argument("tau must be >= 0");
    }
    *out = new td_trajectory{std::move(traj)};
    return TD_OK;
  });
}

size_t td_trajectory_size(const td_trajectory *traj) {
  return traj ? traj->data.times.size() : 0;
}

double td_trajectory_step(const td_trajectory *traj) {
  return traj ? traj->data.step : 0.0;
}

int td_trajectory_truncated(const td_trajectory *traj) {
  return traj && traj->data.truncated ? 1 : 0;
}

td_status td_trajectory_node(const td_trajectory *traj, size_t index,
                             double *time, td_state *state) {
  if (!traj || !time || !state)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  g_last_error.clear();
  if (index >= traj->data.times.size())
    return fail(TD_ERR_INVALID_ARGUMENT, "node index out of range");
  *time = traj->data.times[index];
  *state = from_core(traj->data.states[index]);
  return TD_OK;
}

void td_trajectory_free(td_trajectory *traj) { delete traj; }

td_status td_oscillation(const td_trajectory *traj, const td_state *reference,
                         double window, td_oscillation_report *report) {
  if (!traj || !reference || !report)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    const taxdyn::OscillationMetrics metrics = taxdyn::oscillation_metrics(
        traj->data, to_core(*reference), window);
    report->growth_rate = metrics.growth_rate;
    report->verdict = static_cast<int>(metrics.verdict);
    report->extremum_count = metrics.peak_amplitudes.size();
    return TD_OK;
  });
}

td_status td_stability(const td_params *params, const td_speeds *speeds,
                       td_stability_report *report) {
  if (!params || !speeds || !report)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    taxdyn::validate(to_core(*speeds));
    const taxdyn::JacobianCoefficients co =
        taxdyn::jacobian_coefficients(to_core(*params));
    const taxdyn::Matrix4 matrix =
        taxdyn::jacobian_matrix(co, to_core(*speeds));
    const taxdyn::CharPolyNoDelay poly = taxdyn::char_poly_no_delay(matrix);
    const taxdyn::RouthHurwitzReport routh = taxdyn::routh_hurwitz(poly);
    const auto eigenvalues = taxdyn::eigenvalue_oracle(poly);
    report->a10 = co.a10;
    report->a01 = co.a01;
    report->a001 = co.a001;
    report->b10 = co.b10;
    report->b01 = co.b01;
    report->b001 = co.b001;
    report->c10 = co.c10;
    report->c01 = co.c01;
    report->c001 = co.c001;
    report->d10 = co.d10;
    report->d01 = co.d01;
    report->d001 = co.d001;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        report->jacobian[i][j] =
            matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];
    report->m43 = poly.m43;
    report->m42 = poly.m42;
    report->m41 = poly.m41;
    report->m40 = poly.m40;
    report->d1 = routh.d1;
    report->d2 = routh.d2;
    report->d3 = routh.d3;
    report->d4 = routh.d4;
    report->stable = routh.stable ? 1 : 0;
    for (int i = 0; i < 4; ++i) {
      report->eig_re[i] = eigenvalues[static_cast<size_t>(i)].real();
      report->eig_im[i] = eigenvalues[static_cast<size_t>(i)].imag();
    }
    return TD_OK;
  });
}

td_status td_hopf(const td_params *params, const td_speeds *speeds,
                  td_hopf_report *report) {
  if (!params || !speeds || !report)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  return guarded([&] {
    const taxdyn::HopfAnalysis analysis =
        taxdyn::classify(to_core(*params), to_core(*speeds));
    std::memset(report, 0, sizeof(*report));
    report->n43 = analysis.delay_coeffs.n43;
    report->n42 = analysis.delay_coeffs.n42;
    report->n41 = analysis.delay_coeffs.n41;
    report->n40 = analysis.delay_coeffs.n40;
    report->n22 = analysis.delay_coeffs.n22;
    report->n21 = analysis.delay_coeffs.n21;
    report->n20 = analysis.delay_coeffs.n20;
    report->r6 = analysis.omega_poly.r6;
    report->r4 = analysis.omega_poly.r4;
    report->r2 = analysis.omega_poly.r2;
    report->r0 = analysis.omega_poly.r0;
    report->crossing_count = static_cast<int>(
        std::min<size_t>(analysis.crossings.size(), 4));
    for (int i = 0; i < report->crossing_count; ++i)
      report->crossings[i] = analysis.crossings[static_cast<size_t>(i)];
    report->classification = static_cast<int>(analysis.classification);
    if (analysis.omega0) {
      report->has_crossing = 1;
      report->omega0 = *analysis.omega0;
      report->tau0 = *analysis.tau0;
      report->transversality = analysis.transversality_value;
      report->crossing_residual = analysis.crossing_residual;
    }
    return TD_OK;
  });
}

td_status td_sweep_run(const td_params *base, const double *s_values,
                       size_t count, td_sweep **out) {
  if (!base || !s_values || !out)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  if (count == 0)
    return fail(TD_ERR_INVALID_ARGUMENT, "grid must not be empty");
  *out = nullptr;
  return guarded([&] {
    auto rows = taxdyn::static_sweep(to_core(*base), {s_values, count});
    *out = new td_sweep{std::move(rows)};
    return TD_OK;
  });
}

size_t td_sweep_size(const td_sweep *sweep) {
  return sweep ? sweep->rows.size() : 0;
}

td_status td_sweep_row(const td_sweep *sweep, size_t index,
                       td_sweep_entry *entry) {
  if (!sweep || !entry)
    return fail(TD_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  g_last_error.clear();
  if (index >= sweep->rows.size())
    return fail(TD_ERR_INVALID_ARGUMENT, "row index out of range");
  const taxdyn::SweepRow &row = sweep->rows[index];
  entry->s = row.s_value;
  entry->z1_star = row.z1_star;
  entry->z2_star = row.z2_star;
  entry->p1_star = row.p1_star;
  entry->p2_star = row.p2_star;
  entry->feasible = row.feasible ? 1 : 0;
  return TD_OK;
}

void td_sweep_free(td_sweep *sweep) { delete sweep; }

} // extern "C"
