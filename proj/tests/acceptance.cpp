// Acceptance suite: one checkable criterion per function, each printing a
// single PASS/FAIL line (plus clause details where a criterion has several
// parts). Everything runs through the shared-library C interface; the sweep
// criterion drives the installed command-line tool. Run with no arguments
// for the whole suite or with a criterion number to run one.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <taxdyn.h>

namespace {

const td_params kSetA{0.3, 40.0, 0.16, 0.2, 2.0};
const td_params kSetB{0.3, 40.0, 0.16, 0.2, 1.5};
const td_speeds kSpeeds{0.05, 0.01, 0.05, 0.01};

bool g_all_ok = true;

void report(int criterion, bool ok, const std::string &text) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              text.c_str());
  if (!ok)
    g_all_ok = false;
}

bool api_ok(td_status status, const char *what) {
  if (status == TD_OK)
    return true;
  std::fprintf(stderr, "unexpected failure in %s: %s (%s)\n", what,
               td_last_error(), td_status_name(status));
  return false;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

// ---- criteria 1 and 2: equilibrium regressions ----------------------

bool equilibrium_regression(int criterion, const td_params &params,
                            const double expected[4], const char *label) {
  td_equilibrium_report eq;
  if (!api_ok(td_equilibrium(&params, &eq), "td_equilibrium")) {
    report(criterion, false, std::string(label) + ": call failed");
    return false;
  }
  const double values[4] = {eq.state.x1, eq.state.x2, eq.state.z1,
                            eq.state.z2};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    worst = std::max(worst, std::abs(values[i] - expected[i]));
  const bool ok = worst <= 1e-4;
  report(criterion, ok,
         std::string("equilibrium regression ") + label +
             ": max deviation " + fmt(worst) + " (tolerance 1e-4)");
  return ok;
}

bool criterion1() {
  const double expected[4] = {0.34710, 0.0347, 0.85075, 0.03257};
  return equilibrium_regression(1, kSetA, expected, "(set A)");
}

bool criterion2() {
  const double expected[4] = {0.4359, 0.05813, 0.824019, 0.059313};
  return equilibrium_regression(2, kSetB, expected, "(set B)");
}

// ---- criterion 3: Hopf regression ------------------------------------

bool criterion3() {
  td_hopf_report hopf;
  if (!api_ok(td_hopf(&kSetA, &kSpeeds, &hopf), "td_hopf") ||
      hopf.has_crossing != 1) {
    report(3, false, "Hopf regression (set A): no crossing computed");
    return false;
  }
  const double omega_expected = 0.010083;
  const double tau_expected = 164.5979;
  const double omega_err =
      std::abs(hopf.omega0 - omega_expected) / omega_expected;
  const double tau_err = std::abs(hopf.tau0 - tau_expected) / tau_expected;
  const bool omega_ok = omega_err <= 1e-2;
  const bool tau_ok = tau_err <= 1e-2;
  const bool residual_ok = hopf.crossing_residual < 1e-8;
  std::printf("       - omega0 = %s vs published 0.010083: relative error "
              "%s (tolerance 1e-2) -> %s\n",
              fmt(hopf.omega0).c_str(), fmt(omega_err).c_str(),
              omega_ok ? "ok" : "FAIL");
  std::printf("       - tau0 = %s vs published 164.5979: relative error %s "
              "(tolerance 1e-2) -> %s\n",
              fmt(hopf.tau0).c_str(), fmt(tau_err).c_str(),
              tau_ok ? "ok" : "FAIL");
  std::printf("       - crossing residual %s < 1e-8 (hard gate) -> %s\n",
              fmt(hopf.crossing_residual).c_str(),
              residual_ok ? "ok" : "FAIL");
  const bool ok = omega_ok && tau_ok && residual_ok;
  report(3, ok,
         "Hopf regression (set A): published values are not reproducible "
         "from the printed model; see the clause lines above");
  return ok;
}

// ---- criterion 4: delay-independent stability -------------------------

bool criterion4() {
  td_hopf_report hopf;
  if (!api_ok(td_hopf(&kSetB, &kSpeeds, &hopf), "td_hopf")) {
    report(4, false, "delay-independent stability (set B): call failed");
    return false;
  }
  const bool ok = hopf.crossing_count == 0 &&
                  hopf.classification == TD_STABLE_FOR_ALL_DELAYS;
  report(4, ok,
         std::string("delay-independent stability (set B): ") +
             (hopf.crossing_count == 0 ? "no crossing frequencies"
                                       : "unexpected crossing") +
             ", classification " +
             (hopf.classification == TD_STABLE_FOR_ALL_DELAYS
                  ? "StableForAllDelays"
                  : "unexpected"));
  return ok;
}

// ---- criterion 5: Routh-Hurwitz with the eigenvalue oracle ------------

bool criterion5() {
  bool ok = true;
  std::string detail;
  for (const auto &[params, label] :
       {std::pair{kSetA, "A"}, std::pair{kSetB, "B"}}) {
    td_stability_report report_;
    if (!api_ok(td_stability(&params, &kSpeeds, &report_), "td_stability")) {
      ok = false;
      break;
    }
    double max_re = -1e300;
    for (double re : report_.eig_re)
      max_re = std::max(max_re, re);
    const bool here = report_.stable == 1 && max_re < 0.0;
    ok = ok && here;
    detail += std::string(" set ") + label + ": determinants " +
              (report_.stable ? "positive" : "NOT positive") +
              ", max Re(eig) " + fmt(max_re) + ";";
  }
  report(5, ok, "Routh-Hurwitz at zero delay agrees with the eigenvalues:" +
                    detail);
  return ok;
}

// ---- criterion 6: behavioral check around the critical delay ----------

bool criterion6() {
  td_hopf_report hopf;
  if (!api_ok(td_hopf(&kSetA, &kSpeeds, &hopf), "td_hopf") ||
      hopf.has_crossing != 1) {
    report(6, false, "behavioral check: no crossing computed");
    return false;
  }
  td_equilibrium_report eq;
  if (!api_ok(td_equilibrium(&kSetA, &eq), "td_equilibrium")) {
    report(6, false, "behavioral check: equilibrium failed");
    return false;
  }
  td_state init = eq.state;
  init.x1 += 0.01;
  const double horizon = 20.0 * 2.0 * std::numbers::pi / hopf.omega0;

  auto verdict_at = [&](double tau, td_oscillation_report *osc) {
    td_trajectory *traj = nullptr;
    if (!api_ok(td_simulate(&kSetA, &kSpeeds, &init, tau, 0.05, horizon,
                            &traj),
                "td_simulate"))
      return false;
    const bool usable = td_trajectory_truncated(traj) == 0;
    const bool measured =
        usable &&
        api_ok(td_oscillation(traj, &eq.state, horizon / 2.0, osc),
               "td_oscillation");
    td_trajectory_free(traj);
    return measured;
  };

  td_oscillation_report below, above;
  if (!verdict_at(0.9 * hopf.tau0, &below) ||
      !verdict_at(1.1 * hopf.tau0, &above)) {
    report(6, false, "behavioral check: simulation failed");
    return false;
  }
  const bool below_ok = below.verdict == TD_VERDICT_DECAYING;
  const bool above_ok = above.verdict == TD_VERDICT_GROWING ||
                        above.verdict == TD_VERDICT_SUSTAINED;
  const char *names[] = {"Decaying", "Sustained", "Growing",
                         "NonOscillatory"};
  const bool ok = below_ok && above_ok;
  report(6, ok,
         std::string("behavior brackets the critical delay: 0.9 tau0 -> ") +
             names[below.verdict] + " (rate " + fmt(below.growth_rate) +
             "), 1.1 tau0 -> " + names[above.verdict] + " (rate " +
             fmt(above.growth_rate) + ")");
  return ok;
}

// ---- criterion 7: randomized property suite ---------------------------

struct Draw {
  td_params params;
  td_speeds speeds;
};

Draw draw_feasible(std::mt19937 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    td_params p;
    p.q = 0.05 + 0.95 * unit(rng);
    p.s = 1.0 + 99.0 * unit(rng);
    const double margin = p.q * p.s + p.q - 1.0;
    if (margin <= 0.05)
      continue;
    p.t1 = 0.05 + 0.85 * unit(rng);
    p.c1 = 0.05 + 4.95 * unit(rng);
    const double lower = (1.0 - p.q) * p.c1 / margin;
    const double upper =
        std::min(margin * p.c1 / (1.0 - p.q), 50.0 * p.c1);
    if (upper <= lower)
      continue;
    p.c2 = lower + (0.05 + 0.9 * unit(rng)) * (upper - lower);
    td_speeds sp;
    sp.k1 = 0.005 + 0.495 * unit(rng);
    sp.k2 = 0.005 + 0.495 * unit(rng);
    sp.h1 = 0.005 + 0.495 * unit(rng);
    sp.h2 = 0.005 + 0.495 * unit(rng);
    return {p, sp};
  }
}

bool criterion7() {
  std::mt19937 rng(987654321);
  int foc_failures = 0;
  int jacobian_failures = 0;
  int closure_failures = 0;
  int agreement_failures = 0;
  int feasibility_failures = 0;
  int boundary_skips = 0;

  for (int draw_index = 0; draw_index < 200; ++draw_index) {
    const Draw draw = draw_feasible(rng);
    td_equilibrium_report eq;
    td_stability_report stability;
    td_hopf_report hopf;
    td_feasibility_report feasibility;
    if (!api_ok(td_equilibrium(&draw.params, &eq), "td_equilibrium") ||
        !api_ok(td_stability(&draw.params, &draw.speeds, &stability),
                "td_stability") ||
        !api_ok(td_hopf(&draw.params, &draw.speeds, &hopf), "td_hopf") ||
        !api_ok(td_feasibility(&draw.params, &feasibility),
                "td_feasibility")) {
      report(7, false, "property suite: a library call failed");
      return false;
    }

    for (double r : eq.foc_residual)
      if (!(std::abs(r) < 1e-10))
        ++foc_failures;

    // analytic coefficients against central differences of the exposed
    // right-hand side, with steps scaled to the market total
    const double x_scale = eq.state.x1 + eq.state.x2;
    const double analytic[4][4] = {
        {stability.a10, stability.a01, stability.a001, 0.0},
        {stability.b10, stability.b01, 0.0, stability.b001},
        {stability.c10, stability.c01, stability.c001, 0.0},
        {stability.d10, stability.d01, 0.0, stability.d001}};
    const double row_speed[4] = {draw.speeds.k1, draw.speeds.k2,
                                 draw.speeds.h1, draw.speeds.h2};
    double largest = 0.0;
    for (const auto &row : analytic)
      for (double v : row)
        largest = std::max(largest, std::abs(v));
    for (int j = 0; j < 4; ++j) {
      const double delta = j < 2 ? 1e-7 * x_scale : 1e-7;
      td_state plus = eq.state;
      td_state minus = eq.state;
      double *fp[4] = {&plus.x1, &plus.x2, &plus.z1, &plus.z2};
      double *fm[4] = {&minus.x1, &minus.x2, &minus.z1, &minus.z2};
      *fp[j] += delta;
      *fm[j] -= delta;
      double hi[4], lo[4];
      if (!api_ok(td_ode_rhs(&draw.params, &draw.speeds, &plus, hi),
                  "td_ode_rhs") ||
          !api_ok(td_ode_rhs(&draw.params, &draw.speeds, &minus, lo),
                  "td_ode_rhs")) {
        report(7, false, "property suite: a library call failed");
        return false;
      }
      for (int i = 0; i < 4; ++i) {
        const double numeric = (hi[i] - lo[i]) / (2.0 * delta * row_speed[i]);
        if (!(std::abs(numeric - analytic[i][j]) <=
              1e-6 * std::max(std::abs(analytic[i][j]), 1e-3 * largest)))
          ++jacobian_failures;
      }
    }

    // zero-delay closure of the quasi-polynomial split
    auto closure_tol = [](double a, double b, double c) {
      return 1e-13 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    };
    if (hopf.n43 != stability.m43)
      ++closure_failures;
    if (!(std::abs(hopf.n42 + hopf.n22 - stability.m42) <=
          closure_tol(hopf.n42, hopf.n22, stability.m42)))
      ++closure_failures;
    if (!(std::abs(hopf.n41 + hopf.n21 - stability.m41) <=
          closure_tol(hopf.n41, hopf.n21, stability.m41)))
      ++closure_failures;
    if (!(std::abs(hopf.n40 + hopf.n20 - stability.m40) <=
          closure_tol(hopf.n40, hopf.n20, stability.m40)))
      ++closure_failures;

    // determinant chain versus the eigenvalue oracle
    double max_re = -1e300;
    double eig_scale = 0.0;
    for (int i = 0; i < 4; ++i) {
      max_re = std::max(max_re, stability.eig_re[i]);
      eig_scale = std::max(eig_scale,
                           std::hypot(stability.eig_re[i],
                                      stability.eig_im[i]));
    }
    if (std::abs(max_re) <= 1e-12 * std::max(1.0, eig_scale)) {
      ++boundary_skips;
    } else if ((stability.stable == 1) != (max_re < 0.0)) {
      ++agreement_failures;
    }

    // feasibility flag against the declaration signs
    const bool nonnegative = eq.state.z1 >= 0.0 && eq.state.z2 >= 0.0;
    if ((feasibility.feasible == 1) != nonnegative)
      ++feasibility_failures;
  }

  const bool ok = foc_failures == 0 && jacobian_failures == 0 &&
                  closure_failures == 0 && agreement_failures == 0 &&
                  feasibility_failures == 0;
  std::ostringstream detail;
  detail << "property suite over 200 draws: foc " << foc_failures
         << ", jacobian " << jacobian_failures << ", closure "
         << closure_failures << ", hurwitz/oracle " << agreement_failures
         << ", feasibility " << feasibility_failures << " failures ("
         << boundary_skips << " boundary skips)";
  report(7, ok, detail.str());
  return ok;
}

// ---- criterion 8: integrator order ------------------------------------

bool criterion8() {
  td_equilibrium_report eq;
  if (!api_ok(td_equilibrium(&kSetA, &eq), "td_equilibrium")) {
    report(8, false, "integrator order: equilibrium failed");
    return false;
  }
  td_state init = eq.state;
  init.x1 += 0.01;

  auto terminal = [&](double step, td_state *out) {
    td_trajectory *traj = nullptr;
    if (!api_ok(td_simulate(&kSetA, &kSpeeds, &init, 0.0, step, 100.0,
                            &traj),
                "td_simulate"))
      return false;
    double time;
    const bool got =
        api_ok(td_trajectory_node(traj, td_trajectory_size(traj) - 1, &time,
                                  out),
               "td_trajectory_node");
    td_trajectory_free(traj);
    return got;
  };
  auto distance = [](const td_state &a, const td_state &b) {
    return std::max(std::max(std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2)),
                    std::max(std::abs(a.z1 - b.z1), std::abs(a.z2 - b.z2)));
  };

  td_state full, half, quarter, eighth;
  if (!terminal(0.5, &full) || !terminal(0.25, &half) ||
      !terminal(0.125, &quarter) || !terminal(0.0625, &eighth)) {
    report(8, false, "integrator order: simulation failed");
    return false;
  }
  const double coarse_error = distance(full, quarter);
  const double fine_error = distance(half, eighth);
  const double slope = std::log2(coarse_error / fine_error);
  const bool ok = slope >= 3.5 && slope <= 4.5;
  report(8, ok,
         "integrator order: log-log slope " + fmt(slope) +
             " against quarter-step references (expected within [3.5, 4.5])");
  return ok;
}

// ---- criterion 9: sweep preset through the command-line tool ----------

bool criterion9() {
  const char *cli = std::getenv("TAXDYN_CLI");
  if (!cli) {
    report(9, false, "sweep preset: TAXDYN_CLI is not set");
    return false;
  }
  const std::string csv_path = "acceptance_sweep_preset.csv";
  const std::string command = std::string("\"") + cli +
                              "\" sweep --preset section2 --output " +
                              csv_path + " 2>/dev/null";
  if (std::system(command.c_str()) != 0) {
    report(9, false, "sweep preset: command failed");
    return false;
  }
  std::ifstream in(csv_path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "s,z1_star,z2_star,p1_star,p2_star,feasible") {
    report(9, false, "sweep preset: unexpected header");
    return false;
  }
  size_t rows = 0;
  double prev_z1 = -1e300;
  double prev_z2 = -1e300;
  bool monotone = true;
  bool feasible = true;
  double s_first = 0.0, s_last = 0.0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(fields, cell, ','))
      values.push_back(std::stod(cell));
    if (values.size() != 6) {
      report(9, false, "sweep preset: malformed row");
      return false;
    }
    if (rows == 0)
      s_first = values[0];
    s_last = values[0];
    monotone = monotone && values[1] > prev_z1 && values[2] > prev_z2;
    feasible = feasible && values[5] == 1.0;
    prev_z1 = values[1];
    prev_z2 = values[2];
    ++rows;
  }
  std::remove(csv_path.c_str());
  const bool ok = rows == 200 && monotone && feasible && s_first == 22.0 &&
                  s_last == 100.0;
  std::ostringstream detail;
  detail << "sweep preset over s in [" << s_first << ", " << s_last
         << "]: " << rows << " rows, declarations "
         << (monotone ? "strictly increasing" : "NOT monotone") << ", "
         << (feasible ? "all feasible" : "INFEASIBLE rows present");
  report(9, ok, detail.str());
  return ok;
}

} // namespace

int main(int argc, char **argv) {
  bool (*criteria[])() = {criterion1, criterion2, criterion3,
                          criterion4, criterion5, criterion6,
                          criterion7, criterion8, criterion9};
  const int count = 9;
  if (argc > 1) {
    const int index = std::atoi(argv[1]);
    if (index < 1 || index > count) {
      std::fprintf(stderr, "usage: %s [criterion 1..%d]\n", argv[0], count);
      return 2;
    }
    criteria[index - 1]();
    return g_all_ok ? 0 : 1;
  }
  for (int i = 0; i < count; ++i)
    criteria[i]();
  std::printf("acceptance: %s\n", g_all_ok ? "all criteria passed"
                                           : "some criteria FAILED");
  return g_all_ok ? 0 : 1;
}
