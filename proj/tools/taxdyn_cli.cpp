// Command-line front end of the taxdyn library. Loads a JSON model
// configuration, dispatches one analysis and writes machine-readable
// results: JSON documents for scalar reports, CSV for series.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <taxdyn.h>

namespace {

using nlohmann::json;

struct RunConfig {
  td_params params{};
  td_speeds speeds{};
  std::optional<double> x10, x20, z10, z20;
  std::optional<double> tau;
  std::optional<double> step;
  std::optional<double> t_end;
};

struct cli_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(td_status status) {
  if (status != TD_OK)
    throw cli_error(std::string(td_last_error()) + " (" +
                    td_status_name(status) + ")");
}

double require_number(const json &doc, const std::string &key) {
  if (!doc.contains(key))
    throw cli_error("config: missing field '" + key + "'");
  const json &value = doc.at(key);
  if (!value.is_number())
    throw cli_error("config: field '" + key + "' must be a number");
  return value.get<double>();
}

std::optional<double> optional_number(const json &doc, const std::string &key) {
  if (!doc.contains(key))
    return std::nullopt;
  const json &value = doc.at(key);
  if (!value.is_number())
    throw cli_error("config: field '" + key + "' must be a number");
  return value.get<double>();
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw cli_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &err) {
    throw cli_error("config: " + std::string(err.what()));
  }
  if (!doc.is_object())
    throw cli_error("config: top level must be a JSON object");

  static const std::set<std::string> known = {
      "q",   "s",   "t1",  "c1",  "c2",  "k1",  "k2",   "h1",
      "h2",  "x10", "x20", "z10", "z20", "tau", "step", "t_end"};
  for (const auto &item : doc.items())
    if (!known.contains(item.key()))
      throw cli_error("config: unknown field '" + item.key() + "'");

  RunConfig config;
  config.params = {require_number(doc, "q"), require_number(doc, "s"),
                   require_number(doc, "t1"), require_number(doc, "c1"),
                   require_number(doc, "c2")};
  config.speeds = {require_number(doc, "k1"), require_number(doc, "k2"),
                   require_number(doc, "h1"), require_number(doc, "h2")};
  config.x10 = optional_number(doc, "x10");
  config.x20 = optional_number(doc, "x20");
  config.z10 = optional_number(doc, "z10");
  config.z20 = optional_number(doc, "z20");
  config.tau = optional_number(doc, "tau");
  config.step = optional_number(doc, "step");
  config.t_end = optional_number(doc, "t_end");

  check(td_params_validate(&config.params));
  check(td_speeds_validate(&config.speeds));
  if (config.tau && !(*config.tau >= 0.0))
    throw cli_error("config: tau must be >= 0");
  if (config.step && !(*config.step > 0.0))
    throw cli_error("config: step must be > 0");
  if (config.t_end && !(*config.t_end > 0.0))
    throw cli_error("config: t_end must be > 0");
  return config;
}

// Missing initial-state components default to the perturbed equilibrium
// (x1* + 0.01, x2*, z1*, z2*).
td_state initial_state(const RunConfig &config) {
  td_equilibrium_report eq;
  check(td_equilibrium(&config.params, &eq));
  return {config.x10.value_or(eq.state.x1 + 0.01),
          config.x20.value_or(eq.state.x2),
          config.z10.value_or(eq.state.z1),
          config.z20.value_or(eq.state.z2)};
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw cli_error("cannot open output file '" + path + "'");
  out << text;
  if (!out)
    throw cli_error("failed writing output file '" + path + "'");
}

std::string format_value(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

json params_json(const td_params &p) {
  return {{"q", p.q}, {"s", p.s}, {"t1", p.t1}, {"c1", p.c1}, {"c2", p.c2}};
}

json speeds_json(const td_speeds &s) {
  return {{"k1", s.k1}, {"k2", s.k2}, {"h1", s.h1}, {"h2", s.h2}};
}

const char *classification_name(int classification) {
  switch (classification) {
  case TD_STABLE_FOR_ALL_DELAYS:
    return "StableForAllDelays";
  case TD_STABLE_UNTIL_TAU0:
    return "StableUntilTau0";
  case TD_UNSTABLE_AT_ZERO_DELAY:
    return "UnstableAtZeroDelay";
  }
  return "unknown";
}

int run_equilibrium(const RunConfig &config, const std::string &out_path) {
  td_equilibrium_report eq;
  td_feasibility_report fr;
  check(td_equilibrium(&config.params, &eq));
  check(td_feasibility(&config.params, &fr));
  double residual_max = 0.0;
  for (double r : eq.foc_residual)
    residual_max = std::max(residual_max, std::abs(r));
  json doc = {
      {"params", params_json(config.params)},
      {"x1_star", eq.state.x1},
      {"x2_star", eq.state.x2},
      {"z1_star", eq.state.z1},
      {"z2_star", eq.state.z2},
      {"evaded", eq.evaded},
      {"feasible", eq.feasible != 0},
      {"c2_lower", fr.c2_lower},
      {"c2_upper", fr.c2_upper},
      {"profit1", eq.profit1},
      {"profit2", eq.profit2},
      {"foc_residual", eq.foc_residual},
      {"foc_residual_max", residual_max},
  };
  write_text(out_path, doc.dump(2) + "\n");
  return 0;
}

int run_stability(const RunConfig &config, const std::string &out_path) {
  td_stability_report report;
  check(td_stability(&config.params, &config.speeds, &report));
  json eigenvalues = json::array();
  for (int i = 0; i < 4; ++i)
    eigenvalues.push_back({{"re", report.eig_re[i]}, {"im", report.eig_im[i]}});
  json jacobian = json::array();
  for (auto &row : report.jacobian)
    jacobian.push_back(std::vector<double>(row, row + 4));
  json doc = {
      {"params", params_json(config.params)},
      {"speeds", speeds_json(config.speeds)},
      {"jacobian_coefficients",
       {{"a10", report.a10},
        {"a01", report.a01},
        {"a001", report.a001},
        {"b10", report.b10},
        {"b01", report.b01},
        {"b001", report.b001},
        {"c10", report.c10},
        {"c01", report.c01},
        {"c001", report.c001},
        {"d10", report.d10},
        {"d01", report.d01},
        {"d001", report.d001}}},
      {"jacobian", jacobian},
      {"char_poly",
       {{"m43", report.m43},
        {"m42", report.m42},
        {"m41", report.m41},
        {"m40", report.m40}}},
      {"hurwitz",
       {{"d1", report.d1},
        {"d2", report.d2},
        {"d3", report.d3},
        {"d4", report.d4}}},
      {"eigenvalues", eigenvalues},
      {"stable", report.stable != 0},
  };
  write_text(out_path, doc.dump(2) + "\n");
  return 0;
}

int run_hopf(const RunConfig &config, const std::string &out_path) {
  td_hopf_report report;
  check(td_hopf(&config.params, &config.speeds, &report));
  json doc = {
      {"params", params_json(config.params)},
      {"speeds", speeds_json(config.speeds)},
      {"delay_coefficients",
       {{"n43", report.n43},
        {"n42", report.n42},
        {"n41", report.n41},
        {"n40", report.n40},
        {"n22", report.n22},
        {"n21", report.n21},
        {"n20", report.n20}}},
      {"omega_polynomial",
       {{"r6", report.r6},
        {"r4", report.r4},
        {"r2", report.r2},
        {"r0", report.r0}}},
      {"crossings", std::vector<double>(report.crossings,
                                        report.crossings +
                                            report.crossing_count)},
      {"classification", classification_name(report.classification)},
  };
  if (report.has_crossing) {
    doc["omega0"] = report.omega0;
    doc["tau0"] = report.tau0;
    doc["transversality"] = report.transversality;
    doc["transversality_sign"] =
        report.transversality > 0 ? 1 : (report.transversality < 0 ? -1 : 0);
    doc["crossing_residual"] = report.crossing_residual;
    // delays of the repeated crossings of the same frequency
    json ladder = json::array();
    for (int j = 0; j < 3; ++j)
      ladder.push_back(report.tau0 +
                       2.0 * std::numbers::pi * j / report.omega0);
    doc["tau_ladder"] = ladder;
  } else {
    doc["omega0"] = nullptr;
    doc["tau0"] = nullptr;
    doc["transversality"] = nullptr;
    doc["transversality_sign"] = nullptr;
    doc["crossing_residual"] = nullptr;
  }
  write_text(out_path, doc.dump(2) + "\n");
  return 0;
}

int run_simulate(const RunConfig &config, std::optional<double> tau_flag,
                 std::optional<double> step_flag,
                 std::optional<double> t_end_flag,
                 const std::string &out_path) {
  const double tau = tau_flag.value_or(config.tau.value_or(0.0));
  const double step = step_flag.value_or(config.step.value_or(0.05));
  double t_end;
  if (t_end_flag)
    t_end = *t_end_flag;
  else if (config.t_end)
    t_end = *config.t_end;
  else {
    // default horizon: twenty periods of the crossing frequency
    td_hopf_report hopf;
    check(td_hopf(&config.params, &config.speeds, &hopf));
    const double omega =
        hopf.has_crossing ? std::max(hopf.omega0, 0.01) : 0.01;
    t_end = 20.0 * 2.0 * std::numbers::pi / omega;
  }
  if (!(tau >= 0.0))
    throw cli_error("tau must be >= 0");
  if (!(step > 0.0))
    throw cli_error("step must be > 0");
  if (!(t_end >= step))
    throw cli_error("t_end must be >= step");

  const td_state init = initial_state(config);
  td_trajectory *traj = nullptr;
  check(td_simulate(&config.params, &config.speeds, &init, tau, step, t_end,
                    &traj));
  std::string text = "t,x1,x2,z1,z2\n";
  const size_t size = td_trajectory_size(traj);
  for (size_t i = 0; i < size; ++i) {
    double time;
    td_state state;
    check(td_trajectory_node(traj, i, &time, &state));
    text += format_value(time) + ',' + format_value(state.x1) + ',' +
            format_value(state.x2) + ',' + format_value(state.z1) + ',' +
            format_value(state.z2) + '\n';
  }
  const bool truncated = td_trajectory_truncated(traj) != 0;
  td_trajectory_free(traj);
  write_text(out_path, text);
  if (truncated)
    std::cerr << "taxdyn: trajectory truncated before t_end "
                 "(price singularity)\n";
  return 0;
}

int run_sweep(std::optional<RunConfig> config, const std::string &preset,
              double from, double to, int steps,
              const std::string &out_path) {
  td_params params;
  if (!preset.empty()) {
    params = {0.12, 22.0, 0.16, 0.3, 0.6};
    from = 22.0;
    to = 100.0;
    steps = 200;
  } else {
    if (!config)
      throw cli_error("sweep requires --config or --preset");
    params = config->params;
  }
  if (steps < 2)
    throw cli_error("--steps must be at least 2");
  if (!(to > from))
    throw cli_error("--to must exceed --from");
  std::vector<double> grid(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i)
    grid[static_cast<size_t>(i)] =
        from + (to - from) * static_cast<double>(i) /
                   static_cast<double>(steps - 1);
  td_sweep *sweep = nullptr;
  check(td_sweep_run(&params, grid.data(), grid.size(), &sweep));
  std::string text = "s,z1_star,z2_star,p1_star,p2_star,feasible\n";
  for (size_t i = 0; i < td_sweep_size(sweep); ++i) {
    td_sweep_entry entry;
    check(td_sweep_row(sweep, i, &entry));
    text += format_value(entry.s) + ',' + format_value(entry.z1_star) + ',' +
            format_value(entry.z2_star) + ',' + format_value(entry.p1_star) +
            ',' + format_value(entry.p2_star) + ',' +
            std::to_string(entry.feasible) + '\n';
  }
  td_sweep_free(sweep);
  write_text(out_path, text);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Cournot duopoly with tax evasion: equilibrium, stability, "
               "delay-induced Hopf bifurcation and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::optional<double> tau_flag, step_flag, t_end_flag;
  std::string preset;
  std::string sweep_param = "s";
  double sweep_from = 22.0;
  double sweep_to = 100.0;
  int sweep_steps = 200;

  auto add_common = [&](CLI::App *cmd, bool config_required) {
    CLI::Option *opt = cmd->add_option("-c,--config", config_path,
                                       "JSON model configuration");
    if (config_required)
      opt->required();
    cmd->add_option("-o,--output", output_path,
                    "output file (default: stdout)");
    return opt;
  };

  CLI::App *cmd_eq = app.add_subcommand(
      "equilibrium", "closed-form stationary state, profits and feasibility");
  add_common(cmd_eq, true);

  CLI::App *cmd_stab = app.add_subcommand(
      "stability",
      "Jacobian, characteristic polynomial, Hurwitz chain and eigenvalues");
  add_common(cmd_stab, true);

  CLI::App *cmd_hopf = app.add_subcommand(
      "hopf", "crossing frequencies, critical delay and classification");
  add_common(cmd_hopf, true);

  CLI::App *cmd_sim =
      app.add_subcommand("simulate", "integrate the dynamic system to CSV");
  add_common(cmd_sim, true);
  cmd_sim->add_option("--tau", tau_flag, "time delay (default: config or 0)");
  cmd_sim->add_option("--step", step_flag,
                      "integration step (default: config or 0.05)");
  cmd_sim->add_option("--t-end", t_end_flag,
                      "integration horizon (default: config or twenty "
                      "periods of the crossing frequency)");

  CLI::App *cmd_sweep = app.add_subcommand(
      "sweep", "equilibrium declarations and profits over a penalty grid");
  CLI::Option *sweep_config = add_common(cmd_sweep, false);
  CLI::Option *preset_opt =
      cmd_sweep->add_option("--preset", preset,
                            "named parameter preset (section2: c1=0.3, "
                            "c2=0.6, q=0.12, t1=0.16, s in [22,100])");
  preset_opt->check(CLI::IsMember({"section2"}));
  preset_opt->excludes(sweep_config);
  cmd_sweep->add_option("--param", sweep_param, "swept parameter (only s)")
      ->check(CLI::IsMember({"s"}));
  cmd_sweep->add_option("--from", sweep_from, "grid start");
  cmd_sweep->add_option("--to", sweep_to, "grid end");
  cmd_sweep->add_option("--steps", sweep_steps,
                        "number of grid points, endpoints included");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_eq->parsed())
      return run_equilibrium(load_config(config_path), output_path);
    if (cmd_stab->parsed())
      return run_stability(load_config(config_path), output_path);
    if (cmd_hopf->parsed())
      return run_hopf(load_config(config_path), output_path);
    if (cmd_sim->parsed())
      return run_simulate(load_config(config_path), tau_flag, step_flag,
                          t_end_flag, output_path);
    if (cmd_sweep->parsed()) {
      std::optional<RunConfig> config;
      if (!config_path.empty())
        config = load_config(config_path);
      return run_sweep(std::move(config), preset, sweep_from, sweep_to,
                       sweep_steps, output_path);
    }
  } catch (const std::exception &err) {
    std::cerr << "taxdyn: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
