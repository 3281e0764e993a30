#include "taxdyn/dynamics.hpp"

#include <cmath>

namespace taxdyn {

Vec4 dde_rhs(const MarketState &state, double x1_delayed,
             const ModelParams &params, const AdjustmentSpeeds &speeds) {
  const double total = state.x1 + state.x2;
  const double total_delayed = x1_delayed + state.x2;
  if (!(total > 0.0) || !(total_delayed > 0.0))
    throw price_singularity("price singularity: total output must be > 0");
  const double p = 1.0 / total;
  const double dp = -1.0 / (total * total);
  const double pd = 1.0 / total_delayed;
  const double dpd = -1.0 / (total_delayed * total_delayed);
  const double qt1 = params.q * params.t1;
  const double qst1 = params.q * params.s * params.t1;
  const double levy = (1.0 - params.q) * params.t1;
  const double e1 = state.x1 * p - state.z1;
  const double e2_delayed = state.x2 * pd - state.z2;
  const double e2 = state.x2 * p - state.z2;
  return {
      speeds.k1 *
          ((1.0 - qt1 - qst1 * e1) * (p + state.x1 * dp) - params.c1),
      speeds.k2 *
          ((1.0 - qt1 - qst1 * e2_delayed) * (pd + state.x2 * dpd) -
           params.c2),
      speeds.h1 * (-levy + qst1 * e1),
      speeds.h2 * (-levy + qst1 * e2),
  };
}

Vec4 ode_rhs(const MarketState &state, const ModelParams &params,
             const AdjustmentSpeeds &speeds) {
  return dde_rhs(state, state.x1, params, speeds);
}

namespace {

MarketState advance(const MarketState &y, double scale, const Vec4 &slope) {
  return {y.x1 + scale * slope[0], y.x2 + scale * slope[1],
          y.z1 + scale * slope[2], y.z2 + scale * slope[3]};
}

bool finite(const MarketState &y) {
  return std::isfinite(y.x1) && std::isfinite(y.x2) && std::isfinite(y.z1) &&
         std::isfinite(y.z2);
}

// One RK4 driver serves both systems. delay_steps == 0 feeds every stage
// its own x1, which is exactly the undelayed right-hand side; delay_steps
// m > 0 feeds stage j of step n the stored stage j of step n - m (the
// classical method-of-steps scheme for tau = m h, full 4th order, no
// interpolation). History values are only consulted while n < m.
Trajectory rk4_drive(MarketState y, const ModelParams &params,
                     const AdjustmentSpeeds &speeds, double h, long n_steps,
                     long delay_steps,
                     const std::function<double(double)> &history, double tau) {
  Trajectory traj;
  traj.step = h;
  traj.times.reserve(static_cast<size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<size_t>(n_steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  constexpr double kStageOffset[4] = {0.0, 0.5, 0.5, 1.0};
  std::vector<std::array<double, 4>> stage_x1;
  if (delay_steps > 0)
    stage_x1.resize(static_cast<size_t>(n_steps));

  for (long n = 0; n < n_steps; ++n) {
    Vec4 slopes[4];
    std::array<double, 4> stages{};
    try {
      for (int j = 0; j < 4; ++j) {
        MarketState yj = y;
        if (j == 1 || j == 2)
          yj = advance(y, 0.5 * h, slopes[j - 1]);
        else if (j == 3)
          yj = advance(y, h, slopes[2]);
        stages[j] = yj.x1;
        double x1_delayed;
        if (delay_steps == 0)
          x1_delayed = yj.x1;
        else if (n >= delay_steps)
          x1_delayed = stage_x1[static_cast<size_t>(n - delay_steps)][j];
        else
          x1_delayed = history(static_cast<double>(n) * h +
                               kStageOffset[j] * h - tau);
        slopes[j] = dde_rhs(yj, x1_delayed, params, speeds);
      }
    } catch (const price_singularity &err) {
      traj.truncated = true;
      traj.error = err.what();
      return traj;
    }
    if (delay_steps > 0)
      stage_x1[static_cast<size_t>(n)] = stages;
    Vec4 increment;
    for (int c = 0; c < 4; ++c)
      increment[c] = (h / 6.0) * (slopes[0][c] + 2.0 * slopes[1][c] +
                                  2.0 * slopes[2][c] + slopes[3][c]);
    y = advance(y, 1.0, increment);
    if (!finite(y)) {
      traj.truncated = true;
      traj.error = "state left the finite range";
      return traj;
    }
    traj.times.push_back(static_cast<double>(n + 1) * h);
    traj.states.push_back(y);
  }
  return traj;
}

long step_count(double h, double t_end) {
  const double steps = std::ceil(t_end / h - 1e-9);
  // a delay far below the requested step can snap h to a sliver; refuse
  // horizons that would take forever rather than silently grinding
  if (!(steps < 2e8))
    throw std::invalid_argument(
        "too many integration steps; raise step or lower t_end");
  return static_cast<long>(steps);
}

void check_integration_args(double step, double t_end) {
  if (!(step > 0.0))
    throw std::invalid_argument("step must be > 0");
  if (!(t_end >= step))
    throw std::invalid_argument("t_end must be >= step");
}

} // namespace

Trajectory integrate_ode(const MarketState &init, const ModelParams &params,
                         const AdjustmentSpeeds &speeds, double step,
                         double t_end) {
  validate(params);
  validate(speeds);
  check_integration_args(step, t_end);
  return rk4_drive(init, params, speeds, step, step_count(step, t_end), 0,
                   {}, 0.0);
}

Trajectory integrate_dde(const HistorySpec &history, const ModelParams &params,
                         const AdjustmentSpeeds &speeds, double tau,
                         double step, double t_end) {
  validate(params);
  validate(speeds);
  check_integration_args(step, t_end);
  if (!(tau >= 0.0))
    throw std::invalid_argument("tau must be >= 0");
  if (!history.phi)
    throw std::invalid_argument("history function must be set");
  long delay_steps = 0;
  double h = step;
  if (tau > 0.0) {
    delay_steps = static_cast<long>(std::ceil(tau / step - 1e-12));
    h = tau / static_cast<double>(delay_steps);
  }
  const MarketState init{history.phi(0.0), history.x20, history.z10,
                         history.z20};
  return rk4_drive(init, params, speeds, h, step_count(h, t_end), delay_steps,
                   history.phi, tau);
}

const char *to_string(Verdict verdict) {
  switch (verdict) {
  case Verdict::Decaying:
    return "Decaying";
  case Verdict::Sustained:
    return "Sustained";
  case Verdict::Growing:
    return "Growing";
  case Verdict::NonOscillatory:
    return "NonOscillatory";
  }
  return "unknown";
}

OscillationMetrics oscillation_metrics(const Trajectory &traj,
                                       const MarketState &reference,
                                       double window) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("trajectory must hold at least two nodes");
  const double t_end = traj.times.back();
  if (!(window > 0.0) || window > t_end - traj.times.front())
    throw std::invalid_argument("window must lie within the trajectory span");

  size_t begin = 0;
  while (begin < traj.times.size() && traj.times[begin] < t_end - window)
    ++begin;

  OscillationMetrics metrics;
  std::vector<double> extremum_times;
  for (size_t i = begin + 1; i + 1 < traj.times.size(); ++i) {
    const double prev = traj.states[i - 1].x1 - reference.x1;
    const double here = traj.states[i].x1 - reference.x1;
    const double next = traj.states[i + 1].x1 - reference.x1;
    const double left = here - prev;
    const double right = next - here;
    if (!(left * right < 0.0))
      continue;
    // parabolic refinement removes the off-grid sampling bias
    const double half_diff = 0.5 * (next - prev);
    const double curvature = prev - 2.0 * here + next;
    double peak = here;
    if (curvature != 0.0)
      peak = here - half_diff * half_diff / (2.0 * curvature);
    const double amplitude = std::abs(peak);
    if (amplitude < 1e-300)
      continue;
    metrics.peak_amplitudes.push_back(amplitude);
    extremum_times.push_back(traj.times[i]);
  }

  if (metrics.peak_amplitudes.size() < 4) {
    metrics.verdict = Verdict::NonOscillatory;
    const double first = std::abs(traj.states[begin].x1 - reference.x1);
    const double last = std::abs(traj.states.back().x1 - reference.x1);
    const double span = t_end - traj.times[begin];
    metrics.growth_rate =
        (first > 0.0 && last > 0.0 && span > 0.0) ? std::log(last / first) / span
                                                  : 0.0;
    return metrics;
  }

  // least-squares slope of log amplitude against time
  const size_t count = metrics.peak_amplitudes.size();
  double mean_t = 0.0;
  double mean_log = 0.0;
  for (size_t i = 0; i < count; ++i) {
    mean_t += extremum_times[i];
    mean_log += std::log(metrics.peak_amplitudes[i]);
  }
  mean_t /= static_cast<double>(count);
  mean_log /= static_cast<double>(count);
  double covariance = 0.0;
  double variance = 0.0;
  for (size_t i = 0; i < count; ++i) {
    const double dt = extremum_times[i] - mean_t;
    covariance += dt * (std::log(metrics.peak_amplitudes[i]) - mean_log);
    variance += dt * dt;
  }
  metrics.growth_rate = covariance / variance;
  if (metrics.growth_rate < -kGrowthTolerance)
    metrics.verdict = Verdict::Decaying;
  else if (metrics.growth_rate > kGrowthTolerance)
    metrics.verdict = Verdict::Growing;
  else
    metrics.verdict = Verdict::Sustained;
  return metrics;
}

} // namespace taxdyn
