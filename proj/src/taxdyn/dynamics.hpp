#pragma once

#include <functional>
#include <string>
#include <vector>

#include "taxdyn/types.hpp"

namespace taxdyn {

// Time derivatives (x1', x2', z1', z2') of the undelayed adjustment system.
Vec4 ode_rhs(const MarketState &state, const ModelParams &params,
             const AdjustmentSpeeds &speeds);

// Delayed variant: the follower reads the leader output x1 observed tau
// time units earlier, so every price evaluation inside the x2 row uses
// x1_delayed + x2. The declaration rows use the current state throughout.
Vec4 dde_rhs(const MarketState &state, double x1_delayed,
             const ModelParams &params, const AdjustmentSpeeds &speeds);

// Leader history on [-tau, 0] plus the remaining initial values at t = 0.
// phi(0) is the starting x1.
struct HistorySpec {
  std::function<double(double)> phi;
  double x20;
  double z10;
  double z20;
};

struct Trajectory {
  std::vector<double> times; // uniform grid including t = 0
  std::vector<MarketState> states;
  double step = 0.0;
  bool truncated = false; // hit a price singularity or left the finite range
  std::string error;
};

// Classical fixed-step 4th-order integration from 0 to t_end.
Trajectory integrate_ode(const MarketState &init, const ModelParams &params,
                         const AdjustmentSpeeds &speeds, double step,
                         double t_end);

// Method of steps: the requested step is snapped to tau/ceil(tau/step) so
// delayed lookups land on stored values (stage-aligned; no interpolation).
// tau = 0 reproduces integrate_ode bit for bit.
Trajectory integrate_dde(const HistorySpec &history, const ModelParams &params,
                         const AdjustmentSpeeds &speeds, double tau,
                         double step, double t_end);

enum class Verdict { Decaying, Sustained, Growing, NonOscillatory };

const char *to_string(Verdict verdict);

// Growth-rate threshold separating decaying / sustained / growing envelopes.
inline constexpr double kGrowthTolerance = 1e-5;

struct OscillationMetrics {
  std::vector<double> peak_amplitudes; // |x1 - x1*| at successive extrema
  double growth_rate = 0.0;            // log-amplitude slope per unit time
  Verdict verdict = Verdict::NonOscillatory;
};

// Envelope classification of x1(t) - reference.x1 over the trailing
// `window` time units. Fewer than four extrema yields NonOscillatory with
// the growth rate taken from the endpoint ratio.
OscillationMetrics oscillation_metrics(const Trajectory &traj,
                                       const MarketState &reference,
                                       double window);

} // namespace taxdyn
