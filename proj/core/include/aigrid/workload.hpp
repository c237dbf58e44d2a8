#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aigrid/trace.hpp"

namespace aigrid::workload {

struct AcceleratorSpec {
  int count = 0;
  Watts peak_power = 1.0;  // TDP-class value
  Watts idle_power = 0.0;

  void validate() const;
};

class UtilizationFactor {
 public:
  explicit UtilizationFactor(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// N * P_peak * U.
Watts steady_ai_power(const AcceleratorSpec& spec, UtilizationFactor u);

struct TrainingProfile {
  Watts base_power = 0.0;
  UtilizationFactor u_max{0.98};
  Seconds t_start = 0.0;
  Seconds t_end = 1.0;

  void validate() const;
};

/// Inside [t_start, t_end]: base + N * peak * u_max. Outside: base + N * idle.
Watts training_power(Seconds t, const TrainingProfile& profile, const AcceleratorSpec& spec);

enum class FineTuneMode { High, Low, Off };

std::string to_string(FineTuneMode mode);
FineTuneMode fine_tune_mode_from_string(const std::string& name);

/// Half-open interval [start_s, end_s) in one utilization mode.
struct ScheduleSegment {
  Seconds start_s = 0.0;
  Seconds end_s = 0.0;
  FineTuneMode mode = FineTuneMode::High;
};

struct FineTuneProfile {
  Watts base_power = 0.0;
  double beta = 0.5;         // scaling in low mode, strictly inside (0, 1)
  double utilization = 1.0;  // accelerator utilization while alpha(t) = 1
  std::vector<ScheduleSegment> schedule;
  Seconds eval_interval_s = 1.0;
  Seconds eval_dip_duration_s = 0.0;

  void validate() const;
  /// Mode active at t; times outside every segment count as Off. Segments
  /// are half-open except the last, which includes its end.
  FineTuneMode mode_at(Seconds t) const;
  /// Evaluation dips occupy [k * interval, k * interval + dip) for k >= 1.
  bool in_eval_dip(Seconds t) const;
};

/// base + alpha(t) * N * peak * utilization, with alpha = 1 (high), beta (low)
/// or 0 (off). During an evaluation dip the accelerator term vanishes.
Watts finetune_power(Seconds t, const FineTuneProfile& profile, const AcceleratorSpec& spec);

/// Random two-level schedule: a Markov chain over {high, low, off} with
/// exponential dwell times (floored at min_dwell so every segment covers at
/// least one grid point).
struct MarkovScheduleSpec {
  Seconds start_s = 0.0;
  Seconds end_s = 0.0;
  FineTuneMode initial = FineTuneMode::High;
  std::array<Seconds, 3> mean_dwell_s{60.0, 10.0, 10.0};                  // indexed by mode
  std::array<std::array<double, 3>, 3> transitions{{{0, 1, 0}, {1, 0, 0}, {1, 0, 0}}};  // row = from

  void validate() const;
};

std::vector<ScheduleSegment> generate_markov_schedule(const MarkovScheduleSpec& spec, Seconds min_dwell,
                                                      std::mt19937_64& rng);

/// Piecewise-constant arrival rate; each entry holds from start_s until the next.
struct RateSegment {
  Seconds start_s = 0.0;
  double rate_per_s = 0.0;
};

struct InferenceProfile {
  Watts base_power = 0.0;
  std::vector<RateSegment> rate_schedule;
  Seconds query_duration_s = 1.0;
  std::vector<double> size_weights{1.0};
  std::vector<double> complexity_weights{1.0};
  /// query_power[size][complexity] in watts.
  std::vector<std::vector<Watts>> query_power{{0.0}};

  void validate() const;
  double rate_at(Seconds t) const;
};

/// Stateful Poisson query process. Each step draws Poisson(lambda(t) * dt)
/// arrivals; every arrival draws a size and complexity class and stays active
/// for round(query_duration / dt) steps (at least one).
class InferenceSimulator {
 public:
  InferenceSimulator(InferenceProfile profile, Seconds dt, std::uint64_t seed);

  /// Power at grid time t, then advances the arrival state by one step.
  Watts step(Seconds t);
  std::uint64_t last_arrivals() const noexcept { return last_arrivals_; }
  std::size_t steps_active() const noexcept { return steps_active_; }

 private:
  InferenceProfile profile_;
  Seconds dt_;
  std::size_t steps_active_;
  std::mt19937_64 rng_;
  std::discrete_distribution<std::size_t> size_dist_;
  std::discrete_distribution<std::size_t> complexity_dist_;
  std::deque<Watts> window_;  // arrival power per step, newest at back
  std::uint64_t last_arrivals_ = 0;
};

struct PhaseMix {
  double w_train = 0.0;
  double w_finetune = 0.0;
  double w_inference = 0.0;

  void validate() const;
};

struct PhaseValues {
  Watts training = 0.0;
  Watts finetune = 0.0;
  Watts inference = 0.0;
};

Watts mixed_power(const PhaseMix& mix, const PhaseValues& values);

struct DynamicsCoefficients {
  Seconds c = 0.0;   // first-derivative scale
  double d = 0.0;    // second-derivative scale, s^2
  Seconds e = 0.0;   // external-derivative scale
};

/// P + C dP/dt + D d2P/dt2 + E dP_ext/dt, not clamped at zero.
PowerTrace dynamic_power(const PowerTrace& trace, const DynamicsCoefficients& coeffs,
                         const std::optional<PowerTrace>& external = std::nullopt);

struct AcceleratorBreakdownFractions {
  double compute = 0.0;
  double memory = 0.0;
  double cooling = 0.0;
  double auxiliary = 0.0;

  void validate() const;
};

struct AcceleratorBreakdown {
  Watts compute = 0.0;
  Watts memory = 0.0;
  Watts cooling = 0.0;
  Watts auxiliary = 0.0;
};

AcceleratorBreakdown accelerator_breakdown(Watts total, const AcceleratorBreakdownFractions& fractions);

}  // namespace aigrid::workload
