#include "aigrid/workload.hpp"

#include <algorithm>
#include <cmath>

#include "aigrid/error.hpp"

namespace aigrid::workload {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::size_t mode_index(FineTuneMode mode) { return static_cast<std::size_t>(mode); }

void check_weights(const std::vector<double>& weights, const char* name) {
  if (weights.empty()) throw ValidationError(std::string(name) + " must not be empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!finite_nonneg(w)) throw ValidationError(std::string(name) + " must be non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ValidationError(std::string(name) + " must have positive total weight");
}

}  // namespace

void AcceleratorSpec::validate() const {
  if (count < 0) throw ValidationError("accelerator count must be >= 0");
  if (!(peak_power > 0.0) || !std::isfinite(peak_power)) throw ValidationError("accelerator peak power must be > 0");
  if (!finite_nonneg(idle_power)) throw ValidationError("accelerator idle power must be >= 0");
  if (idle_power > peak_power) throw ValidationError("accelerator idle power exceeds peak power");
}

UtilizationFactor::UtilizationFactor(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("utilization factor must lie in [0, 1]");
}

Watts steady_ai_power(const AcceleratorSpec& spec, UtilizationFactor u) {
  spec.validate();
  return static_cast<double>(spec.count) * spec.peak_power * u.value();
}

void TrainingProfile::validate() const {
  if (!finite_nonneg(base_power)) throw ValidationError("training base power must be >= 0");
  if (!(t_start < t_end)) throw ValidationError("training window needs t_start < t_end");
}

Watts training_power(Seconds t, const TrainingProfile& profile, const AcceleratorSpec& spec) {
  const double n = static_cast<double>(spec.count);
  if (t >= profile.t_start && t <= profile.t_end) {
    return profile.base_power + n * spec.peak_power * profile.u_max.value();
  }
  return profile.base_power + n * spec.idle_power;
}

std::string to_string(FineTuneMode mode) {
  switch (mode) {
    case FineTuneMode::High:
      return "high";
    case FineTuneMode::Low:
      return "low";
    case FineTuneMode::Off:
      return "off";
  }
  return "off";
}

FineTuneMode fine_tune_mode_from_string(const std::string& name) {
  if (name == "high") return FineTuneMode::High;
  if (name == "low") return FineTuneMode::Low;
  if (name == "off") return FineTuneMode::Off;
  throw ValidationError("unknown fine-tune mode '" + name + "' (expected high, low or off)");
}

void FineTuneProfile::validate() const {
  if (!finite_nonneg(base_power)) throw ValidationError("fine-tune base power must be >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("fine-tune beta must lie strictly inside (0, 1)");
  UtilizationFactor{utilization};
  if (!(eval_interval_s > 0.0)) throw ValidationError("evaluation interval must be > 0");
  if (!finite_nonneg(eval_dip_duration_s)) throw ValidationError("evaluation dip duration must be >= 0");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i].start_s < schedule[i].end_s)) {
      throw ValidationError("schedule segment " + std::to_string(i) + " needs start < end");
    }
    if (i > 0 && schedule[i].start_s < schedule[i - 1].end_s) {
      throw ValidationError("schedule segments must be ordered and non-overlapping (segment " + std::to_string(i) + ")");
    }
  }
}

FineTuneMode FineTuneProfile::mode_at(Seconds t) const {
  auto it = std::upper_bound(schedule.begin(), schedule.end(), t,
                             [](double value, const ScheduleSegment& s) { return value < s.start_s; });
  if (it == schedule.begin()) return FineTuneMode::Off;
  --it;
  if (t < it->end_s) return it->mode;
  // The last segment is closed so a run's final sample keeps its mode.
  return std::next(it) == schedule.end() && t == it->end_s ? it->mode : FineTuneMode::Off;
}

bool FineTuneProfile::in_eval_dip(Seconds t) const {
  if (eval_dip_duration_s <= 0.0 || t < eval_interval_s) return false;
  const double offset = std::fmod(t, eval_interval_s);
  return offset < eval_dip_duration_s;
}

Watts finetune_power(Seconds t, const FineTuneProfile& profile, const AcceleratorSpec& spec) {
  const FineTuneMode mode = profile.mode_at(t);
  double alpha = 0.0;
  if (mode == FineTuneMode::High) alpha = 1.0;
  if (mode == FineTuneMode::Low) alpha = profile.beta;
  if (alpha == 0.0 || profile.in_eval_dip(t)) return profile.base_power;
  return profile.base_power + alpha * static_cast<double>(spec.count) * spec.peak_power * profile.utilization;
}

void MarkovScheduleSpec::validate() const {
  if (!(start_s < end_s)) throw ValidationError("markov schedule needs start < end");
  for (std::size_t m = 0; m < 3; ++m) {
    if (!(mean_dwell_s[m] > 0.0)) throw ValidationError("markov mean dwell times must be > 0");
    double row = 0.0;
    for (double p : transitions[m]) {
      if (!finite_nonneg(p)) throw ValidationError("markov transition weights must be >= 0");
      row += p;
    }
    if (!(row > 0.0)) {
      throw ValidationError("markov transition row '" + to_string(static_cast<FineTuneMode>(m)) + "' has no weight");
    }
  }
}

std::vector<ScheduleSegment> generate_markov_schedule(const MarkovScheduleSpec& spec, Seconds min_dwell,
                                                      std::mt19937_64& rng) {
  spec.validate();
  std::vector<ScheduleSegment> out;
  FineTuneMode mode = spec.initial;
  double t = spec.start_s;
  while (t < spec.end_s) {
    std::exponential_distribution<double> dwell(1.0 / spec.mean_dwell_s[mode_index(mode)]);
    const double end = std::min(spec.end_s, t + std::max(min_dwell, dwell(rng)));
    out.push_back({t, end, mode});
    t = end;
    const auto& row = spec.transitions[mode_index(mode)];
    std::discrete_distribution<std::size_t> next(row.begin(), row.end());
    mode = static_cast<FineTuneMode>(next(rng));
  }
  return out;
}

void InferenceProfile::validate() const {
  if (!finite_nonneg(base_power)) throw ValidationError("inference base power must be >= 0");
  if (!(query_duration_s > 0.0)) throw ValidationError("query duration must be > 0");
  for (std::size_t i = 0; i < rate_schedule.size(); ++i) {
    if (!finite_nonneg(rate_schedule[i].rate_per_s)) throw ValidationError("arrival rate must be >= 0");
    if (i > 0 && !(rate_schedule[i].start_s > rate_schedule[i - 1].start_s)) {
      throw ValidationError("rate schedule start times must be strictly increasing");
    }
  }
  check_weights(size_weights, "size class weights");
  check_weights(complexity_weights, "complexity class weights");
  if (query_power.size() != size_weights.size()) {
    throw ValidationError("query power table needs one row per size class");
  }
  for (const auto& row : query_power) {
    if (row.size() != complexity_weights.size()) {
      throw ValidationError("query power table needs one column per complexity class");
    }
    for (double p : row) {
      if (!finite_nonneg(p)) throw ValidationError("query power must be >= 0");
    }
  }
}

double InferenceProfile::rate_at(Seconds t) const {
  auto it = std::upper_bound(rate_schedule.begin(), rate_schedule.end(), t,
                             [](double value, const RateSegment& s) { return value < s.start_s; });
  if (it == rate_schedule.begin()) return 0.0;
  return std::prev(it)->rate_per_s;
}

InferenceSimulator::InferenceSimulator(InferenceProfile profile, Seconds dt, std::uint64_t seed)
    : profile_(std::move(profile)), dt_(dt), rng_(seed) {
  profile_.validate();
  if (!(dt > 0.0)) throw ValidationError("simulation dt must be > 0");
  steps_active_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(profile_.query_duration_s / dt)));
  size_dist_ = std::discrete_distribution<std::size_t>(profile_.size_weights.begin(), profile_.size_weights.end());
  complexity_dist_ =
      std::discrete_distribution<std::size_t>(profile_.complexity_weights.begin(), profile_.complexity_weights.end());
}

Watts InferenceSimulator::step(Seconds t) {
  const double mean = profile_.rate_at(t) * dt_;
  std::uint64_t arrivals = 0;
  if (mean > 0.0) {
    std::poisson_distribution<std::uint64_t> dist(mean);
    arrivals = dist(rng_);
  }
  double added = 0.0;
  for (std::uint64_t k = 0; k < arrivals; ++k) {
    const std::size_t s = size_dist_(rng_);
    const std::size_t c = complexity_dist_(rng_);
    added += profile_.query_power[s][c];
  }
  last_arrivals_ = arrivals;
  window_.push_back(added);
  if (window_.size() > steps_active_) window_.pop_front();
  double active = 0.0;
  for (double w : window_) active += w;
  return profile_.base_power + active;
}

void PhaseMix::validate() const {
  for (double w : {w_train, w_finetune, w_inference}) {
    if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("phase weights must lie in [0, 1]");
  }
  if (w_train + w_finetune + w_inference > 1.0 + 1e-12) throw ValidationError("phase weights must sum to at most 1");
}

Watts mixed_power(const PhaseMix& mix, const PhaseValues& values) {
  mix.validate();
  return mix.w_train * values.training + mix.w_finetune * values.finetune + mix.w_inference * values.inference;
}

PowerTrace dynamic_power(const PowerTrace& trace, const DynamicsCoefficients& coeffs,
                         const std::optional<PowerTrace>& external) {
  if (!std::isfinite(coeffs.c) || !std::isfinite(coeffs.d) || !std::isfinite(coeffs.e)) {
    throw ValidationError("dynamics coefficients must be finite");
  }
  if (external) require_same_grid(trace, *external, "external power trace");
  if (coeffs.e != 0.0 && !external) throw ValidationError("external coefficient E needs an external power trace");
  const bool use_external = external.has_value() && coeffs.e != 0.0;
  if (coeffs.c == 0.0 && coeffs.d == 0.0 && !use_external) return trace;

  std::vector<double> out(trace.values());
  if (coeffs.c != 0.0) {
    const PowerTrace d1 = derivative(trace);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.c * d1[i];
  }
  if (coeffs.d != 0.0) {
    const PowerTrace d2 = second_derivative(trace);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.d * d2[i];
  }
  if (use_external) {
    const PowerTrace de = derivative(*external);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.e * de[i];
  }
  return PowerTrace(trace.start_time(), trace.dt(), std::move(out));
}

void AcceleratorBreakdownFractions::validate() const {
  for (double f : {compute, memory, cooling, auxiliary}) {
    if (!finite_nonneg(f)) throw ValidationError("breakdown fractions must be >= 0");
  }
  if (std::abs(compute + memory + cooling + auxiliary - 1.0) > 1e-12) {
    throw ValidationError("breakdown fractions must sum to 1");
  }
}

AcceleratorBreakdown accelerator_breakdown(Watts total, const AcceleratorBreakdownFractions& fractions) {
  fractions.validate();
  if (!finite_nonneg(total)) throw ValidationError("accelerator total power must be >= 0");
  return {total * fractions.compute, total * fractions.memory, total * fractions.cooling,
          total * fractions.auxiliary};
}

}  // namespace aigrid::workload
