#include "aigrid/ups.hpp"

#include <algorithm>
#include <cmath>

#include "aigrid/error.hpp"

namespace aigrid::ups {

void UpsConfig::validate() const {
  if (!(capacity_j > 0.0) || !std::isfinite(capacity_j)) throw ValidationError("UPS capacity must be > 0");
  if (!(max_charge_power > 0.0)) throw ValidationError("UPS max charge power must be > 0");
  if (!(max_discharge_power > 0.0)) throw ValidationError("UPS max discharge power must be > 0");
  if (!(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0)) {
    throw ValidationError("UPS round-trip efficiency must lie in (0, 1]");
  }
  if (!(grid_ramp_limit > 0.0)) throw ValidationError("grid ramp limit must be > 0");
  if (!(initial_soc_fraction >= 0.0 && initial_soc_fraction <= 1.0)) {
    throw ValidationError("initial state of charge must lie in [0, 1]");
  }
}

std::string to_string(ViolationReason reason) {
  switch (reason) {
    case ViolationReason::Depleted:
      return "depleted";
    case ViolationReason::Saturated:
      return "saturated";
    case ViolationReason::PowerLimited:
      return "power-limited";
  }
  return "depleted";
}

UpsResult smooth(const PowerTrace& load, const UpsConfig& config) {
  config.validate();
  for (double v : load.samples()) {
    if (v < 0.0) throw ValidationError("UPS smoothing needs a non-negative load trace");
  }
  UpsResult out;
  const std::size_t n = load.size();
  if (n == 0) {
    out.grid_trace = load;
    return out;
  }
  const double dt = load.dt();
  const double leg_eff = std::sqrt(config.round_trip_efficiency);
  const double max_step = config.grid_ramp_limit * dt;

  std::vector<double> grid(n);
  out.soc_trace.resize(n);
  double soc = config.initial_soc_fraction * config.capacity_j;
  grid[0] = load[0];
  out.soc_trace[0] = soc;

  for (std::size_t k = 1; k < n; ++k) {
    const double target = std::clamp(load[k], grid[k - 1] - max_step, grid[k - 1] + max_step);
    const double gap = load[k] - target;  // > 0: buffer discharges, < 0: buffer charges
    double g = target;
    if (gap > 0.0) {
      const double drawn = gap * dt / leg_eff;
      if (gap > config.max_discharge_power) {
        out.violations.push_back({load.time_at(k), ViolationReason::PowerLimited});
        g = load[k];
      } else if (drawn > soc) {
        out.violations.push_back({load.time_at(k), ViolationReason::Depleted});
        g = load[k];
      } else {
        soc -= drawn;
        out.energy_discharged_j += gap * dt;
        out.conversion_losses_j += drawn - gap * dt;
      }
    } else if (gap < 0.0) {
      const double surplus = -gap;
      const double stored = surplus * dt * leg_eff;
      if (surplus > config.max_charge_power) {
        out.violations.push_back({load.time_at(k), ViolationReason::PowerLimited});
        g = load[k];
      } else if (soc + stored > config.capacity_j) {
        out.violations.push_back({load.time_at(k), ViolationReason::Saturated});
        g = load[k];
      } else {
        soc += stored;
        out.energy_charged_j += surplus * dt;
        out.conversion_losses_j += surplus * dt - stored;
      }
    }
    soc = std::clamp(soc, 0.0, config.capacity_j);
    grid[k] = g;
    out.soc_trace[k] = soc;
  }
  out.grid_trace = PowerTrace(load.start_time(), dt, std::move(grid));
  return out;
}

double grid_minus_load_energy(const PowerTrace& load, const UpsResult& result) {
  require_same_grid(load, result.grid_trace, "UPS grid trace");
  double sum = 0.0;
  for (std::size_t k = 1; k < load.size(); ++k) sum += (result.grid_trace[k] - load[k]) * load.dt();
  return sum;
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Pretrain:
      return "pretrain";
    case Stage::Finetune:
      return "finetune";
    case Stage::Inference:
      return "inference";
  }
  return "pretrain";
}

Stage stage_from_string(const std::string& name) {
  if (name == "pretrain") return Stage::Pretrain;
  if (name == "finetune") return Stage::Finetune;
  if (name == "inference") return Stage::Inference;
  throw ValidationError("unknown stage '" + name + "' (expected pretrain, finetune or inference)");
}

void StageSchedule::validate() const {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& s = intervals[i];
    if (!(s.start_s < s.end_s)) throw ValidationError("stage interval " + std::to_string(i) + " needs start < end");
    if (!(s.cap >= 0.0)) throw ValidationError("stage cap must be >= 0");
    if (i > 0 && s.start_s < intervals[i - 1].end_s) {
      throw ValidationError("stage intervals must be ordered and non-overlapping");
    }
  }
}

PowerTrace apply_stage_caps(const PowerTrace& load, const StageSchedule& schedule) {
  schedule.validate();
  std::vector<double> out(load.values());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = load.time_at(i);
    auto it = std::upper_bound(schedule.intervals.begin(), schedule.intervals.end(), t,
                               [](double value, const StageInterval& s) { return value < s.start_s; });
    if (it == schedule.intervals.begin()) continue;
    --it;
    if (t < it->end_s) out[i] = std::min(out[i], it->cap);
  }
  return PowerTrace(load.start_time(), load.dt(), std::move(out));
}

}  // namespace aigrid::ups
