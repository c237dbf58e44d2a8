#pragma once

#include <string>
#include <vector>

#include "aigrid/trace.hpp"

namespace aigrid::ups {

struct UpsConfig {
  double capacity_j = 1.0;
  Watts max_charge_power = 1.0;
  Watts max_discharge_power = 1.0;
  double round_trip_efficiency = 1.0;  // split as sqrt(eta) per direction
  double grid_ramp_limit = 1.0;        // W/s; +inf disables smoothing
  double initial_soc_fraction = 0.5;

  void validate() const;
};

enum class ViolationReason { Depleted, Saturated, PowerLimited };

std::string to_string(ViolationReason reason);

struct Violation {
  Seconds time = 0.0;
  ViolationReason reason = ViolationReason::Depleted;
};

struct UpsResult {
  PowerTrace grid_trace;
  std::vector<double> soc_trace;  // joules, one entry per sample
  std::vector<Violation> violations;
  double energy_discharged_j = 0.0;  // delivered to the load bus
  double energy_charged_j = 0.0;     // taken from the load bus
  double conversion_losses_j = 0.0;
};

/// Greedy rate-limited tracking: each step the grid moves toward the load by
/// at most grid_ramp_limit * dt and the buffer covers the gap. When the
/// buffer cannot (energy or power bound), the grid snaps to the load for that
/// step and the reason is logged.
UpsResult smooth(const PowerTrace& load, const UpsConfig& config);

/// Grid-side energy minus load energy over the steps after the first, i.e.
/// sum_k (grid_k - load_k) * dt; equals dSoC + losses for a consistent run.
double grid_minus_load_energy(const PowerTrace& load, const UpsResult& result);

enum class Stage { Pretrain, Finetune, Inference };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& name);

struct StageInterval {
  Seconds start_s = 0.0;
  Seconds end_s = 0.0;  // exclusive
  Stage stage = Stage::Pretrain;
  Watts cap = 0.0;
};

struct StageSchedule {
  std::vector<StageInterval> intervals;

  void validate() const;
};

/// Pointwise min(load, cap of the active stage); unchanged outside intervals.
PowerTrace apply_stage_caps(const PowerTrace& load, const StageSchedule& schedule);

}  // namespace aigrid::ups
