#pragma once

#include <map>
#include <string>

#include "aigrid/trace.hpp"

namespace aigrid::facility {

/// How a conversion efficiency enters the component sum. Multiply follows
/// the published decomposition literally; Divide treats the sum as delivered
/// load and returns grid-side draw (load / eta).
enum class EfficiencyMode { Multiply, Divide };

struct FacilityConfig {
  double eta_acac = 1.0;
  double eta_acdc = 1.0;
  EfficiencyMode mode = EfficiencyMode::Multiply;
  std::map<std::string, Watts> supporting_components;  // AHU, chillers, pumps, ...
  std::map<std::string, Watts> it_components;          // servers, network gear, storage, CRAC, UPS_IT

  void validate() const;
};

class CoolingParams {
 public:
  explicit CoolingParams(double cop);
  double cop() const noexcept { return cop_; }

 private:
  double cop_;
};

struct EnergyJoules {
  double value = 0.0;
  double kwh() const noexcept { return value / 3.6e6; }
};

Watts total_power(Watts ac_bus, Watts external);
Watts supporting_infra_power(const FacilityConfig& config);
Watts it_power(const FacilityConfig& config);

/// total / it. Throws ValidationError when it <= 0 or total < it.
double pue(Watts total, Watts it);

/// Q = p_total - p_useful.
Watts heat_generated(Watts p_total, Watts p_useful);
Watts cooling_power(Watts heat, const CoolingParams& params);

/// Trapezoidal integral over the uniform grid.
EnergyJoules total_energy(const PowerTrace& trace);

}  // namespace aigrid::facility
