#include "aigrid/facility.hpp"

#include <cmath>

#include "aigrid/error.hpp"

namespace aigrid::facility {

namespace {

void check_components(const std::map<std::string, Watts>& components, const char* group) {
  for (const auto& [name, watts] : components) {
    if (!(watts >= 0.0) || !std::isfinite(watts)) {
      throw ValidationError(std::string(group) + " component '" + name + "' must be a finite non-negative power");
    }
  }
}

void check_efficiency(double eta, const char* name) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
}

Watts apply_efficiency(double eta, EfficiencyMode mode, const std::map<std::string, Watts>& components) {
  double sum = 0.0;
  for (const auto& [name, watts] : components) sum += watts;
  return mode == EfficiencyMode::Multiply ? eta * sum : sum / eta;
}

}  // namespace

void FacilityConfig::validate() const {
  check_efficiency(eta_acac, "eta_acac");
  check_efficiency(eta_acdc, "eta_acdc");
  check_components(supporting_components, "supporting");
  check_components(it_components, "IT");
}

CoolingParams::CoolingParams(double cop) : cop_(cop) {
  if (!(cop > 0.0) || !std::isfinite(cop)) throw ValidationError("cooling COP must be positive");
}

Watts total_power(Watts ac_bus, Watts external) {
  if (!(ac_bus >= 0.0) || !(external >= 0.0)) throw ValidationError("bus and external power must be non-negative");
  return ac_bus + external;
}

Watts supporting_infra_power(const FacilityConfig& config) {
  config.validate();
  return apply_efficiency(config.eta_acac, config.mode, config.supporting_components);
}

Watts it_power(const FacilityConfig& config) {
  config.validate();
  return apply_efficiency(config.eta_acdc, config.mode, config.it_components);
}

double pue(Watts total, Watts it) {
  if (!(it > 0.0)) throw ValidationError("PUE undefined: IT power must be positive");
  if (total < it) throw ValidationError("PUE invalid: total power below IT power");
  return total / it;
}

Watts heat_generated(Watts p_total, Watts p_useful) {
  if (!(p_useful >= 0.0)) throw ValidationError("useful power must be non-negative");
  if (p_useful > p_total) throw ValidationError("useful power exceeds total power");
  return p_total - p_useful;
}

Watts cooling_power(Watts heat, const CoolingParams& params) {
  if (!(heat >= 0.0)) throw ValidationError("heat load must be non-negative");
  return heat / params.cop();
}

EnergyJoules total_energy(const PowerTrace& trace) {
  if (trace.empty()) throw ValidationError("energy of an empty trace");
  const auto s = trace.samples();
  double sum = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) sum += 0.5 * (s[i - 1] + s[i]);
  return {sum * trace.dt()};
}

}  // namespace aigrid::facility
