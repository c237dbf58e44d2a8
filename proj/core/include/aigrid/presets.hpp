#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "aigrid/scenario.hpp"

namespace aigrid::presets {

/// A built-in scenario stored as config text. The optional [targets] table
/// holds the statistics the synthesized trace is calibrated against.
struct Preset {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

const std::vector<Preset>& all();
/// Throws ValidationError for an unknown name.
const Preset& find(const std::string& name);

scenario::ScenarioConfig load(const std::string& name);
/// The preset's [targets] table, or an empty object.
nlohmann::json targets(const std::string& name);

}  // namespace aigrid::presets
