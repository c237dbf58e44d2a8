#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aigrid/facility.hpp"
#include "aigrid/grid.hpp"
#include "aigrid/trace.hpp"
#include "aigrid/ups.hpp"
#include "aigrid/workload.hpp"

namespace aigrid::scenario {

/// One schedule entry: a fixed-mode segment or a randomly generated span.
using ScheduleEntry = std::variant<workload::ScheduleSegment, workload::MarkovScheduleSpec>;

struct FineTuneSetup {
  workload::FineTuneProfile profile;  // schedule left empty; filled from entries at synthesis
  std::vector<ScheduleEntry> entries;
};

/// One row of a batch-size sweep. Rows without a processing time ran out of
/// memory and produce a refusal marker instead of a power pulse.
struct BatchRun {
  std::string model;
  int batch_size = 1;
  std::optional<Seconds> time_s;
  std::optional<double> memory_gb;
  std::optional<Watts> power_w;  // overrides the memory-based utilization proxy

  bool out_of_memory() const noexcept { return !time_s.has_value(); }
};

/// Back-to-back constant-power pulses separated by idle gaps. Pulse power is
/// idle + (peak - idle) * min(1, memory_gb / device_memory_gb) unless a run
/// sets power_w.
struct BatchSweep {
  Watts idle_power = 0.0;
  Watts peak_power = 1.0;
  double device_memory_gb = 1.0;
  Seconds gap_s = 10.0;
  std::vector<BatchRun> runs;

  Watts pulse_power(const BatchRun& run) const;
  Seconds total_duration() const;
};

struct FacilitySettings {
  facility::FacilityConfig config;
  std::optional<double> cop;
  double useful_power_fraction = 0.0;  // share of IT power counted as useful work
};

struct GridSettings {
  std::optional<grid::GridFrequencyParams> frequency;
  std::optional<std::string> network_path;  // resolved against the scenario directory
};

struct ScenarioConfig {
  std::string name;
  Seconds dt_s = 1.0;
  Seconds duration_s = 0.0;
  std::uint64_t seed = 0;

  workload::PhaseMix mix;
  workload::AcceleratorSpec accelerators;
  std::optional<workload::TrainingProfile> training;
  std::optional<FineTuneSetup> finetune;
  std::optional<workload::InferenceProfile> inference;
  std::optional<workload::DynamicsCoefficients> dynamics;
  std::optional<std::string> external_trace_path;
  std::optional<BatchSweep> batch_sweep;

  std::optional<FacilitySettings> facility;
  std::optional<ups::UpsConfig> ups;
  std::optional<ups::StageSchedule> stages;
  std::optional<GridSettings> grid;

  std::string base_dir = ".";

  void validate() const;
  /// Samples produced by synthesize(): ceil(duration / dt) + 1.
  std::size_t sample_count() const;
  Seconds effective_duration() const;
};

/// Decodes a parsed config tree (TOML or JSON). Unknown top-level sections
/// are rejected; a `targets` table is accepted and ignored.
ScenarioConfig scenario_from_json(const nlohmann::json& tree, const std::string& base_dir = ".");
ScenarioConfig load_scenario_file(const std::string& path);

/// Deterministic trace for the scenario. `seed` overrides the configured seed.
PowerTrace synthesize(const ScenarioConfig& scenario, std::optional<std::uint64_t> seed = std::nullopt);

/// The fine-tune schedule actually used for a given seed (random entries expanded).
std::vector<workload::ScheduleSegment> expand_schedule(const ScenarioConfig& scenario, std::uint64_t seed);

/// Decoders for the standalone tables used by the CLI.
ups::UpsConfig ups_from_json(const nlohmann::json& table);
ups::StageSchedule stages_from_json(const nlohmann::json& array);
/// { sites = [{ power_w, area_km2 }, ...] }
std::vector<grid::LoadSite> sites_from_json(const nlohmann::json& tree);
/// { fundamental_a, harmonics = { "3" = amplitude, ... } }
grid::HarmonicSpectrum spectrum_from_json(const nlohmann::json& tree);

std::string resolve_path(const std::string& base_dir, const std::string& path);

/// Reads a network description (buses + lines or an explicit admittance
/// matrix, per-unit) from JSON.
grid::GridNetwork network_from_json(const nlohmann::json& tree);
grid::GridNetwork load_network_file(const std::string& path);
nlohmann::json network_to_json(const grid::GridNetwork& net);

}  // namespace aigrid::scenario
