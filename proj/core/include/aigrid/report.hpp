#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "aigrid/grid.hpp"
#include "aigrid/metrics.hpp"
#include "aigrid/scenario.hpp"
#include "aigrid/trace.hpp"
#include "aigrid/ups.hpp"

namespace aigrid::report {

inline constexpr int kSchemaVersion = 1;

struct ReportOptions {
  metrics::IdleDefinition idle = metrics::IdleDefinition::default_definition();
  std::vector<Watts> thresholds;
  std::size_t ramp_bins = metrics::kDefaultRampBins;
  std::size_t cdf_bins = metrics::kDefaultCdfBins;
  /// Level above which samples count as part of a burst. Defaults to the
  /// midpoint between the idle level and the peak.
  std::optional<Watts> burst_threshold;
};

/// Maximal runs of samples strictly above a threshold.
struct Burst {
  Seconds start_s = 0.0;
  Seconds duration_s = 0.0;  // samples in the run times dt
  Watts peak_w = 0.0;
  double energy_j = 0.0;  // sum of samples times dt over the run
};

std::vector<Burst> find_bursts(const PowerTrace& trace, Watts threshold);

/// Trace-only report: summary, ratios, ramps, energy, exceedance, CDF, bursts.
nlohmann::json analyze(const std::string& name, const PowerTrace& trace, const ReportOptions& options = {});

nlohmann::json facility_block(const scenario::FacilitySettings& settings, const PowerTrace& trace);
nlohmann::json frequency_block(const grid::GridFrequencyParams& params, const PowerTrace& trace);
nlohmann::json power_flow_block(const grid::PowerFlowResult& result);
nlohmann::json ups_block(const PowerTrace& load, const ups::UpsConfig& config, const ups::UpsResult& result);
nlohmann::json batch_block(const scenario::BatchSweep& sweep);

/// Full report for a scenario run: analyze() plus every block the scenario
/// configures. UPS smoothing sees the load after stage caps.
nlohmann::json scenario_report(const scenario::ScenarioConfig& scenario, const PowerTrace& trace,
                               const ReportOptions& options = {});

/// Structural check of a report: schema version, required keys, and every
/// number finite. Throws ValidationError naming the offending path.
void validate_report(const nlohmann::json& report);

std::string dump(const nlohmann::json& report);

}  // namespace aigrid::report
