#include "aigrid/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aigrid/error.hpp"
#include "aigrid/facility.hpp"

namespace aigrid::report {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxListedViolations = 100;

json histogram_json(const metrics::Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

json summary_json(const SummaryStats& s) {
  return {{"mean_w", s.mean}, {"max_w", s.max}, {"min_w", s.min}, {"std_w", s.std}, {"duration_s", s.duration_s}};
}

void check_finite(const json& node, const std::string& path) {
  if (node.is_number_float()) {
    if (!std::isfinite(node.get<double>())) throw ValidationError("report value at " + path + " is not finite");
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.items()) check_finite(value, path + "." + key);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) check_finite(node[i], path + "[" + std::to_string(i) + "]");
  }
}

}  // namespace

std::vector<Burst> find_bursts(const PowerTrace& trace, Watts threshold) {
  std::vector<Burst> out;
  std::optional<Burst> open;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double p = trace[i];
    if (p > threshold) {
      if (!open) open = Burst{trace.time_at(i), 0.0, p, 0.0};
      open->duration_s += trace.dt();
      open->peak_w = std::max(open->peak_w, p);
      open->energy_j += p * trace.dt();
    } else if (open) {
      out.push_back(*open);
      open.reset();
    }
  }
  if (open) out.push_back(*open);
  return out;
}

json analyze(const std::string& name, const PowerTrace& trace, const ReportOptions& options) {
  if (trace.empty()) throw ValidationError("cannot analyze an empty trace");
  json r;
  r["schema_version"] = kSchemaVersion;
  r["scenario"] = name;
  r["trace"] = {{"start_time_s", trace.start_time()}, {"dt_s", trace.dt()}, {"samples", trace.size()}};
  const SummaryStats stats = summary_stats(trace);
  r["summary"] = summary_json(stats);

  json notes = json::array();
  const auto negative = std::count_if(trace.values().begin(), trace.values().end(), [](double v) { return v < 0.0; });
  r["trace"]["negative_samples"] = negative;
  if (negative > 0) notes.push_back(std::to_string(negative) + " negative samples (dynamic model overshoot, not clamped)");
  const Watts idle = options.idle.resolve(trace);
  r["idle"] = {{"definition", options.idle.is_explicit() ? "explicit" : "percentile"},
               {"parameter", options.idle.parameter()},
               {"level_w", idle}};
  json ratios = json::object();
  try {
    ratios["peak_average"] = metrics::peak_average_ratio(trace);
  } catch (const ValidationError& e) {
    notes.push_back(std::string("peak_average omitted: ") + e.what());
  }
  try {
    ratios["peak_idle"] = metrics::peak_idle_ratio(trace, options.idle);
  } catch (const ValidationError& e) {
    notes.push_back(std::string("peak_idle omitted: ") + e.what());
  }
  r["ratios"] = ratios;

  const metrics::RampStats ramps = metrics::ramp_decline_stats(trace, options.ramp_bins);
  r["ramps"] = {{"max_ramp_w_per_s", ramps.max_ramp},
                {"max_decline_w_per_s", ramps.max_decline},
                {"histogram", histogram_json(ramps.ramp_histogram)}};

  const facility::EnergyJoules energy = facility::total_energy(trace);
  r["energy"] = {{"joules", energy.value}, {"kwh", energy.kwh()}};

  json exceedance = json::array();
  for (Watts t : options.thresholds) {
    exceedance.push_back({{"threshold_w", t}, {"fraction", metrics::exceedance_fraction(trace, t)}});
  }
  r["exceedance"] = exceedance;

  json cdf = json::array();
  for (const auto& point : metrics::empirical_cdf(trace, options.cdf_bins)) {
    cdf.push_back({{"power_w", point.power_w}, {"fraction", point.cumulative_fraction}});
  }
  r["cdf"] = cdf;

  const Watts burst_threshold = options.burst_threshold.value_or(idle + 0.5 * (stats.max - idle));
  const auto bursts = find_bursts(trace, burst_threshold);
  json b = {{"threshold_w", burst_threshold}, {"count", bursts.size()}};
  if (!bursts.empty()) {
    double peak = 0.0, energy_max = 0.0, dur_min = bursts.front().duration_s, dur_max = 0.0, dur_sum = 0.0;
    for (const Burst& x : bursts) {
      peak = std::max(peak, x.peak_w);
      energy_max = std::max(energy_max, x.energy_j);
      dur_min = std::min(dur_min, x.duration_s);
      dur_max = std::max(dur_max, x.duration_s);
      dur_sum += x.duration_s;
    }
    b["max_peak_w"] = peak;
    b["max_energy_j"] = energy_max;
    b["min_duration_s"] = dur_min;
    b["max_duration_s"] = dur_max;
    b["mean_duration_s"] = dur_sum / static_cast<double>(bursts.size());
  }
  r["bursts"] = b;
  r["notes"] = notes;
  return r;
}

json facility_block(const scenario::FacilitySettings& settings, const PowerTrace& trace) {
  facility::FacilityConfig config = settings.config;
  config.it_components["ai_accelerators"] = summary_stats(trace).mean;
  const Watts supporting = facility::supporting_infra_power(config);
  const Watts it = facility::it_power(config);
  const Watts total = facility::total_power(supporting + it, 0.0);
  json f = {{"efficiency_mode", config.mode == facility::EfficiencyMode::Multiply ? "multiply" : "divide"},
            {"supporting_w", supporting},
            {"it_w", it},
            {"total_w", total}};
  if (it > 0.0) f["pue"] = facility::pue(total, it);
  const Watts heat = facility::heat_generated(total, settings.useful_power_fraction * it);
  f["heat_w"] = heat;
  if (settings.cop) f["cooling_w"] = facility::cooling_power(heat, facility::CoolingParams(*settings.cop));
  return f;
}

json frequency_block(const grid::GridFrequencyParams& params, const PowerTrace& trace) {
  const Watts step = grid::worst_step_change(trace);
  const grid::Rocof r = grid::rocof(params, step);
  json out = {{"worst_step_w", step},
              {"rocof_pu_per_s", r.per_unit_per_s},
              {"stability_index", grid::stability_index(r.per_unit_per_s, params)}};
  if (r.hz_per_s) out["rocof_hz_per_s"] = *r.hz_per_s;
  return out;
}

json power_flow_block(const grid::PowerFlowResult& result) {
  json buses = json::array();
  for (const grid::Bus& b : result.network.buses()) {
    buses.push_back({{"name", b.name},
                     {"type", grid::to_string(b.type)},
                     {"v_pu", b.v_mag},
                     {"angle_rad", b.v_angle},
                     {"p_pu", b.p_spec},
                     {"q_pu", b.q_spec}});
  }
  return {{"converged", true}, {"iterations", result.iterations}, {"max_mismatch_pu", result.max_mismatch}, {"buses", buses}};
}

json ups_block(const PowerTrace& load, const ups::UpsConfig& config, const ups::UpsResult& result) {
  const PowerTrace& g = result.grid_trace;
  double max_grid_step = 0.0;
  for (std::size_t k = 1; k < g.size(); ++k) max_grid_step = std::max(max_grid_step, std::abs(g[k] - g[k - 1]) / g.dt());
  std::map<std::string, std::size_t> by_reason;
  json listed = json::array();
  for (const ups::Violation& v : result.violations) {
    ++by_reason[ups::to_string(v.reason)];
    if (listed.size() < kMaxListedViolations) listed.push_back({{"time_s", v.time}, {"reason", ups::to_string(v.reason)}});
  }
  const double soc0 = result.soc_trace.empty() ? 0.0 : result.soc_trace.front();
  const double soc1 = result.soc_trace.empty() ? 0.0 : result.soc_trace.back();
  const auto [soc_min, soc_max] = result.soc_trace.empty()
                                      ? std::pair{0.0, 0.0}
                                      : std::pair{*std::min_element(result.soc_trace.begin(), result.soc_trace.end()),
                                                  *std::max_element(result.soc_trace.begin(), result.soc_trace.end())};
  const double grid_side = ups::grid_minus_load_energy(load, result);
  const double books = (soc1 - soc0) + result.conversion_losses_j;
  json out = {{"capacity_j", config.capacity_j},
              {"grid_ramp_limit_w_per_s", config.grid_ramp_limit},
              {"max_grid_ramp_w_per_s", max_grid_step},
              {"grid_summary", summary_json(summary_stats(g))},
              {"soc_min_j", soc_min},
              {"soc_max_j", soc_max},
              {"soc_final_j", soc1},
              {"energy_discharged_j", result.energy_discharged_j},
              {"energy_charged_j", result.energy_charged_j},
              {"conversion_losses_j", result.conversion_losses_j},
              {"energy_balance_residual_j", grid_side - books},
              {"violation_count", result.violations.size()},
              {"violations_by_reason", by_reason},
              {"violations", listed}};
  if (!std::isfinite(config.grid_ramp_limit)) out.erase("grid_ramp_limit_w_per_s");
  return out;
}

json batch_block(const scenario::BatchSweep& sweep) {
  json runs = json::array();
  for (const scenario::BatchRun& r : sweep.runs) {
    json row = {{"model", r.model}, {"batch_size", r.batch_size}};
    if (r.out_of_memory()) {
      row["status"] = "oom";
      row["refused"] = true;
    } else {
      const Watts p = sweep.pulse_power(r);
      row["status"] = "ok";
      row["time_s"] = *r.time_s;
      row["pulse_power_w"] = p;
      row["energy_j"] = p * *r.time_s;
      if (r.memory_gb) row["memory_gb"] = *r.memory_gb;
    }
    runs.push_back(std::move(row));
  }
  return {{"device_memory_gb", sweep.device_memory_gb}, {"runs", runs}};
}

json scenario_report(const scenario::ScenarioConfig& sc, const PowerTrace& trace, const ReportOptions& options) {
  json r = analyze(sc.name, trace, options);
  r["seed"] = sc.seed;
  if (sc.facility) r["facility"] = facility_block(*sc.facility, trace);
  PowerTrace load = trace;
  if (sc.stages) {
    load = ups::apply_stage_caps(trace, *sc.stages);
    r["stage_caps"] = {{"capped_summary", summary_json(summary_stats(load))},
                       {"energy_removed_j", facility::total_energy(trace).value - facility::total_energy(load).value}};
  }
  if (sc.ups) {
    r["ups"] = ups_block(load, *sc.ups, ups::smooth(load, *sc.ups));
  }
  if (sc.grid) {
    json g = json::object();
    if (sc.grid->frequency) g["frequency"] = frequency_block(*sc.grid->frequency, load);
    if (sc.grid->network_path) {
      const auto net = scenario::load_network_file(scenario::resolve_path(sc.base_dir, *sc.grid->network_path));
      g["power_flow"] = power_flow_block(grid::solve_power_flow(net));
    }
    g["variability_w"] = grid::estimate_variability(load);
    r["grid"] = g;
  }
  if (sc.batch_sweep) r["batch_runs"] = batch_block(*sc.batch_sweep);
  return r;
}

void validate_report(const json& report) {
  if (!report.is_object()) throw ValidationError("report must be a JSON object");
  if (!report.contains("schema_version") || report["schema_version"] != kSchemaVersion) {
    throw ValidationError("report schema_version must be " + std::to_string(kSchemaVersion));
  }
  for (const char* key : {"scenario", "summary", "ratios", "ramps", "energy", "exceedance", "cdf", "bursts"}) {
    if (!report.contains(key)) throw ValidationError(std::string("report is missing '") + key + "'");
  }
  for (const char* key : {"mean_w", "max_w", "min_w", "std_w", "duration_s"}) {
    if (!report["summary"].contains(key) || !report["summary"][key].is_number()) {
      throw ValidationError(std::string("report summary is missing '") + key + "'");
    }
  }
  check_finite(report, "$");
}

std::string dump(const json& report) { return report.dump(2) + "\n"; }

}  // namespace aigrid::report
