// aigrid: synthesize AI workload power traces and evaluate their grid impact.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aigrid/config_text.hpp"
#include "aigrid/error.hpp"
#include "aigrid/grid.hpp"
#include "aigrid/presets.hpp"
#include "aigrid/report.hpp"
#include "aigrid/scenario.hpp"
#include "aigrid/trace.hpp"
#include "aigrid/ups.hpp"

namespace {

using nlohmann::json;
namespace report = aigrid::report;
namespace scenario = aigrid::scenario;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("aigrid");
  logger->set_pattern("aigrid: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("AIGRID_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

// Writes to a sibling temp file and renames, so a failed run leaves no output.
void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw aigrid::IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw aigrid::IoError("failed writing '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw aigrid::IoError("cannot move output into '" + path + "': " + ec.message());
}

void emit_report(const json& r, const std::string& path) {
  report::validate_report(r);
  write_text(path, report::dump(r));
}

struct AnalysisFlags {
  std::optional<double> idle_w;
  std::optional<double> idle_percentile;
  std::vector<double> thresholds;
  std::optional<double> burst_threshold;
  std::size_t ramp_bins = aigrid::metrics::kDefaultRampBins;
  std::size_t cdf_bins = aigrid::metrics::kDefaultCdfBins;

  void attach(CLI::App* cmd) {
    auto* idle = cmd->add_option("--idle", idle_w, "Idle power level in watts");
    cmd->add_option("--idle-percentile", idle_percentile, "Idle level as a sample quantile in (0, 1)")
        ->excludes(idle);
    cmd->add_option("--threshold", thresholds, "Exceedance threshold in watts (repeatable)");
    cmd->add_option("--burst-threshold", burst_threshold, "Burst level in watts (default: midway idle to peak)");
    cmd->add_option("--ramp-bins", ramp_bins, "Ramp histogram bins")->check(CLI::PositiveNumber);
    cmd->add_option("--cdf-bins", cdf_bins, "CDF bins")->check(CLI::PositiveNumber);
  }

  report::ReportOptions options() const {
    report::ReportOptions o;
    if (idle_w) o.idle = aigrid::metrics::IdleDefinition::explicit_watts(*idle_w);
    if (idle_percentile) o.idle = aigrid::metrics::IdleDefinition::percentile(*idle_percentile);
    o.thresholds = thresholds;
    o.burst_threshold = burst_threshold;
    o.ramp_bins = ramp_bins;
    o.cdf_bins = cdf_bins;
    return o;
  }
};

// ---------------------------------------------------------------------------

struct SimulateCmd {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string report_path;
  AnalysisFlags analysis;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Synthesize a power trace from a scenario");
    auto* cfg = cmd->add_option("config", config, "Scenario file (TOML or JSON)");
    cmd->add_option("--preset", preset, "Built-in scenario name")->excludes(cfg);
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--out", out, "Trace CSV path ('-' for stdout)")->required();
    cmd->add_option("--report", report_path, "Also write the scenario report JSON here");
    analysis.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    if (config.empty() == preset.empty()) throw aigrid::ValidationError("give either a config file or --preset");
    const auto sc = preset.empty() ? scenario::load_scenario_file(config) : aigrid::presets::load(preset);
    spdlog::info("simulating '{}' ({} samples at dt={} s)", sc.name, sc.sample_count(), sc.dt_s);
    const auto trace = scenario::synthesize(sc, seed);
    std::optional<json> r;
    if (!report_path.empty()) {
      auto effective = sc;
      if (seed) effective.seed = *seed;
      r = report::scenario_report(effective, trace, analysis.options());
      report::validate_report(*r);
    }
    write_text(out, aigrid::emit_csv_text(trace));
    if (r) emit_report(*r, report_path);
  }
};

struct AnalyzeCmd {
  std::string trace_path;
  std::string name;
  std::string out;
  AnalysisFlags analysis;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("analyze", "Compute the metrics report of a trace CSV");
    cmd->add_option("trace", trace_path, "Trace CSV (timestamp_s,power_w)")->required();
    cmd->add_option("--name", name, "Name recorded in the report (default: file stem)");
    cmd->add_option("--out", out, "Report JSON path ('-' for stdout)")->default_val("-");
    analysis.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto trace = aigrid::read_csv_file(trace_path);
    const std::string label = name.empty() ? std::filesystem::path(trace_path).stem().string() : name;
    emit_report(report::analyze(label, trace, analysis.options()), out);
  }
};

struct GridCmd {
  bool do_rocof = false;
  std::optional<double> inertia;
  std::optional<double> delta_p;
  double p_nominal = 1.0;
  std::optional<double> f_nominal;
  double rocof_threshold = 1.0;
  std::string network;
  std::string sites;
  std::string spectrum;
  std::string ldc_with;
  std::string ldc_without;
  std::optional<double> v_ai;
  std::optional<double> v_re;
  std::optional<double> rho;
  std::string ai_trace;
  std::string re_trace;
  double tolerance = 1e-8;
  int max_iterations = 50;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("grid", "Evaluate grid-impact quantities");
    cmd->add_flag("--rocof", do_rocof, "Frequency response to a power step");
    cmd->add_option("--inertia", inertia, "Inertia constant H in seconds");
    cmd->add_option("--delta-p", delta_p, "Power step, same unit as --p-nominal");
    cmd->add_option("--p-nominal", p_nominal, "Nominal system power")->default_val(1.0);
    cmd->add_option("--f-nominal", f_nominal, "Nominal frequency in Hz (adds Hz/s output)");
    cmd->add_option("--rocof-threshold", rocof_threshold, "RoCoF limit in per-unit/s for the stability index")
        ->default_val(1.0);
    cmd->add_option("--network", network, "Network file for the AC power flow");
    cmd->add_option("--tolerance", tolerance, "Power-flow mismatch tolerance in pu")->default_val(1e-8);
    cmd->add_option("--max-iterations", max_iterations, "Power-flow iteration cap")->default_val(50);
    cmd->add_option("--sdf", sites, "Load-site file for the spatial distribution factor");
    cmd->add_option("--thd", spectrum, "Harmonic spectrum file");
    cmd->add_option("--ldc-with", ldc_with, "Trace including the AI load");
    cmd->add_option("--ldc-without", ldc_without, "Baseline trace without the AI load");
    cmd->add_option("--v-ai", v_ai, "AI load variability (W)");
    cmd->add_option("--v-re", v_re, "Renewable variability (W)");
    cmd->add_option("--rho", rho, "Correlation between AI load and renewables");
    cmd->add_option("--ai-trace", ai_trace, "Estimate V_AI (and rho with --re-trace) from a trace");
    cmd->add_option("--re-trace", re_trace, "Renewable output trace");
    cmd->add_option("--out", out, "Output JSON path ('-' for stdout)")->default_val("-");
    cmd->callback([this] { run(); });
  }

  void run() {
    json g = json::object();
    if (do_rocof) {
      if (!inertia || !delta_p) throw aigrid::ValidationError("--rocof needs --inertia and --delta-p");
      aigrid::grid::GridFrequencyParams params{*inertia, p_nominal, rocof_threshold, f_nominal};
      const auto r = aigrid::grid::rocof(params, *delta_p);
      json block = {{"rocof_pu_per_s", r.per_unit_per_s},
                    {"stability_index", aigrid::grid::stability_index(r.per_unit_per_s, params)}};
      if (r.hz_per_s) block["rocof_hz_per_s"] = *r.hz_per_s;
      g["frequency"] = block;
    }
    if (!network.empty()) {
      const auto net = scenario::load_network_file(network);
      const auto result = aigrid::grid::solve_power_flow(net, {tolerance, max_iterations});
      spdlog::info("power flow converged in {} iterations", result.iterations);
      g["power_flow"] = report::power_flow_block(result);
    }
    if (!sites.empty()) {
      g["sdf_km2"] = aigrid::grid::spatial_distribution_factor(scenario::sites_from_json(aigrid::config::read_config_file(sites)));
    }
    if (!spectrum.empty()) {
      g["thd"] = aigrid::grid::thd(scenario::spectrum_from_json(aigrid::config::read_config_file(spectrum)));
    }
    if (!ldc_with.empty() || !ldc_without.empty()) {
      if (ldc_with.empty() || ldc_without.empty()) throw aigrid::ValidationError("--ldc-with and --ldc-without go together");
      g["ldc_delta_energy_j"] =
          aigrid::grid::ldc_delta_energy(aigrid::read_csv_file(ldc_with), aigrid::read_csv_file(ldc_without));
    }
    if (v_ai || v_re || rho || !ai_trace.empty() || !re_trace.empty()) g["variability"] = variability();
    if (g.empty()) throw aigrid::ValidationError("nothing to evaluate; see 'aigrid grid --help'");
    g["schema_version"] = report::kSchemaVersion;
    write_text(out, report::dump(g));
  }

  json variability() const {
    aigrid::grid::VariabilityInputs in;
    json block = json::object();
    std::optional<aigrid::PowerTrace> ai;
    std::optional<aigrid::PowerTrace> re;
    if (!ai_trace.empty()) ai = aigrid::read_csv_file(ai_trace);
    if (!re_trace.empty()) re = aigrid::read_csv_file(re_trace);
    if (v_ai) {
      in.v_ai = *v_ai;
    } else if (ai) {
      in.v_ai = aigrid::grid::estimate_variability(*ai);
    } else {
      throw aigrid::ValidationError("variability needs --v-ai or --ai-trace");
    }
    if (v_re) {
      in.v_re = *v_re;
    } else if (re) {
      in.v_re = aigrid::grid::estimate_variability(*re);
    } else {
      throw aigrid::ValidationError("variability needs --v-re or --re-trace");
    }
    if (rho) {
      in.rho = *rho;
    } else if (ai && re) {
      in.rho = aigrid::grid::estimate_correlation(*ai, *re);
    } else {
      throw aigrid::ValidationError("variability needs --rho or both --ai-trace and --re-trace");
    }
    block["v_ai_w"] = in.v_ai;
    block["v_re_w"] = in.v_re;
    block["rho"] = in.rho;
    block["v_net_w"] = aigrid::grid::net_load_variability(in);
    return block;
  }
};

struct UpsCmd {
  std::string trace_path;
  std::string config;
  std::string out;
  std::string grid_out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("ups", "Smooth a trace through a bi-directional UPS buffer");
    cmd->add_option("trace", trace_path, "Load trace CSV")->required();
    cmd->add_option("--config", config, "File with a [ups] table and optional [[stages]]")->required();
    cmd->add_option("--out", out, "UPS block JSON path ('-' for stdout)")->default_val("-");
    cmd->add_option("--grid-out", grid_out, "Write the grid-side trace CSV here");
    cmd->callback([this] { run(); });
  }

  void run() {
    const json tree = aigrid::config::read_config_file(config);
    json table = tree.contains("ups") ? tree.at("ups") : tree;
    if (!tree.contains("ups")) table.erase("stages");
    const auto cfg = scenario::ups_from_json(table);
    auto load = aigrid::read_csv_file(trace_path);
    json block = json::object();
    if (tree.contains("stages")) {
      load = aigrid::ups::apply_stage_caps(load, scenario::stages_from_json(tree.at("stages")));
      block["stage_caps_applied"] = true;
    }
    const auto result = aigrid::ups::smooth(load, cfg);
    block.update(report::ups_block(load, cfg, result));
    block["schema_version"] = report::kSchemaVersion;
    if (!result.violations.empty()) spdlog::warn("{} UPS violations", result.violations.size());
    if (!grid_out.empty()) write_text(grid_out, aigrid::emit_csv_text(result.grid_trace));
    write_text(out, report::dump(block));
  }
};

struct PresetsCmd {
  std::string name;
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("presets", "List or show built-in scenarios");
    cmd->require_subcommand(1);
    auto* list = cmd->add_subcommand("list", "Preset names with a one-line summary");
    list->callback([] {
      for (const auto& p : aigrid::presets::all()) std::cout << p.name << "  " << p.summary << "\n";
    });
    auto* show = cmd->add_subcommand("show", "Print a preset's scenario text");
    show->add_option("name", name, "Preset name")->required();
    show->add_flag("--json", as_json, "Print the parsed scenario as JSON");
    show->callback([this] {
      const auto& p = aigrid::presets::find(name);
      if (as_json) {
        std::cout << aigrid::config::parse_toml(std::string(p.text)).dump(2) << "\n";
      } else {
        std::cout << p.text;
      }
    });
  }
};

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Discrete-time simulator and analyzer for AI workload power and its grid impact", "aigrid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aigrid 0.1.0");

  SimulateCmd simulate;
  AnalyzeCmd analyze;
  GridCmd grid;
  UpsCmd ups;
  PresetsCmd presets;
  simulate.attach(app);
  analyze.attach(app);
  grid.attach(app);
  ups.attach(app);
  presets.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const aigrid::Error& e) {
    spdlog::error("{}", e.what());
    return aigrid::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
