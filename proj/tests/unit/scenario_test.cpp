#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "aigrid/config_text.hpp"
#include "aigrid/error.hpp"
#include "aigrid/presets.hpp"
#include "aigrid/report.hpp"
#include "aigrid/scenario.hpp"

namespace aigrid {
namespace {

using nlohmann::json;

std::size_t parse_error_line(const std::string& text) {
  try {
    config::parse_toml(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Toml, Basics) {
  const auto j = config::parse_toml(R"(# header
name = "x"  # trailing
n = 1_000
f = -2.5e3
flag = true
arr = [1, 2.5,
  3]
inline = { a = 1, b.c = "d" }

[t.sub]
k = 'lit'

[[rows]]
v = 1
[[rows]]
v = 2
)");
  EXPECT_EQ(j["name"], "x");
  EXPECT_EQ(j["n"], 1000);
  EXPECT_EQ(j["f"], -2500.0);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["arr"].size(), 3u);
  EXPECT_EQ(j["inline"]["b"]["c"], "d");
  EXPECT_EQ(j["t"]["sub"]["k"], "lit");
  EXPECT_EQ(j["rows"][1]["v"], 2);
}

TEST(Toml, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("a = 1\nb = \n"), 2u);
  EXPECT_EQ(parse_error_line("a = 1\n\n\na = 2\n"), 4u);
  EXPECT_EQ(parse_error_line("[t]\nx=1\n[t]\n"), 3u);
  EXPECT_EQ(parse_error_line("s = \"open\n"), 1u);
  EXPECT_EQ(parse_error_line("x = 1 2\n"), 1u);
  EXPECT_EQ(parse_error_line("x = 1__0\n"), 1u);
}

TEST(ConfigText, JsonAlternative) {
  EXPECT_EQ(config::parse_config_text(R"({"a": {"b": 2}})")["a"]["b"], 2);
  EXPECT_THROW(config::parse_config_text("{ broken"), ParseError);
  EXPECT_THROW(config::read_config_file("/nonexistent/cfg.toml"), IoError);
}

json minimal() {
  return json::parse(R"({"duration_s": 10, "dt_s": 1, "mix": {"train": 1},
    "accelerators": {"count": 2, "peak_power_w": 100, "idle_power_w": 10},
    "training": {"base_power_w": 50, "t_start_s": 2, "t_end_s": 5}})");
}

TEST(Scenario, MinimalTraining) {
  const auto s = scenario::scenario_from_json(minimal());
  EXPECT_EQ(s.sample_count(), 11u);
  const auto trace = scenario::synthesize(s);
  ASSERT_EQ(trace.size(), 11u);
  EXPECT_DOUBLE_EQ(trace[0], 70.0);
  EXPECT_DOUBLE_EQ(trace[3], 50.0 + 2 * 100 * 0.98);
  EXPECT_DOUBLE_EQ(trace[10], 70.0);
}

TEST(Scenario, RejectsUnknownKeysAndBadValues) {
  auto j = minimal();
  j["training"]["bogus"] = 1;
  try {
    scenario::scenario_from_json(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("training.bogus"), std::string::npos);
  }
  j = minimal();
  j["warp"] = json::object();
  EXPECT_THROW(scenario::scenario_from_json(j), ValidationError);
  j = minimal();
  j["duration_s"] = -1;
  EXPECT_THROW(scenario::scenario_from_json(j).validate(), ValidationError);
  j = minimal();
  j["dt_s"] = "fast";
  EXPECT_THROW(scenario::scenario_from_json(j), ValidationError);
}

TEST(Scenario, MissingExternalTraceIsIoError) {
  auto j = minimal();
  j["dynamics"] = {{"c_s", 0.0}, {"e_s", 1.0}, {"external_trace", "no_such.csv"}};
  const auto s = scenario::scenario_from_json(j, "/nonexistent");
  EXPECT_THROW(scenario::synthesize(s), IoError);
}

TEST(Scenario, NetworkDecodeAndExport) {
  const auto net = scenario::network_from_json(json::parse(R"({
    "buses": [{"name": "g", "type": "slack"}, {"name": "l", "type": "pq", "p": -0.5, "q": -0.1}],
    "lines": [{"from": "g", "to": "l", "r": 0.01, "x": 0.1}]})"));
  EXPECT_EQ(net.size(), 2u);
  const auto explicit_y = scenario::network_from_json(json::parse(R"({
    "buses": [{"name": "g", "type": "slack"}, {"name": "l", "type": "pq", "p": -0.5, "q": -0.1}],
    "ybus": {"magnitude": [[1, 2], [2, 1]], "angle": [[0, 0.5], [0.5, 0]]}})"));
  EXPECT_EQ(explicit_y.y_mag(0, 1), 2.0);
  EXPECT_EQ(explicit_y.y_angle(1, 0), 0.5);
  const auto solved = grid::solve_power_flow(net).network;
  const auto out = scenario::network_to_json(solved);
  EXPECT_EQ(out["buses"][1]["name"], "l");
  EXPECT_NEAR(out["buses"][1]["p_injection"].get<double>(), -0.5, 1e-8);
  EXPECT_THROW(scenario::load_network_file("/nonexistent/net.json"), IoError);
}

TEST(Presets, AtLeastSixAndAllSynthesizeDeterministically) {
  ASSERT_GE(presets::all().size(), 6u);
  for (const auto& p : presets::all()) {
    SCOPED_TRACE(std::string(p.name));
    const auto s = presets::load(std::string(p.name));
    s.validate();
    const auto a = scenario::synthesize(s);
    EXPECT_EQ(a.size(), s.sample_count());
    EXPECT_FALSE(a.has_negative());
    EXPECT_EQ(a, scenario::synthesize(s));
    const auto rep = report::scenario_report(s, a);
    EXPECT_NO_THROW(report::validate_report(rep));
  }
  EXPECT_THROW(presets::find("nope"), ValidationError);
}

TEST(Presets, SeedChangesStochasticTraces) {
  const auto s = presets::load("gpt2_inference");
  EXPECT_NE(scenario::synthesize(s, 1), scenario::synthesize(s, 2));
}

TEST(Batch, OomRowsRefuseInsteadOfPulsing) {
  const auto j = json::parse(R"({"duration_s": 1, "dt_s": 1,
    "batch_sweep": {"idle_power_w": 20, "peak_power_w": 120, "device_memory_gb": 10, "gap_s": 2,
      "runs": [{"model": "m", "batch_size": 1, "time_s": 3, "memory_gb": 5},
               {"model": "m", "batch_size": 64, "status": "oom"},
               {"model": "m", "batch_size": 2, "time_s": 2, "power_w": 100}]}})");
  const auto s = scenario::scenario_from_json(j);
  ASSERT_TRUE(s.batch_sweep.has_value());
  EXPECT_TRUE(s.batch_sweep->runs[1].out_of_memory());
  const auto trace = scenario::synthesize(s);
  // gap 2, pulse 3 at 70 W, gap 2, pulse 2 at 100 W, gap 2
  EXPECT_DOUBLE_EQ(trace[0], 20.0);
  EXPECT_DOUBLE_EQ(trace[2], 70.0);
  EXPECT_DOUBLE_EQ(trace[7], 100.0);
  double peak = 0.0;
  for (double v : trace.values()) peak = std::max(peak, v);
  EXPECT_EQ(peak, 100.0);
  const auto block = report::batch_block(*s.batch_sweep);
  EXPECT_EQ(block["runs"][1]["status"], "oom");
  EXPECT_EQ(block["runs"][1]["refused"], true);
}

TEST(Report, AnalyzeKeysAndUndefinedRatios) {
  const auto rep = report::analyze("t", PowerTrace(0.0, 1.0, {0, 0, 0}));
  EXPECT_EQ(rep["schema_version"], report::kSchemaVersion);
  EXPECT_FALSE(rep["ratios"].contains("peak_average"));
  EXPECT_FALSE(rep["notes"].empty());
  EXPECT_NO_THROW(report::validate_report(rep));
  auto broken = rep;
  broken.erase("summary");
  EXPECT_THROW(report::validate_report(broken), ValidationError);
  broken = rep;
  broken["schema_version"] = 99;
  EXPECT_THROW(report::validate_report(broken), ValidationError);
}

TEST(Report, NegativeSamplesFlagged) {
  const auto rep = report::analyze("t", PowerTrace(0.0, 1.0, {5, -1, 3, -2}));
  EXPECT_EQ(rep["trace"]["negative_samples"], 2);
  EXPECT_NE(rep["notes"].dump().find("negative"), std::string::npos);
  EXPECT_EQ(report::analyze("t", PowerTrace(0.0, 1.0, {5, 1}))["trace"]["negative_samples"], 0);
}

TEST(Report, Bursts) {
  const auto bursts = report::find_bursts(PowerTrace(0.0, 0.5, {0, 5, 6, 0, 7, 0}), 1.0);
  ASSERT_EQ(bursts.size(), 2u);
  EXPECT_DOUBLE_EQ(bursts[0].start_s, 0.5);
  EXPECT_DOUBLE_EQ(bursts[0].duration_s, 1.0);
  EXPECT_DOUBLE_EQ(bursts[0].energy_j, 5.5);
  EXPECT_DOUBLE_EQ(bursts[1].peak_w, 7.0);
}

TEST(Report, AnalyzeAfterCsvRoundTripIsIdentical) {
  const auto s = presets::load("gpt2_4090_training");
  const auto trace = scenario::synthesize(s);
  const auto back = ingest_csv_text(emit_csv_text(trace));
  EXPECT_EQ(report::dump(report::analyze(s.name, trace)), report::dump(report::analyze(s.name, back)));
}

}  // namespace
}  // namespace aigrid
