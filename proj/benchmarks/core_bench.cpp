#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "aigrid/grid.hpp"
#include "aigrid/presets.hpp"
#include "aigrid/report.hpp"
#include "aigrid/scenario.hpp"
#include "aigrid/trace.hpp"
#include "aigrid/ups.hpp"

namespace {

using namespace aigrid;

PowerTrace noisy_trace(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 20.0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 400.0 + 100.0 * std::sin(static_cast<double>(i) * 1e-2) + noise(rng);
  return PowerTrace(0.0, 1.0, std::move(v));
}

void BM_SynthesizePreset(benchmark::State& state, const char* name) {
  const auto s = presets::load(name);
  for (auto _ : state) benchmark::DoNotOptimize(scenario::synthesize(s));
}
BENCHMARK_CAPTURE(BM_SynthesizePreset, gpt2_4090, "gpt2_4090_training")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SynthesizePreset, gpt2_inference, "gpt2_inference")->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const auto t = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(report::analyze("bench", t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Analyze)->Range(1 << 10, 1 << 18)->Unit(benchmark::kMicrosecond);

void BM_CsvRoundTrip(benchmark::State& state) {
  const auto t = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ingest_csv_text(emit_csv_text(t)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CsvRoundTrip)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond);

void BM_UpsSmooth(benchmark::State& state) {
  const auto t = noisy_trace(static_cast<std::size_t>(state.range(0)));
  ups::UpsConfig cfg;
  cfg.capacity_j = 1e7;
  cfg.max_charge_power = 1e4;
  cfg.max_discharge_power = 1e4;
  cfg.round_trip_efficiency = 0.9;
  cfg.grid_ramp_limit = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(ups::smooth(t, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UpsSmooth)->Range(1 << 10, 1 << 18)->Unit(benchmark::kMicrosecond);

// Radial feeder of n buses with a load at every PQ bus.
void BM_PowerFlowFeeder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<grid::Bus> buses{{"b0", grid::BusType::Slack, 1.0, 0.0, 0, 0}};
  std::vector<grid::Line> lines;
  const std::complex<double> y = 1.0 / std::complex<double>(0.002, 0.01);
  for (std::size_t i = 1; i < n; ++i) {
    buses.push_back({"b" + std::to_string(i), grid::BusType::PQ, 1.0, 0.0, -0.5 / static_cast<double>(n), -0.1 / static_cast<double>(n)});
    lines.push_back({(i - 1) / 2, i, std::abs(y), std::arg(y)});
  }
  const auto net = grid::GridNetwork::from_lines(buses, lines);
  for (auto _ : state) benchmark::DoNotOptimize(grid::solve_power_flow(net));
}
BENCHMARK(BM_PowerFlowFeeder)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond);

void BM_LoadDurationCurve(benchmark::State& state) {
  const auto t = noisy_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grid::load_duration_curve(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoadDurationCurve)->Range(1 << 10, 1 << 18)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
