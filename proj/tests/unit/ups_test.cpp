#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "aigrid/error.hpp"
#include "aigrid/ups.hpp"
#include "generators.hpp"

namespace aigrid::ups {
namespace {

using testing::Gen;
using testing::kPropertyCases;

UpsConfig config(double capacity, double limit, double eff = 1.0, double max_power = 1e9) {
  UpsConfig c;
  c.capacity_j = capacity;
  c.max_charge_power = max_power;
  c.max_discharge_power = max_power;
  c.round_trip_efficiency = eff;
  c.grid_ramp_limit = limit;
  return c;
}

PowerTrace step_load() {
  std::vector<double> v(15, 1000.0);
  v[0] = 0.0;
  return PowerTrace(0.0, 1.0, v);
}

TEST(Smooth, AmpleLimitLeavesLoadUntouched) {
  const PowerTrace load(0.0, 1.0, {100, 400, 50, 900, 0});
  for (double limit : {1e6, std::numeric_limits<double>::infinity()}) {
    const auto r = smooth(load, config(1e6, limit));
    EXPECT_EQ(r.grid_trace.values(), load.values());
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(r.energy_discharged_j, 0.0);
    EXPECT_EQ(r.soc_trace.back(), 0.5e6);
  }
}

TEST(Smooth, StepIsRateLimited) {
  const auto load = step_load();
  const auto r = smooth(load, config(1e5, 100.0, 0.9));
  ASSERT_TRUE(r.violations.empty());
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(r.grid_trace[k], 100.0 * static_cast<double>(k), 1e-9);
  for (std::size_t k = 10; k < load.size(); ++k) EXPECT_EQ(r.grid_trace[k], 1000.0);
  EXPECT_NEAR(r.energy_discharged_j, 4500.0, 1e-9);
  // Deficit energy divided by the one-way efficiency sqrt(0.9) (tests/oracles).
  EXPECT_NEAR(0.5e5 - r.soc_trace.back(), 4743.416490252569, 1e-9);
}

TEST(Smooth, DeclineChargesBuffer) {
  const PowerTrace load(0.0, 1.0, {1000, 0, 0, 0, 0, 0});
  const auto r = smooth(load, config(1e5, 300.0));
  EXPECT_EQ(r.grid_trace.values(), (std::vector<double>{1000, 700, 400, 100, 0, 0}));
  EXPECT_NEAR(r.soc_trace.back() - 0.5e5, 1200.0, 1e-9);
  EXPECT_NEAR(r.energy_charged_j, 1200.0, 1e-9);
}

TEST(Smooth, TinyBufferLogsDepletion) {
  const auto r = smooth(step_load(), config(100.0, 100.0));
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().reason, ViolationReason::Depleted);
  EXPECT_EQ(to_string(r.violations.front().reason), "depleted");
  EXPECT_EQ(r.grid_trace[1], 1000.0);
}

TEST(Smooth, PowerBoundLogged) {
  const auto r = smooth(step_load(), config(1e6, 100.0, 1.0, 500.0));
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().reason, ViolationReason::PowerLimited);
}

TEST(Smooth, FullBufferSaturates) {
  auto c = config(100.0, 10.0);
  c.initial_soc_fraction = 1.0;
  const auto r = smooth(PowerTrace(0.0, 1.0, {500, 0}), c);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations.front().reason, ViolationReason::Saturated);
  EXPECT_EQ(r.grid_trace[1], 0.0);
}

TEST(Smooth, ConfigChecks) {
  EXPECT_THROW(smooth(step_load(), config(0.0, 1.0)), ValidationError);
  EXPECT_THROW(smooth(step_load(), config(1.0, 0.0)), ValidationError);
  EXPECT_THROW(smooth(step_load(), config(1.0, 1.0, 1.5)), ValidationError);
  EXPECT_THROW(smooth(PowerTrace(0.0, 1.0, {1, -1}), config(1.0, 1.0)), ValidationError);
}

TEST(StageCaps, Examples) {
  const StageSchedule s{{{0.0, 10.0, Stage::Inference, 300.0}}};
  const auto capped = apply_stage_caps(PowerTrace(0.0, 5.0, {350, 200, 350}), s);
  EXPECT_EQ(capped.values(), (std::vector<double>{300, 200, 350}));
  EXPECT_EQ(apply_stage_caps(capped, s).values(), capped.values());
  EXPECT_EQ(stage_from_string("finetune"), Stage::Finetune);
  EXPECT_THROW(stage_from_string("serve"), ValidationError);
  EXPECT_THROW(apply_stage_caps(capped, StageSchedule{{{5.0, 1.0, Stage::Pretrain, 1.0}}}), ValidationError);
}

TEST(Property, SocBoundsAndEnergyBalance) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(12000 + c);
    const auto load = g.trace(2, 300, 0.0, 1000.0);
    auto cfg = config(g.uniform(10, 1e5), g.uniform(1, 500), g.uniform(0.5, 1.0), g.uniform(50, 2000));
    cfg.initial_soc_fraction = g.uniform(0, 1);
    const auto r = smooth(load, cfg);
    double e0 = r.soc_trace.front();
    for (double soc : r.soc_trace) {
      EXPECT_GE(soc, 0.0);
      EXPECT_LE(soc, cfg.capacity_j);
    }
    const double d_soc = r.soc_trace.back() - e0;
    const double residual = grid_minus_load_energy(load, r) - (d_soc + r.conversion_losses_j);
    const double scale = std::max({1.0, r.energy_charged_j, r.energy_discharged_j});
    EXPECT_LE(std::abs(residual), 1e-9 * scale);
  }
}

TEST(Property, GridRampWithinLimitWhenNoViolations) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(12100 + c);
    const auto load = g.trace(2, 300, 0.0, 1000.0);
    const double limit = g.uniform(1, 500);
    const auto r = smooth(load, config(1e12, limit));
    if (!r.violations.empty()) continue;
    for (std::size_t k = 1; k < load.size(); ++k) {
      EXPECT_LE(std::abs(r.grid_trace[k] - r.grid_trace[k - 1]), limit * load.dt() * (1 + 1e-12));
    }
  }
}

TEST(Property, StageCapsNeverIncreaseAndIdempotent) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(12200 + c);
    const auto load = g.trace(1, 200, 0.0, 1000.0);
    StageSchedule s;
    double t = load.start_time() - 1.0;
    while (t < load.time_at(load.size() - 1)) {
      const double start = t + g.uniform(0, 20);
      const double end = start + g.uniform(0.1, 50);
      s.intervals.push_back({start, end, static_cast<Stage>(g.integer(0, 2)), g.uniform(0, 1000)});
      t = end;
    }
    const auto once = apply_stage_caps(load, s);
    for (std::size_t i = 0; i < load.size(); ++i) EXPECT_LE(once[i], load[i]);
    EXPECT_EQ(apply_stage_caps(once, s).values(), once.values());
  }
}

}  // namespace
}  // namespace aigrid::ups
