#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "aigrid/error.hpp"
#include "aigrid/grid.hpp"
#include "generators.hpp"

namespace aigrid::grid {
namespace {

using testing::Gen;
using testing::kPropertyCases;

constexpr double kPi = std::numbers::pi;

void expect_rel(double got, double want, double rel = 1e-12) {
  EXPECT_LE(std::abs(got - want), rel * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

GridFrequencyParams freq(double h, double p_nom = 1.0, double threshold = 1.0, std::optional<double> f = {}) {
  return {h, p_nom, threshold, f};
}

TEST(Rocof, Values) {
  EXPECT_EQ(rocof(freq(5), 0.0).per_unit_per_s, 0.0);
  expect_rel(rocof(freq(2), 0.4).per_unit_per_s, 0.1);
  const auto r = rocof(freq(5, 1.0, 1.0, 50.0), 0.1);
  expect_rel(r.per_unit_per_s, 0.01);
  ASSERT_TRUE(r.hz_per_s.has_value());
  expect_rel(*r.hz_per_s, 0.5);
  EXPECT_FALSE(rocof(freq(5), 0.1).hz_per_s.has_value());
  EXPECT_LT(rocof(freq(5), -0.1).per_unit_per_s, 0.0);
}

TEST(Rocof, WattsAgainstNominal) { expect_rel(rocof(freq(5, 1e9), 1e8).per_unit_per_s, 0.01); }

TEST(Rocof, ParamChecks) {
  EXPECT_THROW(rocof(freq(0), 1), ValidationError);
  EXPECT_THROW(rocof(freq(1, 0), 1), ValidationError);
  EXPECT_THROW(rocof(freq(1, 1, 0), 1), ValidationError);
  EXPECT_THROW(rocof(freq(1, 1, 1, 0.0), 1), ValidationError);
}

TEST(StabilityIndex, Values) {
  EXPECT_EQ(stability_index(0.3, freq(5, 1, 0.3)), 1.0);
  EXPECT_EQ(stability_index(0.0, freq(5, 1, 0.3)), 0.0);
  expect_rel(stability_index(0.25, freq(5, 1, 0.1)), 2.5);
  expect_rel(stability_index(-0.25, freq(5, 1, 0.1)), 2.5);
}

TEST(WorstStep, MaxAbsoluteChange) { EXPECT_EQ(worst_step_change(PowerTrace(0.0, 1.0, {0, 5, -10, -8})), 15.0); }

GridNetwork two_bus(double p2, BusType type2 = BusType::PV, double q2 = 0.0) {
  // Series reactance 0.1 pu: y = 1 / (j 0.1) = 10 at -90 degrees.
  std::vector<Bus> buses{{"slack", BusType::Slack, 1.0, 0.0, 0.0, 0.0}, {"load", type2, 1.0, 0.0, p2, q2}};
  return GridNetwork::from_lines(std::move(buses), {{0, 1, 10.0, -kPi / 2}});
}

TEST(PowerInjection, Disconnected) {
  std::vector<Bus> buses{{"a", BusType::Slack, 1.0, 0.0, 0, 0}, {"b", BusType::PQ, 1.0, 0.3, 0, 0}};
  const GridNetwork net(buses, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0));
  EXPECT_EQ(power_injection(net, 0), 0.0);
  EXPECT_EQ(power_injection(net, 1), 0.0);
}

TEST(PowerInjection, SingleBusSelfAdmittance) {
  std::vector<Bus> buses{{"a", BusType::Slack, 1.0, 0.0, 0, 0}};
  const GridNetwork net(buses, {4.0}, {0.3});
  expect_rel(power_injection(net, 0), 4.0 * std::cos(0.3));
  EXPECT_THROW(power_injection(net, 1), ValidationError);
}

TEST(PowerInjection, TwoBusMatchesBruteForceSum) {
  auto net = two_bus(-0.5);
  net.buses()[1].v_angle = -0.05;
  net.buses()[1].v_mag = 0.97;
  // Direct evaluation of the injection sum written out term by term.
  const double v1 = 1.0, v2 = 0.97, d1 = 0.0, d2 = -0.05;
  const double p2 = v2 * v1 * 10.0 * std::cos(kPi / 2 - d2 + d1) + v2 * v2 * 10.0 * std::cos(-kPi / 2);
  const double p1 = v1 * v1 * 10.0 * std::cos(-kPi / 2) + v1 * v2 * 10.0 * std::cos(kPi / 2 - d1 + d2);
  expect_rel(power_injection(net, 1), p2);
  expect_rel(power_injection(net, 0), p1);
}

TEST(PowerFlow, ZeroLoadFlatStartIsSolution) {
  const auto result = solve_power_flow(two_bus(0.0, BusType::PQ));
  EXPECT_EQ(result.iterations, 0);
  EXPECT_EQ(result.network.buses()[1].v_angle, 0.0);
  EXPECT_EQ(result.network.buses()[1].v_mag, 1.0);
}

TEST(PowerFlow, TwoBusAngleMatchesBisection) {
  const auto result = solve_power_flow(two_bus(-0.5));
  EXPECT_LT(result.max_mismatch, 1e-8);
  // Root of the bus-2 injection residual found by bisection (tests/oracles).
  EXPECT_NEAR(result.network.buses()[1].v_angle, -0.050020856805770175, 1e-10);
  EXPECT_NEAR(result.network.buses()[0].p_spec, 0.5, 1e-8);
}

TEST(PowerFlow, TwoBusPqLoad) {
  const auto result = solve_power_flow(two_bus(-0.5, BusType::PQ, -0.2));
  const auto& net = result.network;
  EXPECT_LT(result.max_mismatch, 1e-8);
  EXPECT_NEAR(power_injection(net, 1), -0.5, 1e-8);
  EXPECT_NEAR(reactive_injection(net, 1), -0.2, 1e-8);
  EXPECT_LT(net.buses()[1].v_mag, 1.0);
}

TEST(PowerFlow, OverloadDoesNotConverge) {
  // Maximum transfer across the line is |V1||V2||y| = 10 pu.
  try {
    solve_power_flow(two_bus(-11.0));
    FAIL() << "expected non-convergence";
  } catch (const PowerFlowError& e) {
    EXPECT_EQ(e.reason(), PowerFlowError::Reason::NonConvergence);
    EXPECT_GT(e.max_mismatch(), 1e-8);
    EXPECT_NE(std::string(e.what()).find("converge"), std::string::npos);
  }
}

TEST(PowerFlow, ThreeBusLossyMeshBalances) {
  std::vector<Bus> buses{{"g", BusType::Slack, 1.02, 0.0, 0, 0},
                         {"pv", BusType::PV, 1.01, 0.0, 0.4, 0},
                         {"dc", BusType::PQ, 1.0, 0.0, -0.9, -0.3}};
  auto line = [](std::size_t a, std::size_t b, double r, double x) {
    const std::complex<double> y = 1.0 / std::complex<double>(r, x);
    return Line{a, b, std::abs(y), std::arg(y)};
  };
  const auto net = GridNetwork::from_lines(buses, {line(0, 1, 0.01, 0.1), line(1, 2, 0.02, 0.12), line(0, 2, 0.015, 0.08)});
  const auto result = solve_power_flow(net);
  EXPECT_LT(result.max_mismatch, 1e-8);
  EXPECT_NEAR(power_injection(result.network, 1), 0.4, 1e-8);
  EXPECT_NEAR(power_injection(result.network, 2), -0.9, 1e-8);
  EXPECT_NEAR(reactive_injection(result.network, 2), -0.3, 1e-8);
  double p_sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    p_sum += result.network.buses()[i].p_spec;
    EXPECT_NEAR(result.network.buses()[i].p_spec, power_injection(result.network, i), 1e-6);
  }
  EXPECT_GT(p_sum, 0.0);  // resistive lines lose power
}

TEST(GridNetwork, NeedsExactlyOneSlack) {
  std::vector<Bus> none{{"a", BusType::PQ, 1.0, 0.0, 0, 0}};
  EXPECT_THROW(GridNetwork(none, {1.0}, {0.0}), ValidationError);
  std::vector<Bus> two{{"a", BusType::Slack, 1.0, 0.0, 0, 0}, {"b", BusType::Slack, 1.0, 0.0, 0, 0}};
  EXPECT_THROW(GridNetwork(two, std::vector<double>(4, 1.0), std::vector<double>(4, 0.0)), ValidationError);
  std::vector<Bus> neg{{"a", BusType::Slack, -1.0, 0.0, 0, 0}};
  EXPECT_THROW(GridNetwork(neg, {1.0}, {0.0}), ValidationError);
}

TEST(Sdf, Values) {
  EXPECT_EQ(spatial_distribution_factor({{50, 7.5}}), 7.5);
  expect_rel(spatial_distribution_factor({{100, 2}, {300, 4}}), 3.5);
  EXPECT_EQ(spatial_distribution_factor({{1, 6}, {40, 6}, {3, 6}}), 6.0);
  EXPECT_THROW(spatial_distribution_factor({{0, 1}, {0, 2}}), ValidationError);
  EXPECT_THROW(spatial_distribution_factor({{1, 0}}), ValidationError);
}

TEST(Ldc, Values) {
  EXPECT_EQ(load_duration_curve(PowerTrace(0.0, 1.0, {9, 5, 1})).values(), (std::vector<double>{9, 5, 1}));
  EXPECT_EQ(load_duration_curve(PowerTrace(0.0, 1.0, {10, 30, 20})).values(), (std::vector<double>{30, 20, 10}));
  EXPECT_EQ(load_duration_curve(PowerTrace(0.0, 1.0, {4, 4})).values(), (std::vector<double>{4, 4}));
  EXPECT_THROW(load_duration_curve(PowerTrace()), ValidationError);
}

TEST(LdcDeltaEnergy, Values) {
  const PowerTrace base(0.0, 1.0, {5, 1, 9, 3, 7, 2, 8, 4, 6, 0, 3});
  EXPECT_EQ(ldc_delta_energy(base, base), 0.0);
  std::vector<double> shifted(base.values());
  for (double& v : shifted) v += 100.0;
  EXPECT_DOUBLE_EQ(ldc_delta_energy(PowerTrace(0.0, 1.0, shifted), base), 1000.0);
  std::vector<double> perm(base.values());
  std::reverse(perm.begin(), perm.end());
  EXPECT_EQ(ldc_delta_energy(PowerTrace(0.0, 1.0, perm), base), 0.0);
  EXPECT_THROW(ldc_delta_energy(base, PowerTrace(0.0, 2.0, base.values())), GridMismatchError);
}

TEST(Thd, Values) {
  EXPECT_EQ(thd(HarmonicSpectrum(10, {})), 0.0);
  expect_rel(thd(HarmonicSpectrum(10, {{3, 1}})), 0.1);
  expect_rel(thd(HarmonicSpectrum(10, {{3, 3}, {5, 4}})), 0.5);
  EXPECT_THROW(HarmonicSpectrum(0, {}), ValidationError);
  EXPECT_THROW(HarmonicSpectrum(1, {{1, 0.5}}), ValidationError);
  EXPECT_THROW(HarmonicSpectrum(1, {{3, -0.5}}), ValidationError);
}

TEST(NetVariability, Values) {
  EXPECT_EQ(net_load_variability({4, 4, 1}), 0.0);
  expect_rel(net_load_variability({3, 4, 0}), 5.0);
  expect_rel(net_load_variability({3, 4, -1}), 7.0);
  EXPECT_THROW(net_load_variability({3, 4, 1.5}), ValidationError);
  EXPECT_THROW(net_load_variability({-3, 4, 0}), ValidationError);
}

TEST(Estimators, Values) {
  EXPECT_EQ(estimate_variability(PowerTrace(0.0, 1.0, {3, 3, 3})), 0.0);
  const PowerTrace a(0.0, 1.0, {1, 4, 2, 8});
  EXPECT_DOUBLE_EQ(estimate_correlation(a, a), 1.0);
  expect_rel(estimate_correlation(PowerTrace(0.0, 1.0, {0, 1, 2}), PowerTrace(0.0, 1.0, {2, 1, 0})), -1.0);
  EXPECT_THROW(estimate_correlation(PowerTrace(0.0, 1.0, {1, 1}), PowerTrace(0.0, 1.0, {1, 2})), ValidationError);
  EXPECT_THROW(estimate_correlation(a, PowerTrace(0.0, 1.0, {1, 2})), GridMismatchError);
}

TEST(Estimators, Windowed) {
  // Windows [0,2] and [10,12]: population std of each is 1, mean 1.
  const PowerTrace t(0.0, 1.0, {0, 2, 10, 12, 99});
  EXPECT_DOUBLE_EQ(estimate_windowed_variability(t, 2), 1.0);
  EXPECT_THROW(estimate_windowed_variability(t, 0), ValidationError);
  EXPECT_THROW(estimate_windowed_variability(t, 6), ValidationError);
}

TEST(Property, RocofLinearAndIndexScaleInvariant) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11000 + c);
    const auto p = freq(g.uniform(0.5, 10), g.uniform(1, 1e9), g.uniform(0.01, 2));
    const double dp = g.uniform(-1e8, 1e8);
    const double k = g.uniform(0.1, 10);
    expect_rel(rocof(p, k * dp).per_unit_per_s, k * rocof(p, dp).per_unit_per_s, 1e-12);
    auto scaled = p;
    scaled.p_nominal *= k;
    expect_rel(stability_index(rocof(scaled, k * dp).per_unit_per_s, scaled),
               stability_index(rocof(p, dp).per_unit_per_s, p), 1e-12);
  }
}

TEST(Property, SdfBetweenMinAndMaxArea) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11100 + c);
    std::vector<LoadSite> sites(static_cast<std::size_t>(g.integer(1, 20)));
    for (auto& s : sites) s = {g.uniform(0.1, 1e6), g.uniform(0.01, 100)};
    const auto [lo, hi] = std::minmax_element(sites.begin(), sites.end(),
                                              [](const LoadSite& a, const LoadSite& b) { return a.area_km2 < b.area_km2; });
    const double sdf = spatial_distribution_factor(sites);
    EXPECT_GE(sdf, lo->area_km2 * (1 - 1e-12));
    EXPECT_LE(sdf, hi->area_km2 * (1 + 1e-12));
  }
}

TEST(Property, LdcDescendingPermutationInvariant) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11200 + c);
    const auto t = g.trace(1, 200);
    const auto ldc = load_duration_curve(t);
    EXPECT_TRUE(std::is_sorted(ldc.values().rbegin(), ldc.values().rend()));
    auto sorted_in = t.values();
    auto sorted_out = ldc.values();
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    EXPECT_EQ(sorted_in, sorted_out);
    auto shuffled = t.values();
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    EXPECT_EQ(load_duration_curve(PowerTrace(0.0, t.dt(), shuffled)).values(), ldc.values());
    EXPECT_EQ(ldc_delta_energy(PowerTrace(0.0, t.dt(), shuffled), t), 0.0);
  }
}

TEST(Property, LdcConstantOffset) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11300 + c);
    const auto t = g.trace(2, 200);
    const double offset = g.uniform(-500, 500);
    std::vector<double> shifted(t.values());
    for (double& v : shifted) v += offset;
    const double want = offset * t.duration();
    EXPECT_LE(std::abs(ldc_delta_energy(PowerTrace(0.0, t.dt(), shifted), t) - want),
              1e-12 * std::max(1.0, std::abs(want)) * static_cast<double>(t.size()));
  }
}

TEST(Property, ThdScaleInvariant) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11400 + c);
    std::map<int, double> h;
    for (int n = 2; n <= 15; ++n) {
      if (g.coin()) h[n] = g.uniform(0, 5);
    }
    const double i1 = g.uniform(0.1, 100);
    const double k = g.uniform(0.01, 100);
    std::map<int, double> hk;
    for (auto [n, v] : h) hk[n] = k * v;
    expect_rel(thd(HarmonicSpectrum(k * i1, hk)), thd(HarmonicSpectrum(i1, h)), 1e-12);
  }
}

TEST(Property, NetVariabilityTriangleBounds) {
  for (int c = 0; c < kPropertyCases; ++c) {
    Gen g(11500 + c);
    const VariabilityInputs v{g.uniform(0, 1e4), g.uniform(0, 1e4), g.uniform(-1, 1)};
    const double net = net_load_variability(v);
    EXPECT_GE(net, std::abs(v.v_ai - v.v_re) - 1e-9);
    EXPECT_LE(net, v.v_ai + v.v_re + 1e-9);
  }
}

TEST(Property, PowerFlowMismatchOnRandomRadialFeeders) {
  for (int c = 0; c < 50; ++c) {
    Gen g(11600 + c);
    const int n = g.integer(2, 8);
    std::vector<Bus> buses{{"b0", BusType::Slack, 1.0, 0.0, 0, 0}};
    std::vector<Line> lines;
    for (int i = 1; i < n; ++i) {
      buses.push_back({"b" + std::to_string(i), BusType::PQ, 1.0, 0.0, -g.uniform(0.0, 0.1), -g.uniform(0.0, 0.03)});
      const std::complex<double> y = 1.0 / std::complex<double>(g.uniform(0.005, 0.02), g.uniform(0.03, 0.1));
      lines.push_back({static_cast<std::size_t>(g.integer(0, i - 1)), static_cast<std::size_t>(i), std::abs(y), std::arg(y)});
    }
    const auto result = solve_power_flow(GridNetwork::from_lines(buses, lines));
    EXPECT_LT(result.max_mismatch, 1e-8);
    for (int i = 1; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      EXPECT_NEAR(power_injection(result.network, k), buses[k].p_spec, 1e-8);
      EXPECT_NEAR(reactive_injection(result.network, k), buses[k].q_spec, 1e-8);
    }
  }
}

}  // namespace
}  // namespace aigrid::grid
