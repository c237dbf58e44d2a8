#pragma once

#include <cstddef>
#include <vector>

#include "aigrid/trace.hpp"

namespace aigrid::metrics {

/// How the idle level of a trace is obtained: an explicit wattage, or the
/// p-quantile of the samples (linear interpolation between order statistics).
class IdleDefinition {
 public:
  static IdleDefinition explicit_watts(Watts idle);
  static IdleDefinition percentile(double p);
  /// 5th percentile.
  static IdleDefinition default_definition() { return percentile(0.05); }

  bool is_explicit() const noexcept { return explicit_; }
  double parameter() const noexcept { return value_; }
  Watts resolve(const PowerTrace& trace) const;

 private:
  IdleDefinition(bool is_explicit, double value) : explicit_(is_explicit), value_(value) {}
  bool explicit_;
  double value_;
};

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1 entries
  std::vector<std::size_t> counts;
};

struct RampStats {
  double max_ramp = 0.0;     // W/s, >= 0
  double max_decline = 0.0;  // W/s magnitude, >= 0
  Histogram ramp_histogram;  // per-step rates
};

struct CdfPoint {
  Watts power_w = 0.0;
  double cumulative_fraction = 0.0;
};

inline constexpr std::size_t kDefaultRampBins = 64;
inline constexpr std::size_t kDefaultCdfBins = 100;

double quantile(const PowerTrace& trace, double p);

double peak_average_ratio(const PowerTrace& trace);
double peak_idle_ratio(const PowerTrace& trace, const IdleDefinition& idle);

/// Extremes of the consecutive differences (P[i+1] - P[i]) / dt.
RampStats ramp_decline_stats(const PowerTrace& trace, std::size_t bins = kDefaultRampBins);

/// Equal-width bins over [min, max]; each point is the upper bin edge and the
/// fraction of samples at or below it. A constant trace yields one point.
std::vector<CdfPoint> empirical_cdf(const PowerTrace& trace, std::size_t n_bins = kDefaultCdfBins);

/// Fraction of samples strictly above the threshold.
double exceedance_fraction(const PowerTrace& trace, Watts threshold);

/// Equal-width histogram helper shared by ramp statistics and reports.
Histogram histogram(const std::vector<double>& values, std::size_t bins);

}  // namespace aigrid::metrics
