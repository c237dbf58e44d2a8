#include "aigrid/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "aigrid/error.hpp"

namespace aigrid::metrics {

IdleDefinition IdleDefinition::explicit_watts(Watts idle) {
  if (!(idle >= 0.0) || !std::isfinite(idle)) throw ValidationError("explicit idle power must be >= 0");
  return IdleDefinition(true, idle);
}

IdleDefinition IdleDefinition::percentile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("idle percentile must lie strictly inside (0, 1)");
  return IdleDefinition(false, p);
}

Watts IdleDefinition::resolve(const PowerTrace& trace) const {
  return explicit_ ? value_ : quantile(trace, value_);
}

double quantile(const PowerTrace& trace, double p) {
  if (trace.empty()) throw ValidationError("quantile of an empty trace");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::vector<double> sorted(trace.values());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double peak_average_ratio(const PowerTrace& trace) {
  const SummaryStats s = summary_stats(trace);
  if (!(s.mean > 0.0)) throw ValidationError("peak/average ratio undefined for non-positive mean power");
  return s.max / s.mean;
}

double peak_idle_ratio(const PowerTrace& trace, const IdleDefinition& idle) {
  const Watts level = idle.resolve(trace);
  if (!(level > 0.0)) throw ValidationError("undefined ratio: idle power level is zero");
  return summary_stats(trace).max / level;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  Histogram h;
  if (values.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) {
    h.edges = {lo, hi};
    h.counts = {values.size()};
    return h;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(idx, bins - 1)]++;
  }
  return h;
}

RampStats ramp_decline_stats(const PowerTrace& trace, std::size_t bins) {
  if (trace.size() < 2) throw ValidationError("ramp statistics need at least 2 samples");
  std::vector<double> rates(trace.size() - 1);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) rates[i] = (trace[i + 1] - trace[i]) / trace.dt();
  RampStats out;
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  out.max_ramp = std::max(0.0, *hi);
  out.max_decline = std::max(0.0, -*lo);
  out.ramp_histogram = histogram(rates, bins);
  return out;
}

std::vector<CdfPoint> empirical_cdf(const PowerTrace& trace, std::size_t n_bins) {
  if (trace.empty()) throw ValidationError("CDF of an empty trace");
  const Histogram h = histogram(trace.values(), n_bins);
  std::vector<CdfPoint> out;
  out.reserve(h.counts.size());
  std::size_t running = 0;
  const double total = static_cast<double>(trace.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    running += h.counts[i];
    out.push_back({h.edges[i + 1], static_cast<double>(running) / total});
  }
  out.back().cumulative_fraction = 1.0;
  return out;
}

double exceedance_fraction(const PowerTrace& trace, Watts threshold) {
  if (trace.empty()) return 0.0;
  const auto above = std::count_if(trace.samples().begin(), trace.samples().end(),
                                   [threshold](double v) { return v > threshold; });
  return static_cast<double>(above) / static_cast<double>(trace.size());
}

}  // namespace aigrid::metrics
