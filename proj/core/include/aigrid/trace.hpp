#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace aigrid {

using Watts = double;
using Seconds = double;

/// Uniformly sampled power time series. Sample i sits at start_time + i * dt.
///
/// Samples must be finite. Negative samples are accepted; they only arise
/// from the dynamic power model and are surfaced through has_negative().
class PowerTrace {
 public:
  PowerTrace() = default;
  PowerTrace(Seconds start_time, Seconds dt, std::vector<Watts> samples);

  Seconds start_time() const noexcept { return start_time_; }
  Seconds dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::span<const Watts> samples() const noexcept { return samples_; }
  const std::vector<Watts>& values() const noexcept { return samples_; }
  Watts operator[](std::size_t i) const { return samples_[i]; }

  Seconds time_at(std::size_t i) const noexcept { return start_time_ + static_cast<double>(i) * dt_; }
  /// Span covered by the grid, (n - 1) * dt; zero for 0 or 1 samples.
  Seconds duration() const noexcept;
  bool has_negative() const noexcept;

  friend bool operator==(const PowerTrace&, const PowerTrace&) = default;

 private:
  Seconds start_time_ = 0.0;
  Seconds dt_ = 1.0;
  std::vector<Watts> samples_;
};

/// True when both traces share start time, dt and length.
bool same_grid(const PowerTrace& a, const PowerTrace& b);
/// Throws GridMismatchError naming `context` when the grids differ.
void require_same_grid(const PowerTrace& a, const PowerTrace& b, const std::string& context);

struct SummaryStats {
  Watts mean = 0.0;
  Watts max = 0.0;
  Watts min = 0.0;
  Watts std = 0.0;  // population convention
  Seconds duration_s = 0.0;
};

SummaryStats summary_stats(const PowerTrace& trace);

/// First derivative in W/s on the same grid: central differences inside,
/// one-sided differences at both ends. Needs at least two samples.
PowerTrace derivative(const PowerTrace& trace);

/// Second derivative in W/s^2: three-point stencil inside; each end reuses
/// the stencil of its nearest interior point. Two-sample traces give zeros.
PowerTrace second_derivative(const PowerTrace& trace);

/// Linear interpolation onto a grid of spacing new_dt starting at the same
/// start time. Grid points past the last original sample are dropped, so the
/// new trace covers floor(duration / new_dt) * new_dt seconds.
PowerTrace resample(const PowerTrace& trace, Seconds new_dt);

/// Reads `timestamp_s,power_w` CSV. dt is taken from the first two rows and
/// every later row must sit on that grid within 1e-6 * dt.
PowerTrace ingest_csv(std::istream& in);
PowerTrace ingest_csv_text(const std::string& text);
PowerTrace read_csv_file(const std::string& path);

/// Writes the same schema with 17 significant digits so that samples
/// round-trip bit-exactly.
void emit_csv(std::ostream& out, const PowerTrace& trace);
std::string emit_csv_text(const PowerTrace& trace);
void write_csv_file(const std::string& path, const PowerTrace& trace);

}  // namespace aigrid
