#include "aigrid/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include "aigrid/error.hpp"

namespace aigrid {

PowerTrace::PowerTrace(Seconds start_time, Seconds dt, std::vector<Watts> samples)
    : start_time_(start_time), dt_(dt), samples_(std::move(samples)) {
  if (!std::isfinite(start_time_)) throw ValidationError("trace start time must be finite");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("trace dt must be positive and finite");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw ValidationError("trace sample " + std::to_string(i) + " is not finite");
    }
  }
}

Seconds PowerTrace::duration() const noexcept {
  return samples_.size() < 2 ? 0.0 : static_cast<double>(samples_.size() - 1) * dt_;
}

bool PowerTrace::has_negative() const noexcept {
  return std::any_of(samples_.begin(), samples_.end(), [](double v) { return v < 0.0; });
}

bool same_grid(const PowerTrace& a, const PowerTrace& b) {
  return a.size() == b.size() && a.dt() == b.dt() && a.start_time() == b.start_time();
}

void require_same_grid(const PowerTrace& a, const PowerTrace& b, const std::string& context) {
  if (!same_grid(a, b)) {
    std::ostringstream msg;
    msg << context << " (dt " << a.dt() << " vs " << b.dt() << ", length " << a.size() << " vs " << b.size()
        << ", start " << a.start_time() << " vs " << b.start_time() << ")";
    throw GridMismatchError(msg.str());
  }
}

SummaryStats summary_stats(const PowerTrace& trace) {
  if (trace.empty()) throw ValidationError("summary statistics of an empty trace");
  const auto s = trace.samples();
  SummaryStats out;
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  out.min = *lo;
  out.max = *hi;
  double sum = 0.0;
  for (double v : s) sum += v;
  const double n = static_cast<double>(s.size());
  // Rounding can push the mean of near-constant data a hair outside [min, max].
  out.mean = std::clamp(sum / n, out.min, out.max);
  double ss = 0.0;
  for (double v : s) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / n);
  out.duration_s = trace.duration();
  return out;
}

PowerTrace derivative(const PowerTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 2) throw ValidationError("derivative needs at least 2 samples");
  const double dt = trace.dt();
  std::vector<double> d(n);
  d[0] = (trace[1] - trace[0]) / dt;
  d[n - 1] = (trace[n - 1] - trace[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (trace[i + 1] - trace[i - 1]) / (2.0 * dt);
  return PowerTrace(trace.start_time(), dt, std::move(d));
}

PowerTrace second_derivative(const PowerTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 2) throw ValidationError("second derivative needs at least 2 samples");
  const double dt2 = trace.dt() * trace.dt();
  std::vector<double> d(n, 0.0);
  if (n >= 3) {
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (trace[i + 1] - 2.0 * trace[i] + trace[i - 1]) / dt2;
    d[0] = d[1];
    d[n - 1] = d[n - 2];
  }
  return PowerTrace(trace.start_time(), trace.dt(), std::move(d));
}

PowerTrace resample(const PowerTrace& trace, Seconds new_dt) {
  if (!(new_dt > 0.0) || !std::isfinite(new_dt)) throw ValidationError("resample dt must be positive");
  if (trace.empty()) return PowerTrace(trace.start_time(), new_dt, {});
  if (new_dt == trace.dt()) return trace;
  const double span = trace.duration();
  // Tolerate representation error when the span is an exact multiple of new_dt.
  const auto count = static_cast<std::size_t>(std::floor(span / new_dt * (1.0 + 1e-12) + 1e-12)) + 1;
  const std::size_t n = trace.size();
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double pos = static_cast<double>(k) * new_dt / trace.dt();
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= n - 1) {
      out[k] = trace[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out[k] = frac == 0.0 ? trace[i] : trace[i] + frac * (trace[i + 1] - trace[i]);
  }
  return PowerTrace(trace.start_time(), new_dt, std::move(out));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("non-numeric ") + name + " field '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, std::string("non-finite ") + name + " value");
  return value;
}

}  // namespace

PowerTrace ingest_csv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> times;
  std::vector<double> samples;
  double dt = 0.0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "timestamp_s,power_w") {
        throw ParseError(line_no, "expected header 'timestamp_s,power_w'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(line_no, "expected exactly two fields");
    }
    const double t = parse_field(line.substr(0, comma), line_no, "timestamp");
    const double p = parse_field(line.substr(comma + 1), line_no, "power");
    if (!times.empty() && !(t > times.back())) {
      throw ParseError(line_no, "timestamps must be strictly increasing");
    }
    if (times.size() == 1) {
      dt = t - times.front();
    } else if (times.size() >= 2) {
      const double expected = times.front() + static_cast<double>(times.size()) * dt;
      if (std::abs(t - expected) > 1e-6 * dt) {
        throw ParseError(line_no, "non-uniform grid: expected timestamp " + std::to_string(expected));
      }
    }
    times.push_back(t);
    samples.push_back(p);
  }
  if (!header_seen) throw ParseError(0, "empty input: missing header");
  if (samples.empty()) throw ParseError(0, "no samples");
  // A single row carries no spacing; it is reported with unit dt.
  return PowerTrace(times.front(), times.size() >= 2 ? dt : 1.0, std::move(samples));
}

PowerTrace ingest_csv_text(const std::string& text) {
  std::istringstream in(text);
  return ingest_csv(in);
}

PowerTrace read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return ingest_csv(in);
}

void emit_csv(std::ostream& out, const PowerTrace& trace) {
  out << "timestamp_s,power_w\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", trace.time_at(i), trace[i]);
    out.write(buf, len);
  }
}

std::string emit_csv_text(const PowerTrace& trace) {
  std::ostringstream out;
  emit_csv(out, trace);
  return out.str();
}

void write_csv_file(const std::string& path, const PowerTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file '" + path + "'");
  emit_csv(out, trace);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace aigrid
