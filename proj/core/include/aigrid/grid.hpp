#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aigrid/error.hpp"
#include "aigrid/trace.hpp"

namespace aigrid::grid {

// ---------------------------------------------------------------------------
// Frequency stability
// ---------------------------------------------------------------------------

struct GridFrequencyParams {
  Seconds inertia_h = 5.0;
  Watts p_nominal = 1.0;
  double rocof_threshold = 1.0;  // per-unit/s
  std::optional<double> f_nominal;

  void validate() const;
};

struct Rocof {
  double per_unit_per_s = 0.0;
  std::optional<double> hz_per_s;  // only when f_nominal is known
};

/// (1 / 2H) * (dP / P_nominal). Sign follows dP.
Rocof rocof(const GridFrequencyParams& params, Watts delta_p);
/// |rocof_max| / threshold; above 1 signals a potential stability problem.
double stability_index(double rocof_max_pu, const GridFrequencyParams& params);
/// Worst single-step power change max |P[i+1] - P[i]| of a trace.
Watts worst_step_change(const PowerTrace& trace);

// ---------------------------------------------------------------------------
// Power flow
// ---------------------------------------------------------------------------

enum class BusType { Slack, PV, PQ };

std::string to_string(BusType type);
BusType bus_type_from_string(const std::string& name);

struct Bus {
  std::string name;
  BusType type = BusType::PQ;
  double v_mag = 1.0;    // pu
  double v_angle = 0.0;  // rad
  double p_spec = 0.0;   // specified real injection, pu (generation positive)
  double q_spec = 0.0;   // specified reactive injection, pu (PQ buses)
};

/// Series branch between two buses with admittance |y| at angle theta.
struct Line {
  std::size_t from = 0;
  std::size_t to = 0;
  double y_mag = 0.0;
  double y_angle = 0.0;
};

/// Bus set plus the polar admittance matrix, all in per-unit.
class GridNetwork {
 public:
  GridNetwork(std::vector<Bus> buses, std::vector<double> y_mag, std::vector<double> y_angle);
  /// Builds the admittance matrix from series lines and optional per-bus
  /// shunt admittances (|y|, angle).
  static GridNetwork from_lines(std::vector<Bus> buses, const std::vector<Line>& lines,
                                const std::map<std::size_t, std::pair<double, double>>& shunts = {});

  std::size_t size() const noexcept { return buses_.size(); }
  const std::vector<Bus>& buses() const noexcept { return buses_; }
  std::vector<Bus>& buses() noexcept { return buses_; }
  double y_mag(std::size_t i, std::size_t j) const { return y_mag_[i * size() + j]; }
  double y_angle(std::size_t i, std::size_t j) const { return y_angle_[i * size() + j]; }
  std::size_t slack_index() const;

  void validate() const;

 private:
  std::vector<Bus> buses_;
  std::vector<double> y_mag_;
  std::vector<double> y_angle_;
};

/// P_i = sum_j |V_i||V_j||Y_ij| cos(theta_ij - delta_i + delta_j).
double power_injection(const GridNetwork& net, std::size_t i);
/// Q_i = -sum_j |V_i||V_j||Y_ij| sin(theta_ij - delta_i + delta_j).
double reactive_injection(const GridNetwork& net, std::size_t i);

struct PowerFlowOptions {
  double tolerance = 1e-8;
  int max_iterations = 50;
};

struct PowerFlowResult {
  GridNetwork network;  // solved state; slack p/q and PV q filled in
  int iterations = 0;
  double max_mismatch = 0.0;
};

class PowerFlowError : public NumericalError {
 public:
  enum class Reason { NonConvergence, SingularJacobian };
  PowerFlowError(Reason reason, int iterations, double max_mismatch, const std::string& what)
      : NumericalError(what), reason_(reason), iterations_(iterations), max_mismatch_(max_mismatch) {}
  Reason reason() const noexcept { return reason_; }
  int iterations() const noexcept { return iterations_; }
  double max_mismatch() const noexcept { return max_mismatch_; }

 private:
  Reason reason_;
  int iterations_;
  double max_mismatch_;
};

/// Newton-Raphson from a flat start (1.0 pu at PQ buses, 0 rad everywhere
/// except the slack). Real-power mismatch at PV and PQ buses, reactive
/// mismatch at PQ buses.
PowerFlowResult solve_power_flow(const GridNetwork& net, const PowerFlowOptions& options = {});

// ---------------------------------------------------------------------------
// Spatial concentration, load duration, harmonics, variability
// ---------------------------------------------------------------------------

struct LoadSite {
  Watts power = 0.0;
  double area_km2 = 1.0;
};

/// sum(P_i A_i) / sum(P_i), in km^2.
double spatial_distribution_factor(const std::vector<LoadSite>& sites);

/// Samples sorted descending (stable), on the input grid.
PowerTrace load_duration_curve(const PowerTrace& trace);
/// Trapezoidal integral of LDC(with) - LDC(without), in joules.
double ldc_delta_energy(const PowerTrace& with_ai, const PowerTrace& without_ai);

class HarmonicSpectrum {
 public:
  HarmonicSpectrum(double i1, std::map<int, double> harmonics);
  double fundamental() const noexcept { return i1_; }
  const std::map<int, double>& harmonics() const noexcept { return harmonics_; }

 private:
  double i1_;
  std::map<int, double> harmonics_;
};

/// sqrt(sum_{n>=2} I_n^2) / I_1 over the provided orders.
double thd(const HarmonicSpectrum& spectrum);

struct VariabilityInputs {
  Watts v_ai = 0.0;
  Watts v_re = 0.0;
  double rho = 0.0;

  void validate() const;
};

/// sqrt(V_AI^2 + V_RE^2 - 2 rho V_AI V_RE).
Watts net_load_variability(const VariabilityInputs& v);
/// Population standard deviation of the samples.
Watts estimate_variability(const PowerTrace& trace);
/// Pearson correlation; throws when either trace has zero variance.
double estimate_correlation(const PowerTrace& a, const PowerTrace& b);
/// Mean of per-window standard deviations over non-overlapping windows of
/// `window` samples (a trailing partial window is ignored).
Watts estimate_windowed_variability(const PowerTrace& trace, std::size_t window);

}  // namespace aigrid::grid
