#include "aigrid/grid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace aigrid::grid {

namespace {
bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
}  // namespace

void GridFrequencyParams::validate() const {
  if (!(inertia_h > 0.0)) throw ValidationError("inertia constant H must be > 0");
  if (!(p_nominal > 0.0)) throw ValidationError("nominal power must be > 0");
  if (!(rocof_threshold > 0.0)) throw ValidationError("RoCoF threshold must be > 0");
  if (f_nominal && !(*f_nominal > 0.0)) throw ValidationError("nominal frequency must be > 0");
}

Rocof rocof(const GridFrequencyParams& params, Watts delta_p) {
  params.validate();
  Rocof r;
  r.per_unit_per_s = (1.0 / (2.0 * params.inertia_h)) * (delta_p / params.p_nominal);
  if (params.f_nominal) r.hz_per_s = r.per_unit_per_s * *params.f_nominal;
  return r;
}

double stability_index(double rocof_max_pu, const GridFrequencyParams& params) {
  if (!(params.rocof_threshold > 0.0)) throw ValidationError("RoCoF threshold must be > 0");
  return std::abs(rocof_max_pu) / params.rocof_threshold;
}

Watts worst_step_change(const PowerTrace& trace) {
  if (trace.size() < 2) throw ValidationError("step change needs at least 2 samples");
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) worst = std::max(worst, std::abs(trace[i + 1] - trace[i]));
  return worst;
}

std::string to_string(BusType type) {
  switch (type) {
    case BusType::Slack:
      return "slack";
    case BusType::PV:
      return "pv";
    case BusType::PQ:
      return "pq";
  }
  return "pq";
}

BusType bus_type_from_string(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "slack") return BusType::Slack;
  if (lower == "pv") return BusType::PV;
  if (lower == "pq") return BusType::PQ;
  throw ValidationError("unknown bus type '" + name + "' (expected slack, pv or pq)");
}

GridNetwork::GridNetwork(std::vector<Bus> buses, std::vector<double> y_mag, std::vector<double> y_angle)
    : buses_(std::move(buses)), y_mag_(std::move(y_mag)), y_angle_(std::move(y_angle)) {
  validate();
}

GridNetwork GridNetwork::from_lines(std::vector<Bus> buses, const std::vector<Line>& lines,
                                    const std::map<std::size_t, std::pair<double, double>>& shunts) {
  const std::size_t n = buses.size();
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const Line& line : lines) {
    if (line.from >= n || line.to >= n || line.from == line.to) {
      throw ValidationError("line endpoints must be two distinct existing buses");
    }
    if (!finite_nonneg(line.y_mag)) throw ValidationError("line admittance magnitude must be >= 0");
    const std::complex<double> ys = std::polar(line.y_mag, line.y_angle);
    const auto f = static_cast<Eigen::Index>(line.from);
    const auto t = static_cast<Eigen::Index>(line.to);
    y(f, f) += ys;
    y(t, t) += ys;
    y(f, t) -= ys;
    y(t, f) -= ys;
  }
  for (const auto& [bus, adm] : shunts) {
    if (bus >= n) throw ValidationError("shunt refers to a missing bus");
    const auto b = static_cast<Eigen::Index>(bus);
    y(b, b) += std::polar(adm.first, adm.second);
  }
  std::vector<double> mag(n * n);
  std::vector<double> ang(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> v = y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      mag[i * n + j] = std::abs(v);
      ang[i * n + j] = std::abs(v) > 0.0 ? std::arg(v) : 0.0;
    }
  }
  return GridNetwork(std::move(buses), std::move(mag), std::move(ang));
}

std::size_t GridNetwork::slack_index() const {
  for (std::size_t i = 0; i < buses_.size(); ++i) {
    if (buses_[i].type == BusType::Slack) return i;
  }
  throw ValidationError("network has no slack bus");
}

void GridNetwork::validate() const {
  const std::size_t n = buses_.size();
  if (n == 0) throw ValidationError("network has no buses");
  if (y_mag_.size() != n * n || y_angle_.size() != n * n) {
    throw ValidationError("admittance matrices must be n x n");
  }
  const auto slack_count =
      std::count_if(buses_.begin(), buses_.end(), [](const Bus& b) { return b.type == BusType::Slack; });
  if (slack_count != 1) throw ValidationError("network needs exactly one slack bus");
  for (const Bus& b : buses_) {
    if (!(b.v_mag > 0.0) || !std::isfinite(b.v_mag)) throw ValidationError("bus voltage magnitudes must be > 0");
    if (!std::isfinite(b.v_angle) || !std::isfinite(b.p_spec) || !std::isfinite(b.q_spec)) {
      throw ValidationError("bus quantities must be finite");
    }
  }
  for (std::size_t k = 0; k < n * n; ++k) {
    if (!finite_nonneg(y_mag_[k]) || !std::isfinite(y_angle_[k])) {
      throw ValidationError("admittance entries must be finite with non-negative magnitude");
    }
  }
}

double power_injection(const GridNetwork& net, std::size_t i) {
  if (i >= net.size()) throw ValidationError("bus index " + std::to_string(i) + " out of range");
  const auto& b = net.buses();
  double p = 0.0;
  for (std::size_t j = 0; j < net.size(); ++j) {
    p += b[i].v_mag * b[j].v_mag * net.y_mag(i, j) * std::cos(net.y_angle(i, j) - b[i].v_angle + b[j].v_angle);
  }
  return p;
}

double reactive_injection(const GridNetwork& net, std::size_t i) {
  if (i >= net.size()) throw ValidationError("bus index " + std::to_string(i) + " out of range");
  const auto& b = net.buses();
  double q = 0.0;
  for (std::size_t j = 0; j < net.size(); ++j) {
    q -= b[i].v_mag * b[j].v_mag * net.y_mag(i, j) * std::sin(net.y_angle(i, j) - b[i].v_angle + b[j].v_angle);
  }
  return q;
}

PowerFlowResult solve_power_flow(const GridNetwork& input, const PowerFlowOptions& options) {
  input.validate();
  GridNetwork net = input;
  auto& buses = net.buses();
  const std::size_t n = net.size();

  // Unknown ordering: angles of every non-slack bus, then magnitudes of PQ buses.
  std::vector<std::size_t> angle_buses;
  std::vector<std::size_t> mag_buses;
  for (std::size_t i = 0; i < n; ++i) {
    if (buses[i].type != BusType::Slack) {
      angle_buses.push_back(i);
      buses[i].v_angle = 0.0;
    }
    if (buses[i].type == BusType::PQ) {
      mag_buses.push_back(i);
      buses[i].v_mag = 1.0;
    }
  }
  const std::size_t na = angle_buses.size();
  const auto dim = static_cast<Eigen::Index>(na + mag_buses.size());

  auto mismatch = [&](Eigen::VectorXd& f) {
    f.resize(dim);
    for (std::size_t k = 0; k < na; ++k) {
      const std::size_t i = angle_buses[k];
      f(static_cast<Eigen::Index>(k)) = buses[i].p_spec - power_injection(net, i);
    }
    for (std::size_t k = 0; k < mag_buses.size(); ++k) {
      const std::size_t i = mag_buses[k];
      f(static_cast<Eigen::Index>(na + k)) = buses[i].q_spec - reactive_injection(net, i);
    }
    return dim == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  };

  Eigen::VectorXd f;
  double worst = mismatch(f);
  int iter = 0;
  while (!(worst < options.tolerance)) {
    if (!std::isfinite(worst) || iter >= options.max_iterations) {
      std::ostringstream msg;
      msg << "power flow did not converge after " << iter << " iterations (max mismatch " << worst << " pu)";
      throw PowerFlowError(PowerFlowError::Reason::NonConvergence, iter, worst, msg.str());
    }

    // Jacobian of the computed injections with respect to (delta, |V|).
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    auto angle_col = [&](std::size_t bus) -> Eigen::Index {
      const auto it = std::find(angle_buses.begin(), angle_buses.end(), bus);
      return it == angle_buses.end() ? -1 : static_cast<Eigen::Index>(it - angle_buses.begin());
    };
    auto mag_col = [&](std::size_t bus) -> Eigen::Index {
      const auto it = std::find(mag_buses.begin(), mag_buses.end(), bus);
      return it == mag_buses.end() ? -1 : static_cast<Eigen::Index>(na + (it - mag_buses.begin()));
    };
    auto fill_row = [&](Eigen::Index row, std::size_t i, bool reactive) {
      const double vi = buses[i].v_mag;
      for (std::size_t j = 0; j < n; ++j) {
        const double y = net.y_mag(i, j);
        if (y == 0.0) continue;
        const double arg = net.y_angle(i, j) - buses[i].v_angle + buses[j].v_angle;
        const double c = std::cos(arg);
        const double s = std::sin(arg);
        const double vj = buses[j].v_mag;
        if (j == i) {
          if (const auto col = mag_col(i); col >= 0) {
            jac(row, col) += reactive ? -2.0 * vi * y * s : 2.0 * vi * y * c;
          }
          continue;
        }
        const Eigen::Index ci = angle_col(i);
        const Eigen::Index cj = angle_col(j);
        if (ci >= 0) jac(row, ci) += reactive ? vi * vj * y * c : vi * vj * y * s;
        if (cj >= 0) jac(row, cj) += reactive ? -vi * vj * y * c : -vi * vj * y * s;
        if (const auto mi = mag_col(i); mi >= 0) jac(row, mi) += reactive ? -vj * y * s : vj * y * c;
        if (const auto mj = mag_col(j); mj >= 0) jac(row, mj) += reactive ? -vi * y * s : vi * y * c;
      }
    };
    for (std::size_t k = 0; k < na; ++k) fill_row(static_cast<Eigen::Index>(k), angle_buses[k], false);
    for (std::size_t k = 0; k < mag_buses.size(); ++k) {
      fill_row(static_cast<Eigen::Index>(na + k), mag_buses[k], true);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      std::ostringstream msg;
      msg << "power flow Jacobian is singular at iteration " << iter << " (max mismatch " << worst << " pu)";
      throw PowerFlowError(PowerFlowError::Reason::SingularJacobian, iter, worst, msg.str());
    }
    const Eigen::VectorXd step = lu.solve(f);
    for (std::size_t k = 0; k < na; ++k) buses[angle_buses[k]].v_angle += step(static_cast<Eigen::Index>(k));
    for (std::size_t k = 0; k < mag_buses.size(); ++k) {
      buses[mag_buses[k]].v_mag += step(static_cast<Eigen::Index>(na + k));
    }
    ++iter;
    worst = mismatch(f);
    for (std::size_t i : mag_buses) {
      if (!(buses[i].v_mag > 0.0)) worst = std::numeric_limits<double>::infinity();
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (buses[i].type == BusType::Slack) buses[i].p_spec = power_injection(net, i);
    if (buses[i].type != BusType::PQ) buses[i].q_spec = reactive_injection(net, i);
  }
  return {std::move(net), iter, worst};
}

double spatial_distribution_factor(const std::vector<LoadSite>& sites) {
  double weighted = 0.0;
  double total = 0.0;
  for (const LoadSite& s : sites) {
    if (!finite_nonneg(s.power)) throw ValidationError("site power must be >= 0");
    if (!(s.area_km2 > 0.0) || !std::isfinite(s.area_km2)) throw ValidationError("site area must be > 0");
    weighted += s.power * s.area_km2;
    total += s.power;
  }
  if (!(total > 0.0)) throw ValidationError("SDF undefined: total site power is zero");
  return weighted / total;
}

PowerTrace load_duration_curve(const PowerTrace& trace) {
  if (trace.empty()) throw ValidationError("load duration curve of an empty trace");
  std::vector<double> sorted(trace.values());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  return PowerTrace(trace.start_time(), trace.dt(), std::move(sorted));
}

double ldc_delta_energy(const PowerTrace& with_ai, const PowerTrace& without_ai) {
  require_same_grid(with_ai, without_ai, "load duration comparison");
  const PowerTrace a = load_duration_curve(with_ai);
  const PowerTrace b = load_duration_curve(without_ai);
  double sum = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) sum += 0.5 * ((a[i - 1] - b[i - 1]) + (a[i] - b[i]));
  return sum * a.dt();
}

HarmonicSpectrum::HarmonicSpectrum(double i1, std::map<int, double> harmonics)
    : i1_(i1), harmonics_(std::move(harmonics)) {
  if (!(i1_ > 0.0) || !std::isfinite(i1_)) throw ValidationError("fundamental current must be > 0");
  for (const auto& [order, amps] : harmonics_) {
    if (order < 2) throw ValidationError("harmonic orders must be >= 2");
    if (!finite_nonneg(amps)) throw ValidationError("harmonic currents must be >= 0");
  }
}

double thd(const HarmonicSpectrum& spectrum) {
  double ss = 0.0;
  for (const auto& [order, amps] : spectrum.harmonics()) ss += amps * amps;
  return std::sqrt(ss) / spectrum.fundamental();
}

void VariabilityInputs::validate() const {
  if (!finite_nonneg(v_ai) || !finite_nonneg(v_re)) throw ValidationError("variabilities must be >= 0");
  if (!(rho >= -1.0 && rho <= 1.0)) throw ValidationError("correlation coefficient must lie in [-1, 1]");
}

Watts net_load_variability(const VariabilityInputs& v) {
  v.validate();
  const double arg = v.v_ai * v.v_ai + v.v_re * v.v_re - 2.0 * v.rho * v.v_ai * v.v_re;
  return std::sqrt(std::max(0.0, arg));
}

Watts estimate_variability(const PowerTrace& trace) { return summary_stats(trace).std; }

double estimate_correlation(const PowerTrace& a, const PowerTrace& b) {
  require_same_grid(a, b, "correlation inputs");
  if (a.empty()) throw ValidationError("correlation of empty traces");
  const double ma = summary_stats(a).mean;
  const double mb = summary_stats(b).mean;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw ValidationError("correlation undefined for a zero-variance trace");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

Watts estimate_windowed_variability(const PowerTrace& trace, std::size_t window) {
  if (window < 1) throw ValidationError("variability window must hold at least one sample");
  const std::size_t windows = trace.size() / window;
  if (windows == 0) throw ValidationError("trace shorter than one variability window");
  double sum = 0.0;
  for (std::size_t w = 0; w < windows; ++w) {
    std::vector<double> chunk(trace.values().begin() + static_cast<std::ptrdiff_t>(w * window),
                              trace.values().begin() + static_cast<std::ptrdiff_t>((w + 1) * window));
    sum += summary_stats(PowerTrace(0.0, trace.dt(), std::move(chunk))).std;
  }
  return sum / static_cast<double>(windows);
}

}  // namespace aigrid::grid
