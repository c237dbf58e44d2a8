#include "aigrid/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "aigrid/config_text.hpp"
#include "aigrid/error.hpp"

namespace aigrid::scenario {

using nlohmann::json;
using workload::FineTuneMode;

namespace {

/// Typed access to one config table; remembers which keys were read so that
/// misspelled keys are reported instead of silently ignored.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(path_.empty() ? "config must be a table" : "'" + path_ + "' must be a table");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) throw ValidationError(where(key) + " must be a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::int64_t integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_integer()) throw ValidationError(where(key) + " must be an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = require(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ValidationError(where(key) + " must be a non-negative integer");
  }

  std::string string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) throw ValidationError(where(key) + " must be a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) throw ValidationError(where(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ValidationError(where(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const json& raw(const std::string& key) { return require(key); }

  Section table(const std::string& key) { return Section(require(key), child(key)); }

  std::vector<Section> tables(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) throw ValidationError(where(key) + " must be an array of tables");
    std::vector<Section> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], child(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  void ignore(const std::string& key) { used_.insert(key); }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) throw ValidationError("unknown key " + where(key));
    }
  }

  std::string where(const std::string& key) const { return "'" + child(key) + "'"; }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& require(const std::string& key) {
    if (!node_.contains(key)) throw ValidationError("missing key " + where(key));
    used_.insert(key);
    return node_.at(key);
  }

  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent, reproducible sub-stream seeds derived from the scenario seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

constexpr std::uint64_t kScheduleStream = 1;
constexpr std::uint64_t kInferenceStream = 2;

std::array<double, 3> mode_triple(Section s, const std::string& what) {
  std::array<double, 3> out{};
  out[0] = s.number("high");
  out[1] = s.number("low");
  out[2] = s.number("off");
  s.finish();
  (void)what;
  return out;
}

ScheduleEntry parse_schedule_entry(Section s) {
  const std::string mode = s.string("mode");
  const double start = s.number("start_s");
  const double end = s.number("end_s");
  if (mode == "markov") {
    workload::MarkovScheduleSpec spec;
    spec.start_s = start;
    spec.end_s = end;
    spec.initial = workload::fine_tune_mode_from_string(s.string_or("initial", "high"));
    spec.mean_dwell_s = mode_triple(s.table("dwell_s"), "dwell_s");
    Section rows = s.table("transitions");
    const char* names[] = {"high", "low", "off"};
    for (std::size_t m = 0; m < 3; ++m) {
      const auto row = rows.numbers(names[m]);
      if (row.size() != 3) throw ValidationError(rows.where(names[m]) + " needs three weights (high, low, off)");
      std::copy(row.begin(), row.end(), spec.transitions[m].begin());
    }
    rows.finish();
    s.finish();
    spec.validate();
    return spec;
  }
  s.finish();
  return workload::ScheduleSegment{start, end, workload::fine_tune_mode_from_string(mode)};
}

}  // namespace

Watts BatchSweep::pulse_power(const BatchRun& run) const {
  if (run.power_w) return *run.power_w;
  const double share = run.memory_gb ? std::min(1.0, *run.memory_gb / device_memory_gb) : 1.0;
  return idle_power + (peak_power - idle_power) * share;
}

Seconds BatchSweep::total_duration() const {
  double t = gap_s;
  for (const BatchRun& r : runs) {
    if (!r.out_of_memory()) t += *r.time_s + gap_s;
  }
  return t;
}

void ScenarioConfig::validate() const {
  if (!(dt_s > 0.0) || !std::isfinite(dt_s)) throw ValidationError("dt_s must be > 0");
  if (!batch_sweep && (!(duration_s > 0.0) || !std::isfinite(duration_s))) {
    throw ValidationError("duration_s must be > 0");
  }
  mix.validate();
  accelerators.validate();
  if (mix.w_train > 0.0 && !training) throw ValidationError("training weight set but no [training] section");
  if (mix.w_finetune > 0.0 && !finetune) throw ValidationError("finetune weight set but no [finetune] section");
  if (mix.w_inference > 0.0 && !inference) throw ValidationError("inference weight set but no [inference] section");
  if (training) training->validate();
  if (finetune) {
    finetune->profile.validate();
    double last_end = -std::numeric_limits<double>::infinity();
    for (const ScheduleEntry& e : finetune->entries) {
      const auto [start, end] = std::visit([](const auto& x) { return std::pair{x.start_s, x.end_s}; }, e);
      if (!(start < end)) throw ValidationError("fine-tune schedule entries need start_s < end_s");
      if (start < last_end) throw ValidationError("fine-tune schedule entries must be ordered and non-overlapping");
      last_end = end;
    }
  }
  if (inference) inference->validate();
  if (batch_sweep) {
    if (!(batch_sweep->gap_s >= 0.0)) throw ValidationError("batch_sweep.gap_s must be >= 0");
    if (!(batch_sweep->idle_power >= 0.0) || batch_sweep->idle_power > batch_sweep->peak_power) {
      throw ValidationError("batch_sweep needs 0 <= idle_power_w <= peak_power_w");
    }
    if (!(batch_sweep->device_memory_gb > 0.0)) throw ValidationError("batch_sweep.device_memory_gb must be > 0");
    for (const BatchRun& r : batch_sweep->runs) {
      if (r.batch_size < 1) throw ValidationError("batch sizes must be >= 1");
      if (r.time_s && !(*r.time_s > 0.0)) throw ValidationError("batch run time must be > 0");
      if (r.power_w && !(*r.power_w >= 0.0)) throw ValidationError("batch run power must be >= 0");
    }
  }
  if (facility) {
    facility->config.validate();
    if (facility->cop) facility::CoolingParams{*facility->cop};
    if (!(facility->useful_power_fraction >= 0.0 && facility->useful_power_fraction <= 1.0)) {
      throw ValidationError("facility.useful_power_fraction must lie in [0, 1]");
    }
  }
  if (ups) ups->validate();
  if (stages) stages->validate();
  if (grid && grid->frequency) grid->frequency->validate();
}

Seconds ScenarioConfig::effective_duration() const {
  return batch_sweep ? batch_sweep->total_duration() : duration_s;
}

std::size_t ScenarioConfig::sample_count() const {
  const double steps = effective_duration() / dt_s;
  // Absorb representation error so that e.g. 3200 / 0.1 does not round up.
  return static_cast<std::size_t>(std::ceil(steps - 1e-9 * std::max(1.0, steps))) + 1;
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

namespace {

ups::UpsConfig parse_ups(Section u) {
  ups::UpsConfig c;
  c.capacity_j = u.number("capacity_j");
  c.max_charge_power = u.number("max_charge_w");
  c.max_discharge_power = u.number("max_discharge_w");
  c.round_trip_efficiency = u.number_or("round_trip_efficiency", 1.0);
  c.grid_ramp_limit = u.number("grid_ramp_limit_w_per_s");
  c.initial_soc_fraction = u.number_or("initial_soc_fraction", 0.5);
  u.finish();
  c.validate();
  return c;
}

}  // namespace

ups::UpsConfig ups_from_json(const json& table) { return parse_ups(Section(table, "ups")); }

ups::StageSchedule stages_from_json(const json& array) {
  if (!array.is_array()) throw ValidationError("'stages' must be an array of tables");
  ups::StageSchedule schedule;
  for (std::size_t i = 0; i < array.size(); ++i) {
    Section s(array[i], "stages[" + std::to_string(i) + "]");
    schedule.intervals.push_back(
        {s.number("start_s"), s.number("end_s"), ups::stage_from_string(s.string("stage")), s.number("cap_w")});
    s.finish();
  }
  schedule.validate();
  return schedule;
}

std::vector<grid::LoadSite> sites_from_json(const json& tree) {
  Section top(tree, "");
  std::vector<grid::LoadSite> sites;
  for (Section& s : top.tables("sites")) {
    s.ignore("name");
    sites.push_back({s.number("power_w"), s.number("area_km2")});
    s.finish();
  }
  top.finish();
  return sites;
}

grid::HarmonicSpectrum spectrum_from_json(const json& tree) {
  Section top(tree, "");
  const double i1 = top.number("fundamental_a");
  std::map<int, double> harmonics;
  const json& table = top.raw("harmonics");
  if (!table.is_object()) throw ValidationError("'harmonics' must be a table of order = amplitude");
  for (const auto& [key, value] : table.items()) {
    int order = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), order);
    if (ec != std::errc() || ptr != key.data() + key.size()) {
      throw ValidationError("harmonic order '" + key + "' is not an integer");
    }
    if (!value.is_number()) throw ValidationError("harmonic " + key + " amplitude must be a number");
    harmonics[order] = value.get<double>();
  }
  top.finish();
  return grid::HarmonicSpectrum(i1, std::move(harmonics));
}

ScenarioConfig scenario_from_json(const json& tree, const std::string& base_dir) {
  ScenarioConfig sc;
  sc.base_dir = base_dir;
  Section top(tree, "");
  sc.name = top.string_or("name", "scenario");
  sc.dt_s = top.number_or("dt_s", 1.0);
  sc.duration_s = top.number_or("duration_s", 0.0);
  sc.seed = top.has("seed") ? top.unsigned_integer("seed") : 0;
  top.ignore("description");
  top.ignore("targets");

  if (top.has("mix")) {
    Section m = top.table("mix");
    sc.mix.w_train = m.number_or("train", 0.0);
    sc.mix.w_finetune = m.number_or("finetune", 0.0);
    sc.mix.w_inference = m.number_or("inference", 0.0);
    m.finish();
  }
  if (top.has("accelerators")) {
    Section a = top.table("accelerators");
    const auto count = a.integer("count");
    if (count < 0 || count > std::numeric_limits<int>::max()) throw ValidationError("accelerators.count out of range");
    sc.accelerators.count = static_cast<int>(count);
    sc.accelerators.peak_power = a.number("peak_power_w");
    sc.accelerators.idle_power = a.number_or("idle_power_w", 0.0);
    a.finish();
  }
  if (top.has("training")) {
    Section t = top.table("training");
    workload::TrainingProfile p;
    p.base_power = t.number_or("base_power_w", 0.0);
    p.u_max = workload::UtilizationFactor(t.number_or("u_max", 0.98));
    p.t_start = t.number_or("t_start_s", 0.0);
    p.t_end = t.has("t_end_s") ? t.number("t_end_s") : std::max(sc.duration_s, p.t_start + sc.dt_s);
    t.finish();
    sc.training = p;
  }
  if (top.has("finetune")) {
    Section f = top.table("finetune");
    FineTuneSetup setup;
    setup.profile.base_power = f.number_or("base_power_w", 0.0);
    setup.profile.beta = f.number("beta");
    setup.profile.utilization = f.number_or("utilization", 0.85);
    setup.profile.eval_interval_s = f.number_or("eval_interval_s", 1.0);
    setup.profile.eval_dip_duration_s = f.number_or("eval_dip_s", 0.0);
    if (f.has("schedule")) {
      for (Section& e : f.tables("schedule")) setup.entries.push_back(parse_schedule_entry(std::move(e)));
    }
    f.finish();
    sc.finetune = std::move(setup);
  }
  if (top.has("inference")) {
    Section i = top.table("inference");
    workload::InferenceProfile p;
    p.base_power = i.number_or("base_power_w", 0.0);
    p.query_duration_s = i.number("query_duration_s");
    for (Section& r : i.tables("rate_schedule")) {
      p.rate_schedule.push_back({r.number("start_s"), r.number("rate_per_s")});
      r.finish();
    }
    p.size_weights = i.has("size_weights") ? i.numbers("size_weights") : std::vector<double>{1.0};
    p.complexity_weights = i.has("complexity_weights") ? i.numbers("complexity_weights") : std::vector<double>{1.0};
    const json& table = i.raw("query_power_w");
    if (table.is_number()) {
      p.query_power = {{table.get<double>()}};
    } else {
      if (!table.is_array()) throw ValidationError("inference.query_power_w must be a number or a table of rows");
      p.query_power.clear();
      for (const json& row : table) {
        if (!row.is_array()) throw ValidationError("inference.query_power_w rows must be arrays");
        std::vector<double> values;
        for (const json& v : row) {
          if (!v.is_number()) throw ValidationError("inference.query_power_w entries must be numbers");
          values.push_back(v.get<double>());
        }
        p.query_power.push_back(std::move(values));
      }
    }
    i.finish();
    sc.inference = std::move(p);
  }
  if (top.has("dynamics")) {
    Section d = top.table("dynamics");
    workload::DynamicsCoefficients c;
    c.c = d.number_or("c_s", 0.0);
    c.d = d.number_or("d_s2", 0.0);
    c.e = d.number_or("e_s", 0.0);
    if (d.has("external_trace")) sc.external_trace_path = d.string("external_trace");
    d.finish();
    sc.dynamics = c;
  }
  if (top.has("batch_sweep")) {
    Section b = top.table("batch_sweep");
    BatchSweep sweep;
    sweep.idle_power = b.number("idle_power_w");
    sweep.peak_power = b.number("peak_power_w");
    sweep.device_memory_gb = b.number("device_memory_gb");
    sweep.gap_s = b.number_or("gap_s", 10.0);
    for (Section& r : b.tables("runs")) {
      BatchRun run;
      run.model = r.string("model");
      run.batch_size = static_cast<int>(r.integer("batch_size"));
      const std::string status = r.string_or("status", "ok");
      if (status != "ok" && status != "oom") throw ValidationError(r.where("status") + " must be 'ok' or 'oom'");
      if (status == "ok") run.time_s = r.number("time_s");
      run.memory_gb = r.optional_number("memory_gb");
      run.power_w = r.optional_number("power_w");
      r.finish();
      sweep.runs.push_back(std::move(run));
    }
    b.finish();
    sc.batch_sweep = std::move(sweep);
  }
  if (top.has("facility")) {
    Section f = top.table("facility");
    FacilitySettings fs;
    fs.config.eta_acac = f.number_or("eta_acac", 1.0);
    fs.config.eta_acdc = f.number_or("eta_acdc", 1.0);
    const std::string mode = f.string_or("efficiency_mode", "multiply");
    if (mode == "multiply") {
      fs.config.mode = facility::EfficiencyMode::Multiply;
    } else if (mode == "divide") {
      fs.config.mode = facility::EfficiencyMode::Divide;
    } else {
      throw ValidationError("facility.efficiency_mode must be 'multiply' or 'divide'");
    }
    auto components = [&](const std::string& key, std::map<std::string, Watts>& into) {
      if (!f.has(key)) return;
      const json& node = f.raw(key);
      if (!node.is_object()) throw ValidationError(f.where(key) + " must be a table of component powers");
      for (const auto& [name, value] : node.items()) {
        if (!value.is_number()) throw ValidationError(f.where(key) + "." + name + " must be a number");
        into[name] = value.get<double>();
      }
    };
    components("supporting", fs.config.supporting_components);
    components("it", fs.config.it_components);
    fs.cop = f.optional_number("cop");
    fs.useful_power_fraction = f.number_or("useful_power_fraction", 0.0);
    f.finish();
    sc.facility = std::move(fs);
  }
  if (top.has("ups")) {
    top.ignore("ups");
    sc.ups = ups_from_json(tree.at("ups"));
  }
  if (top.has("stages")) {
    top.ignore("stages");
    sc.stages = stages_from_json(tree.at("stages"));
  }
  if (top.has("grid")) {
    Section g = top.table("grid");
    GridSettings gs;
    if (g.has("inertia_s") || g.has("p_nominal_w") || g.has("rocof_threshold_pu_per_s")) {
      grid::GridFrequencyParams fp;
      fp.inertia_h = g.number("inertia_s");
      fp.p_nominal = g.number("p_nominal_w");
      fp.rocof_threshold = g.number("rocof_threshold_pu_per_s");
      fp.f_nominal = g.optional_number("f_nominal_hz");
      gs.frequency = fp;
    }
    if (g.has("network")) gs.network_path = g.string("network");
    g.finish();
    sc.grid = std::move(gs);
  }
  top.finish();
  sc.validate();
  return sc;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  const json tree = config::read_config_file(path);
  const auto dir = std::filesystem::path(path).parent_path().string();
  return scenario_from_json(tree, dir.empty() ? "." : dir);
}

std::vector<workload::ScheduleSegment> expand_schedule(const ScenarioConfig& scenario, std::uint64_t seed) {
  std::vector<workload::ScheduleSegment> out;
  if (!scenario.finetune) return out;
  std::mt19937_64 rng(stream_seed(seed, kScheduleStream));
  for (const ScheduleEntry& entry : scenario.finetune->entries) {
    if (const auto* seg = std::get_if<workload::ScheduleSegment>(&entry)) {
      out.push_back(*seg);
    } else {
      const auto generated =
          workload::generate_markov_schedule(std::get<workload::MarkovScheduleSpec>(entry), scenario.dt_s, rng);
      out.insert(out.end(), generated.begin(), generated.end());
    }
  }
  return out;
}

namespace {

PowerTrace synthesize_sweep(const ScenarioConfig& sc) {
  const BatchSweep& sweep = *sc.batch_sweep;
  struct Pulse {
    double start;
    double end;
    double power;
  };
  std::vector<Pulse> pulses;
  double t = sweep.gap_s;
  for (const BatchRun& r : sweep.runs) {
    if (r.out_of_memory()) continue;
    pulses.push_back({t, t + *r.time_s, sweep.pulse_power(r)});
    t += *r.time_s + sweep.gap_s;
  }
  const std::size_t n = sc.sample_count();
  std::vector<double> samples(n, sweep.idle_power);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i) * sc.dt_s;
    for (const Pulse& p : pulses) {
      if (ti >= p.start && ti < p.end) {
        samples[i] = p.power;
        break;
      }
    }
  }
  return PowerTrace(0.0, sc.dt_s, std::move(samples));
}

}  // namespace

PowerTrace synthesize(const ScenarioConfig& sc, std::optional<std::uint64_t> seed_override) {
  sc.validate();
  const std::uint64_t seed = seed_override.value_or(sc.seed);
  PowerTrace trace;
  if (sc.batch_sweep) {
    trace = synthesize_sweep(sc);
  } else {
    const std::size_t n = sc.sample_count();
    std::optional<workload::FineTuneProfile> finetune;
    if (sc.finetune && sc.mix.w_finetune > 0.0) {
      finetune = sc.finetune->profile;
      finetune->schedule = expand_schedule(sc, seed);
      finetune->validate();
    }
    std::optional<workload::InferenceSimulator> inference;
    if (sc.inference && sc.mix.w_inference > 0.0) {
      inference.emplace(*sc.inference, sc.dt_s, stream_seed(seed, kInferenceStream));
    }
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * sc.dt_s;
      workload::PhaseValues v;
      if (sc.training && sc.mix.w_train > 0.0) v.training = workload::training_power(t, *sc.training, sc.accelerators);
      if (finetune) v.finetune = workload::finetune_power(t, *finetune, sc.accelerators);
      if (inference) v.inference = inference->step(t);
      samples[i] = workload::mixed_power(sc.mix, v);
    }
    trace = PowerTrace(0.0, sc.dt_s, std::move(samples));
  }
  if (sc.dynamics) {
    std::optional<PowerTrace> external;
    if (sc.external_trace_path) external = read_csv_file(resolve_path(sc.base_dir, *sc.external_trace_path));
    trace = workload::dynamic_power(trace, *sc.dynamics, external);
  }
  return trace;
}

grid::GridNetwork network_from_json(const json& tree) {
  Section top(tree, "network");
  std::vector<grid::Bus> buses;
  std::map<std::string, std::size_t> index;
  for (Section& b : top.tables("buses")) {
    grid::Bus bus;
    bus.name = b.string_or("name", "bus" + std::to_string(buses.size() + 1));
    bus.type = grid::bus_type_from_string(b.string("type"));
    bus.v_mag = b.number_or("v", 1.0);
    bus.v_angle = b.number_or("angle", 0.0);
    bus.p_spec = b.number_or("p", 0.0);
    bus.q_spec = b.number_or("q", 0.0);
    b.finish();
    if (!index.emplace(bus.name, buses.size()).second) throw ValidationError("duplicate bus name '" + bus.name + "'");
    buses.push_back(std::move(bus));
  }
  auto bus_ref = [&](Section& s, const std::string& key) -> std::size_t {
    const json& v = s.raw(key);
    if (v.is_string()) {
      const auto it = index.find(v.get<std::string>());
      if (it == index.end()) throw ValidationError(s.where(key) + " names an unknown bus");
      return it->second;
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0 && static_cast<std::size_t>(v.get<std::int64_t>()) < buses.size()) {
      return static_cast<std::size_t>(v.get<std::int64_t>());
    }
    throw ValidationError(s.where(key) + " must be a bus name or index");
  };
  if (top.has("ybus")) {
    Section y = top.table("ybus");
    std::vector<double> mag;
    std::vector<double> ang;
    for (const char* key : {"magnitude", "angle"}) {
      const json& m = y.raw(key);
      auto& into = std::string(key) == "magnitude" ? mag : ang;
      if (!m.is_array() || m.size() != buses.size()) throw ValidationError("ybus rows must match the bus count");
      for (const json& row : m) {
        if (!row.is_array() || row.size() != buses.size()) throw ValidationError("ybus must be square");
        for (const json& v : row) {
          if (!v.is_number()) throw ValidationError("ybus entries must be numbers");
          into.push_back(v.get<double>());
        }
      }
    }
    y.finish();
    top.finish();
    return grid::GridNetwork(std::move(buses), std::move(mag), std::move(ang));
  }
  std::vector<grid::Line> lines;
  if (top.has("lines")) {
    for (Section& l : top.tables("lines")) {
      grid::Line line;
      line.from = bus_ref(l, "from");
      line.to = bus_ref(l, "to");
      if (l.has("x") || l.has("r")) {
        const std::complex<double> z(l.number_or("r", 0.0), l.number_or("x", 0.0));
        if (std::abs(z) == 0.0) throw ValidationError("line impedance must be non-zero");
        const std::complex<double> yv = 1.0 / z;
        line.y_mag = std::abs(yv);
        line.y_angle = std::arg(yv);
      } else {
        line.y_mag = l.number("y_mag");
        line.y_angle = l.number("y_angle");
      }
      l.finish();
      lines.push_back(line);
    }
  }
  std::map<std::size_t, std::pair<double, double>> shunts;
  if (top.has("shunts")) {
    for (Section& s : top.tables("shunts")) {
      shunts[bus_ref(s, "bus")] = {s.number("y_mag"), s.number("y_angle")};
      s.finish();
    }
  }
  top.ignore("base_mva");
  top.finish();
  return grid::GridNetwork::from_lines(std::move(buses), lines, shunts);
}

grid::GridNetwork load_network_file(const std::string& path) {
  return network_from_json(config::read_config_file(path));
}

json network_to_json(const grid::GridNetwork& net) {
  json buses = json::array();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const grid::Bus& b = net.buses()[i];
    buses.push_back({{"name", b.name},
                     {"type", grid::to_string(b.type)},
                     {"v", b.v_mag},
                     {"angle", b.v_angle},
                     {"p", b.p_spec},
                     {"q", b.q_spec},
                     {"p_injection", grid::power_injection(net, i)},
                     {"q_injection", grid::reactive_injection(net, i)}});
  }
  return {{"buses", buses}};
}

}  // namespace aigrid::scenario
