#include "aigrid/presets.hpp"

#include "aigrid/config_text.hpp"
#include "aigrid/error.hpp"

namespace aigrid::presets {

namespace {

// 160 accelerators on a shared cluster job, four days at 1 s. The fine-tune
// model's three levels stand in for the job's busy, partial and idle spans;
// dwell times are scaled so the long-run shares of high, low and off time
// are 12 %, 78 % and 10 %.
constexpr std::string_view kBert = R"(name = "bert_supercloud"
dt_s = 1.0
duration_s = 345600.0
seed = 20240917

[mix]
finetune = 1.0

[accelerators]
count = 160
peak_power_w = 300.0
idle_power_w = 40.0

[finetune]
base_power_w = 700.0
beta = 0.3
utilization = 1.0

[[finetune.schedule]]
start_s = 0.0
end_s = 345600.0
mode = "markov"
initial = "low"
dwell_s = { high = 113.63636363636364, low = 454.54545454545456, off = 111.11111111111111 }
transitions = { high = [0, 78, 10], low = [12, 0, 10], off = [12, 78, 0] }

[targets]
mean_w = { value = 17800.0, rel_tol = 0.10 }
max_w = { value = 48700.0, rel_tol = 0.05 }
std_w = { value = 12390.0, rel_tol = 0.15 }
duration_days = 4
)";

// Single desktop GPU, 22 h of training at 1 s. Long busy spans broken by
// short data-loading stalls; a stall occasionally drops to idle, which
// produces the largest ramp back to full power.
constexpr std::string_view kGpt2Training = R"(name = "gpt2_4090_training"
dt_s = 1.0
duration_s = 79200.0
seed = 4090

[mix]
finetune = 1.0

[accelerators]
count = 1
peak_power_w = 450.0
idle_power_w = 20.0

[finetune]
base_power_w = 105.0
beta = 0.08571428571428572
utilization = 0.7777777777777778

[[finetune.schedule]]
start_s = 0.0
end_s = 79200.0
mode = "markov"
initial = "high"
dwell_s = { high = 60.0, low = 8.0, off = 5.0 }
transitions = { high = [0, 1, 0], low = [0.92, 0, 0.08], off = [1, 0, 0] }

[targets]
mean_w = { value = 414.0, rel_tol = 0.05 }
max_w = { value = 461.0, max_factor = 1.02 }
max_ramp_w_per_s = { value = 350.0, rel_tol = 0.15 }
max_decline_w_per_s = { value = 320.0, rel_tol = 0.15 }
std_w = { value = 113.7 }
)";

// Smaller model on the second desktop card. Busy spans end either in a
// partial stall or in a full drop; recovery from idle passes through the
// partial level, so upward steps stay below downward ones.
constexpr std::string_view kNanoGpt = R"(name = "nanogpt_7900xtx_training"
dt_s = 1.0
duration_s = 21600.0
seed = 7900

[mix]
finetune = 1.0

[accelerators]
count = 1
peak_power_w = 355.0
idle_power_w = 20.0

[finetune]
base_power_w = 75.0
beta = 0.13333333333333333
utilization = 0.4225352112676056

[[finetune.schedule]]
start_s = 0.0
end_s = 21600.0
mode = "markov"
initial = "high"
dwell_s = { high = 20.0, low = 6.0, off = 4.0 }
transitions = { high = [0, 1, 1], low = [1, 0, 0], off = [0, 1, 0] }

[targets]
min_w = { value = 50.0 }
max_w = { value = 250.0 }
max_ramp_w_per_s = { value = 130.0, rel_tol = 0.15 }
max_decline_w_per_s = { value = 150.0, rel_tol = 0.15 }
)";

// GPT2-medium fine-tune timeline: start-up spike, setup at low draw, an
// erratic warm-up, a steadier decay phase, shutdown. Evaluation passes drop
// the card to near idle every 250 s.
constexpr std::string_view kFinetune = R"(name = "gpt2_medium_finetune"
dt_s = 1.0
duration_s = 3200.0
seed = 350

[mix]
finetune = 1.0

[accelerators]
count = 1
peak_power_w = 355.0
idle_power_w = 10.0

[finetune]
base_power_w = 10.0
beta = 0.75
utilization = 0.9014084507042254
eval_interval_s = 250.0
eval_dip_s = 10.0

[[finetune.schedule]]
start_s = 0.0
end_s = 30.0
mode = "high"

[[finetune.schedule]]
start_s = 30.0
end_s = 350.0
mode = "off"

[[finetune.schedule]]
start_s = 350.0
end_s = 1700.0
mode = "markov"
initial = "high"
dwell_s = { high = 25.0, low = 12.0, off = 1.0 }
transitions = { high = [0, 1, 0], low = [1, 0, 0], off = [1, 0, 0] }

[[finetune.schedule]]
start_s = 1700.0
end_s = 3100.0
mode = "markov"
initial = "high"
dwell_s = { high = 90.0, low = 10.0, off = 1.0 }
transitions = { high = [0, 1, 0], low = [1, 0, 0], off = [1, 0, 0] }

[[finetune.schedule]]
start_s = 3100.0
end_s = 3200.0
mode = "off"

[targets]
band_low_w = { value = 250.0 }
band_high_w = { value = 330.0 }
phase_boundaries_s = [350.0, 1700.0, 3100.0, 3200.0]
)";

// Desktop inference at 0.1 s: four request bursts of 25 to 50 s on an idle
// card. Each query holds about 1 W for 2 s.
constexpr std::string_view kInference = R"(name = "gpt2_inference"
dt_s = 0.1
duration_s = 3000.0
seed = 157

[mix]
inference = 1.0

[accelerators]
count = 1
peak_power_w = 355.0
idle_power_w = 20.0

[inference]
base_power_w = 20.0
query_duration_s = 2.0
rate_schedule = [
  { start_s = 0.0, rate_per_s = 0.0 },
  { start_s = 200.0, rate_per_s = 110.0 },
  { start_s = 240.0, rate_per_s = 0.0 },
  { start_s = 900.0, rate_per_s = 110.0 },
  { start_s = 925.0, rate_per_s = 0.0 },
  { start_s = 1600.0, rate_per_s = 110.0 },
  { start_s = 1650.0, rate_per_s = 0.0 },
  { start_s = 2400.0, rate_per_s = 110.0 },
  { start_s = 2435.0, rate_per_s = 0.0 },
]
size_weights = [0.5, 0.3, 0.2]
complexity_weights = [0.6, 0.4]
query_power_w = [[0.8, 1.0], [1.0, 1.2], [1.2, 1.5]]

[targets]
burst_peak_w = { value = 300.0, rel_tol = 0.10 }
burst_duration_s = [25.0, 50.0]
std_w = { value = 50.0 }
)";

// Eight-accelerator pre-training node for one day with a short warm-up and
// cool-down at idle. Sustained high utilization keeps peak/average near 1.
constexpr std::string_view kPretrain = R"(name = "pretrain_cluster"
dt_s = 1.0
duration_s = 86400.0
seed = 1

[mix]
train = 1.0

[accelerators]
count = 8
peak_power_w = 700.0
idle_power_w = 60.0

[training]
base_power_w = 1000.0
u_max = 0.98
t_start_s = 300.0
t_end_s = 86100.0

[facility]
eta_acac = 0.98
eta_acdc = 0.96
efficiency_mode = "multiply"
supporting = { chillers = 1800.0, pumps = 300.0, lighting = 100.0 }
it = { network = 250.0, storage = 400.0 }
cop = 4.0

[targets]
peak_average_ratio = { max = 1.15 }
)";

// Batch-size sweep, Mamba-2.8B against GPT-Neo-2.7B on a 24 GB card,
// alternating models at each batch size. Pulse power follows the memory
// share of the card; out-of-memory rows produce no pulse.
constexpr std::string_view kBatch = R"(name = "mamba_transformer_batch"
dt_s = 0.1
seed = 0

[batch_sweep]
idle_power_w = 20.0
peak_power_w = 355.0
device_memory_gb = 24.0
gap_s = 10.0

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 1
time_s = 16.86
memory_gb = 5.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 1
time_s = 44.15
memory_gb = 7.0

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 2
time_s = 17.60
memory_gb = 6.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 2
time_s = 44.43
memory_gb = 9.0

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 4
time_s = 18.23
memory_gb = 6.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 4
time_s = 52.07
memory_gb = 13.0

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 8
time_s = 19.50
memory_gb = 7.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 8
status = "oom"

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 16
time_s = 22.07
memory_gb = 9.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 16
status = "oom"

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 32
time_s = 26.27
memory_gb = 12.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 32
status = "oom"

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 64
time_s = 33.51
memory_gb = 18.0

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 64
status = "oom"

[[batch_sweep.runs]]
model = "mamba-2.8b"
batch_size = 128
status = "oom"

[[batch_sweep.runs]]
model = "gpt-neo-2.7b"
batch_size = 128
status = "oom"
)";

}  // namespace

const std::vector<Preset>& all() {
  static const std::vector<Preset> presets{
      {"bert_supercloud", "BERT job on a 160-GPU cluster, 4 days, 48.70/17.80/12.39 kW peak/mean/std", kBert},
      {"gpt2_4090_training", "GPT-2 124M training on one RTX 4090, 22 h, mean 414 W, max 461 W", kGpt2Training},
      {"nanogpt_7900xtx_training", "nanoGPT training on one RX 7900 XTX, 50-250 W band", kNanoGpt},
      {"gpt2_medium_finetune", "GPT2-medium fine-tune timeline, 3200 s, 250-330 W band", kFinetune},
      {"gpt2_inference", "LLM inference bursts of 25-50 s near 300 W at 0.1 s sampling", kInference},
      {"pretrain_cluster", "8-accelerator pre-training node at 98 % utilization for a day", kPretrain},
      {"mamba_transformer_batch", "Mamba-2.8B vs GPT-Neo-2.7B batch-size sweep with OOM rows", kBatch},
  };
  return presets;
}

const Preset& find(const std::string& name) {
  for (const Preset& p : all()) {
    if (p.name == name) return p;
  }
  throw ValidationError("unknown preset '" + name + "'");
}

scenario::ScenarioConfig load(const std::string& name) {
  return scenario::scenario_from_json(config::parse_toml(std::string(find(name).text)));
}

nlohmann::json targets(const std::string& name) {
  const auto tree = config::parse_toml(std::string(find(name).text));
  return tree.contains("targets") ? tree.at("targets") : nlohmann::json::object();
}

}  // namespace aigrid::presets
