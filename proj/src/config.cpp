#include "oran/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "oran/errors.hpp"

namespace oran {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(std::string("config: missing or non-numeric key '") + key + "'");
  return j.at(key).get<double>();
}

std::pair<double, double> range_from(const json& j, const char* key, double def_lo,
                                     double def_hi) {
  if (!j.contains(key)) return {def_lo, def_hi};
  const auto& r = j.at(key);
  if (!r.is_array() || r.size() != 2)
    throw ConfigError(std::string("config: '") + key + "' must be a [min, max] pair");
  return {r[0].get<double>(), r[1].get<double>()};
}

}  // namespace

PoolModel pool_from_json(const json& j) {
  PoolModel pool;
  pool.m_count = static_cast<int>(require_number(j, "m_count"));
  if (j.contains("z_max_per_vdu")) {
    pool.z_max = j.at("z_max_per_vdu").get<std::vector<double>>();
  } else {
    pool.z_max.assign(static_cast<size_t>(std::max(pool.m_count, 0)),
                      require_number(j, "z_max"));
  }
  pool.cpu_freq_hz = require_number(j, "cpu_freq_hz");
  pool.p_idle_w = require_number(j, "p_idle_w");
  pool.p_full_w = require_number(j, "p_full_w");
  pool.cycles_per_packet = require_number(j, "cycles_per_packet");
  pool.o_ru_count = static_cast<int>(require_number(j, "o_ru_count"));
  pool.propagation_speed_mps = require_number(j, "propagation_speed_mps");
  pool.latency_threshold_s = require_number(j, "latency_threshold_s");

  if (j.contains("distances_m")) {
    pool.distances_m = j.at("distances_m").get<std::vector<std::vector<double>>>();
  } else {
    // co-located pool at the head of a line of O-RUs
    double base = j.value("base_distance_m", 300.0);
    double spacing = j.value("o_ru_spacing_m", 150.0);
    pool.distances_m.resize(static_cast<size_t>(std::max(pool.o_ru_count, 0)));
    for (int n = 0; n < pool.o_ru_count; ++n)
      pool.distances_m[static_cast<size_t>(n)].assign(
          static_cast<size_t>(std::max(pool.m_count, 0)), base + spacing * n);
  }
  pool.validate();
  return pool;
}

SyntheticConfig synthetic_from_json(const json& j, int o_ru_count) {
  SyntheticConfig cfg;
  cfg.w_count = static_cast<int>(require_number(j, "w_count"));
  cfg.v_count = static_cast<int>(require_number(j, "v_count"));
  std::tie(cfg.vsc_cpu_min, cfg.vsc_cpu_max) = range_from(j, "vsc_cpu_range", 1.0, 1.0);
  std::tie(cfg.tol_cpu_min, cfg.tol_cpu_max) = range_from(j, "tol_cpu_range", 1.0, 1.0);
  cfg.mu_pps = j.value("mu_pps", 500.0);
  cfg.lambda_capture_pps = j.value("lambda_capture_pps", cfg.mu_pps * 0.8);
  std::tie(cfg.lambda_min_pps, cfg.lambda_max_pps) =
      range_from(j, "lambda_range_pps", 50.0, 150.0);
  std::tie(cfg.beta_min_cycles, cfg.beta_max_cycles) =
      range_from(j, "beta_range_cycles", 1.0e6, 1.0e6);
  cfg.o_ru_count = o_ru_count;
  cfg.seed = j.value("seed", uint64_t{7});
  cfg.validate();
  return cfg;
}

MdpConfig mdp_from_json(const json& j) {
  MdpConfig cfg;
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.windows_per_episode = j.value("windows_per_episode", cfg.windows_per_episode);
  cfg.arrival_shuffle = j.value("arrival_shuffle", cfg.arrival_shuffle);
  cfg.infeasible_penalty = j.value("infeasible_penalty", cfg.infeasible_penalty);
  cfg.expose_pending = j.value("expose_pending", cfg.expose_pending);
  cfg.validate();
  return cfg;
}

PpoConfig ppo_from_json(const json& j) {
  PpoConfig cfg;
  cfg.clip_epsilon = j.value("clip_epsilon", cfg.clip_epsilon);
  cfg.gae_lambda = j.value("gae_lambda", cfg.gae_lambda);
  cfg.rollout_steps = j.value("rollout_steps", cfg.rollout_steps);
  cfg.epochs_per_batch = j.value("epochs_per_batch", cfg.epochs_per_batch);
  cfg.minibatch_size = j.value("minibatch_size", cfg.minibatch_size);
  cfg.entropy_coeff = j.value("entropy_coeff", cfg.entropy_coeff);
  cfg.value_coeff = j.value("value_coeff", cfg.value_coeff);
  cfg.actor_lr = j.value("actor_lr", cfg.actor_lr);
  cfg.critic_lr = j.value("critic_lr", cfg.critic_lr);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.hidden_widths = j.value("hidden_widths", cfg.hidden_widths);
  cfg.validate();
  return cfg;
}

AcerConfig acer_from_json(const json& j) {
  AcerConfig cfg;
  cfg.replay_capacity = j.value("replay_capacity", cfg.replay_capacity);
  cfg.replay_ratio = j.value("replay_ratio", cfg.replay_ratio);
  cfg.replay_start = j.value("replay_start", cfg.replay_start);
  cfg.truncation_clip = j.value("truncation_clip", cfg.truncation_clip);
  cfg.trace_lambda = j.value("trace_lambda", cfg.trace_lambda);
  cfg.entropy_coeff = j.value("entropy_coeff", cfg.entropy_coeff);
  cfg.value_coeff = j.value("value_coeff", cfg.value_coeff);
  cfg.actor_lr = j.value("actor_lr", cfg.actor_lr);
  cfg.critic_lr = j.value("critic_lr", cfg.critic_lr);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.segment_length = j.value("segment_length", cfg.segment_length);
  cfg.segments_per_update = j.value("segments_per_update", cfg.segments_per_update);
  cfg.hidden_widths = j.value("hidden_widths", cfg.hidden_widths);
  cfg.trust_region = j.value("trust_region", cfg.trust_region);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  pool.validate();
  if (algos.empty()) throw ConfigError("config: at least one algo required");
  for (const auto& a : algos)
    if (a != "ppo" && a != "acer" && a != "greedy" && a != "exact")
      throw ConfigError("config: unknown algo '" + a + "'");
  if (seeds.empty()) throw ConfigError("config: at least one seed required");
  if (budget_steps < 1) throw ConfigError("config: budget_steps must be >= 1");
  if (budget_wall_clock_s < 0.0)
    throw ConfigError("config: budget_wall_clock_s must be >= 0");
  if (step_log_every < 1) throw ConfigError("config: step_log_every must be >= 1");
  for (double level : load_levels)
    if (!(level > 0.0 && level <= 1.0))
      throw ConfigError("config: load levels must be in (0, 1]");
  for (int w : hidden_width_sweep)
    if (w < 1) throw ConfigError("config: sweep widths must be >= 1");
}

std::vector<Demand> ExperimentConfig::make_demands() const {
  if (workload.source == WorkloadSpec::Source::Synthetic)
    return generate_synthetic(workload.synthetic);
  return to_demands(parse_trace(workload.trace_path));
}

Instance ExperimentConfig::make_instance() const {
  Instance instance;
  instance.model = pool;
  instance.demands = make_demands();
  instance.window_count = mdp.windows_per_episode;
  instance.validate();
  return instance;
}

std::vector<int> ExperimentConfig::active_users_at(const std::vector<Demand>& demands,
                                                   double load_level) const {
  if (!(load_level > 0.0 && load_level <= 1.0))
    throw ConfigError("config: load level must be in (0, 1]");
  std::vector<int> vsc, tol;
  for (size_t i = 0; i < demands.size(); ++i)
    (demands[i].is_vsc() ? vsc : tol).push_back(static_cast<int>(i));
  size_t take_w = static_cast<size_t>(std::lround(static_cast<double>(vsc.size()) * load_level));
  size_t take_v = static_cast<size_t>(std::lround(static_cast<double>(tol.size()) * load_level));
  std::vector<int> active;
  for (size_t i = 0; i < std::min(take_w, vsc.size()); ++i) active.push_back(vsc[i]);
  for (size_t i = 0; i < std::min(take_v, tol.size()); ++i) active.push_back(tol[i]);
  if (active.empty() && !demands.empty()) active.push_back(0);
  std::sort(active.begin(), active.end());
  return active;
}

ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("pool")) throw ConfigError("config: missing 'pool' section");
  cfg.pool = pool_from_json(j.at("pool"));

  if (!j.contains("workload")) throw ConfigError("config: missing 'workload' section");
  const auto& w = j.at("workload");
  std::string source = w.value("source", "synthetic");
  if (source == "synthetic") {
    cfg.workload.source = WorkloadSpec::Source::Synthetic;
    cfg.workload.synthetic = synthetic_from_json(w, cfg.pool.o_ru_count);
  } else if (source == "trace") {
    cfg.workload.source = WorkloadSpec::Source::Trace;
    if (!w.contains("trace_path")) throw ConfigError("config: trace workload needs 'trace_path'");
    cfg.workload.trace_path = w.at("trace_path").get<std::string>();
  } else {
    throw ConfigError("config: workload source must be 'synthetic' or 'trace'");
  }

  cfg.algos = j.value("algos", std::vector<std::string>{"ppo", "acer", "greedy", "exact"});
  cfg.seeds = j.value("seeds", std::vector<uint64_t>{1});
  cfg.budget_steps = j.value("budget_steps", cfg.budget_steps);
  cfg.budget_wall_clock_s = j.value("budget_wall_clock_s", cfg.budget_wall_clock_s);
  cfg.hidden_width_sweep = j.value("hidden_width_sweep", cfg.hidden_width_sweep);
  cfg.load_levels = j.value("load_levels", cfg.load_levels);
  cfg.out_dir = j.value("out_dir", std::string("out"));
  cfg.mdp = mdp_from_json(j.value("mdp", json::object()));
  cfg.ppo = ppo_from_json(j.value("ppo", json::object()));
  cfg.acer = acer_from_json(j.value("acer", json::object()));
  cfg.step_log_every = j.value("step_log_every", cfg.step_log_every);
  cfg.solver_node_budget = j.value("solver_node_budget", cfg.solver_node_budget);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return experiment_from_json(j);
}

}  // namespace oran
