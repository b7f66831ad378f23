#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oran/agents.hpp"
#include "oran/env.hpp"
#include "oran/solver.hpp"
#include "oran/workload.hpp"

#include "json.hpp"

namespace oran {

struct WorkloadSpec {
  enum class Source { Synthetic, Trace };
  Source source = Source::Synthetic;
  SyntheticConfig synthetic;
  std::filesystem::path trace_path;
};

struct ExperimentConfig {
  PoolModel pool;
  WorkloadSpec workload;
  std::vector<std::string> algos;  // subset of {ppo, acer, greedy, exact}
  std::vector<uint64_t> seeds;
  long budget_steps = 20'000;
  double budget_wall_clock_s = 0.0;  // optional safety cap; 0 disables it
  std::vector<int> hidden_width_sweep = {16, 64, 256};
  std::vector<double> load_levels = {0.25, 0.5, 0.75, 1.0};
  std::filesystem::path out_dir = "out";
  MdpConfig mdp;
  PpoConfig ppo;
  AcerConfig acer;
  long step_log_every = 512;
  long solver_node_budget = 50'000'000;

  void validate() const;

  std::vector<Demand> make_demands() const;
  Instance make_instance() const;

  // The users participating at a load level: the first round(count * level)
  // of each kind, at least one user overall. Levels must be in (0, 1].
  std::vector<int> active_users_at(const std::vector<Demand>& demands, double load_level) const;
};

PoolModel pool_from_json(const nlohmann::json& j);
SyntheticConfig synthetic_from_json(const nlohmann::json& j, int o_ru_count);
MdpConfig mdp_from_json(const nlohmann::json& j);
PpoConfig ppo_from_json(const nlohmann::json& j);
AcerConfig acer_from_json(const nlohmann::json& j);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace oran
