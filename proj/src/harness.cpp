#include "oran/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include "oran/agents.hpp"
#include "oran/checkpoint.hpp"
#include "oran/greedy.hpp"

namespace oran {

namespace fs = std::filesystem;

namespace {

constexpr uint64_t kEnvSeedStream = 0xE57;

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string level_label(double level) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "L%g", level);
  return buf;
}

double elapsed_s(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// energy and mean VSC latency of a (possibly partial) assignment
std::pair<double, double> assignment_energy_latency(const PoolModel& model,
                                                    const std::vector<Demand>& demands,
                                                    const Assignment& assignment) {
  double energy = pool_power_partial_w(model, demands, assignment);
  double latency_sum = 0.0;
  int count = 0;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (!demands[i].is_vsc() || assignment[i] < 0) continue;
    latency_sum += delay_breakdown(model, demands, assignment, static_cast<int>(i)).total_s;
    ++count;
  }
  return {energy, count > 0 ? latency_sum / count : 0.0};
}

// the episode return this assignment would earn when its users are placed
// one arrival at a time; comparable to the DRL rows' episode_return
double assignment_return(const PoolModel& model, const std::vector<Demand>& demands,
                         const Assignment& assignment, double alpha) {
  Assignment partial(demands.size());
  double total = 0.0;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (assignment[i] < 0) continue;
    partial[i] = assignment[i];
    total += -alpha * pool_power_partial_w(model, demands, partial);
  }
  return total;
}

nlohmann::json fingerprint_json(const std::string& algo, uint64_t seed, int obs_dim,
                                int action_count, const std::vector<int>& hidden_widths) {
  return nlohmann::json{{"algo", algo},
                        {"seed", seed},
                        {"obs_dim", obs_dim},
                        {"action_count", action_count},
                        {"hidden_widths", hidden_widths}};
}

fs::path actor_checkpoint_path(const ExperimentConfig& config, const std::string& algo,
                               uint64_t seed) {
  return config.out_dir / "checkpoints" / (algo + "_s" + std::to_string(seed) + "_actor.json");
}

fs::path critic_checkpoint_path(const ExperimentConfig& config, const std::string& algo,
                                uint64_t seed) {
  return config.out_dir / "checkpoints" / (algo + "_s" + std::to_string(seed) + "_critic.json");
}

template <typename TrainerT, typename AgentCfg>
void train_one(const ExperimentConfig& config, const AgentCfg& agent_cfg,
               const std::string& algo, uint64_t seed, const std::string& run_id,
               const fs::path& curves_dir, bool save_checkpoints) {
  Instance instance = config.make_instance();
  SliceEnv env(instance, config.mdp);
  env.reset(mix_seed(seed, kEnvSeedStream));

  MetricsWriter episodes(curves_dir / (run_id + "_episodes.csv"));
  MetricsWriter steps(curves_dir / (run_id + "_steps.csv"));

  TrainerT trainer(env.observation_size(), env.action_count(), agent_cfg, seed);

  long episode_now = 0;
  double reward_acc = 0.0, power_acc = 0.0;
  long viol_acc = 0, since = 0;
  auto on_step = [&](const Transition& t, SliceEnv& e) {
    reward_acc += t.reward;
    power_acc += e.pool_power_now_w();
    if (t.action < 0) ++viol_acc;
    if (++since == config.step_log_every) {
      steps.write(MetricsRow{run_id, algo, seed, episode_now, trainer.total_steps(),
                             reward_acc / static_cast<double>(since),
                             power_acc / static_cast<double>(since), 0.0, viol_acc, 0.0});
      reward_acc = power_acc = 0.0;
      viol_acc = since = 0;
    }
  };
  auto on_episode = [&](const EpisodeLog& log) {
    episode_now = log.episode;
    episodes.write(MetricsRow{run_id, algo, seed, log.episode, log.step, log.episode_return,
                              log.energy_w, log.mean_latency_s, log.violations, 0.0});
  };

  // optional wall-clock safety cap; step budgets alone keep runs reproducible
  StopPredicate stop;
  if (config.budget_wall_clock_s > 0.0) {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration<double>(config.budget_wall_clock_s);
    stop = [deadline]() { return std::chrono::steady_clock::now() >= deadline; };
  }
  trainer.train(env, config.budget_steps, on_episode, stop, on_step);

  if (save_checkpoints) {
    fs::create_directories(config.out_dir / "checkpoints");
    auto fp = fingerprint_json(algo, seed, env.observation_size(), env.action_count(),
                               agent_cfg.hidden_widths);
    save_checkpoint(actor_checkpoint_path(config, algo, seed), trainer.actor(),
                    trainer.actor_opt(), fp);
    save_checkpoint(critic_checkpoint_path(config, algo, seed), trainer.critic(),
                    trainer.critic_opt(), fp);
  }
}

void dispatch_training(const ExperimentConfig& config, const std::string& algo, uint64_t seed,
                       const std::string& run_id, const fs::path& curves_dir,
                       bool save_checkpoints, const std::vector<int>* width_override) {
  if (algo == "ppo") {
    PpoConfig agent_cfg = config.ppo;
    if (width_override) agent_cfg.hidden_widths = *width_override;
    train_one<PpoTrainer>(config, agent_cfg, algo, seed, run_id, curves_dir, save_checkpoints);
  } else {
    AcerConfig agent_cfg = config.acer;
    if (width_override) agent_cfg.hidden_widths = *width_override;
    train_one<AcerTrainer>(config, agent_cfg, algo, seed, run_id, curves_dir, save_checkpoints);
  }
}

}  // namespace

bool Manifest::all_ok() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const RunRecord& r) { return r.status == "ok"; });
}

void Manifest::write(const fs::path& path) const {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest " + path.string());
  out << "command,run_id,algo,seed,sweep_point,status,metrics_file,detail\n";
  for (const auto& r : runs)
    out << r.command << ',' << r.run_id << ',' << r.algo << ',' << r.seed << ','
        << r.sweep_point << ',' << r.status << ',' << r.metrics_file << ','
        << sanitize(r.detail) << "\n";
}

Manifest run_training(const ExperimentConfig& config) {
  config.validate();
  Manifest manifest;
  for (const auto& algo : config.algos) {
    if (algo != "ppo" && algo != "acer") continue;
    for (uint64_t seed : config.seeds) {
      std::string run_id = algo + "_s" + std::to_string(seed);
      RunRecord record{"train", run_id, algo, seed, "-", "ok",
                       "train/" + run_id + "_episodes.csv", ""};
      auto start = std::chrono::steady_clock::now();
      try {
        dispatch_training(config, algo, seed, run_id, config.out_dir / "train", true, nullptr);
      } catch (const NumericError& e) {
        record.status = "failed";
        record.detail = e.what();
      }
      std::printf("[train] %s: %s (%.2f s)\n", run_id.c_str(), record.status.c_str(),
                  elapsed_s(start));
      manifest.runs.push_back(std::move(record));
    }
  }
  manifest.write(config.out_dir / "manifest.csv");
  return manifest;
}

Manifest run_arch_sweep(const ExperimentConfig& config) {
  config.validate();
  Manifest manifest;
  for (const auto& algo : config.algos) {
    if (algo != "ppo" && algo != "acer") continue;
    for (int width : config.hidden_width_sweep) {
      std::vector<int> widths = {width, width};
      for (uint64_t seed : config.seeds) {
        std::string run_id = algo + "_w" + std::to_string(width) + "_s" + std::to_string(seed);
        RunRecord record{"sweep", run_id, algo, seed, "w" + std::to_string(width), "ok",
                         "sweep/" + run_id + "_episodes.csv", ""};
        auto start = std::chrono::steady_clock::now();
        try {
          dispatch_training(config, algo, seed, run_id, config.out_dir / "sweep", false,
                            &widths);
        } catch (const NumericError& e) {
          record.status = "failed";
          record.detail = e.what();
        }
        std::printf("[sweep] %s: %s (%.2f s)\n", run_id.c_str(), record.status.c_str(),
                    elapsed_s(start));
        manifest.runs.push_back(std::move(record));
      }
    }
  }
  manifest.write(config.out_dir / "manifest.csv");
  return manifest;
}

Manifest run_eval_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<Demand> demands = config.make_demands();

  // every DRL checkpoint must exist before any work starts
  for (const auto& algo : config.algos) {
    if (algo != "ppo" && algo != "acer") continue;
    for (uint64_t seed : config.seeds) {
      fs::path path = actor_checkpoint_path(config, algo, seed);
      if (!fs::exists(path))
        throw ConfigError("eval: missing checkpoint for algo '" + algo + "' (expected " +
                          path.string() + "); run training first");
    }
  }

  MetricsWriter eval_writer(config.out_dir / "eval" / "eval.csv");
  Manifest manifest;

  for (double level : config.load_levels) {
    std::vector<int> active = config.active_users_at(demands, level);
    std::vector<Demand> sub_demands;
    sub_demands.reserve(active.size());
    for (int u : active) sub_demands.push_back(demands[static_cast<size_t>(u)]);
    Instance sub_instance{config.pool, sub_demands, config.mdp.windows_per_episode};
    std::string label = level_label(level);

    for (const auto& algo : config.algos) {
      if (algo == "greedy") {
        std::string run_id = "eval_" + label + "_greedy";
        RunRecord record{"eval", run_id, algo, 0, label, "ok",
                         "eval/eval.csv", ""};
        std::vector<int> identity(sub_demands.size());
        std::iota(identity.begin(), identity.end(), 0);
        auto [assignment, trace] = greedy_solve(sub_instance, identity);
        auto [energy, latency] =
            assignment_energy_latency(config.pool, sub_demands, assignment);
        double ret = assignment_return(config.pool, sub_demands, assignment, config.mdp.alpha);
        eval_writer.write(MetricsRow{run_id, algo, 0, -1, 0, ret, energy, latency,
                                     static_cast<long>(trace.rejected_users.size()), 0.0});
        manifest.runs.push_back(std::move(record));
      } else if (algo == "exact") {
        std::string run_id = "eval_" + label + "_exact";
        RunRecord record{"eval", run_id, algo, 0, label, "ok",
                         "eval/eval.csv", ""};
        try {
          SolveResult result = solve_exact(sub_instance, config.solver_node_budget);
          if (result.status == SolveStatus::Optimal) {
            auto [energy, latency] =
                assignment_energy_latency(config.pool, sub_demands, result.assignment);
            double ret =
                assignment_return(config.pool, sub_demands, result.assignment, config.mdp.alpha);
            eval_writer.write(MetricsRow{run_id, algo, 0, -1, 0, ret, energy, latency, 0, 0.0});
          } else {
            record.status = "failed";
            record.detail = "instance infeasible";
          }
        } catch (const BudgetExhausted& e) {
          record.status = "failed";
          record.detail = e.what();
        }
        manifest.runs.push_back(std::move(record));
      } else {  // ppo or acer
        for (uint64_t seed : config.seeds) {
          std::string run_id = "eval_" + label + "_" + algo + "_s" + std::to_string(seed);
          RunRecord record{"eval", run_id, algo, seed, label, "ok",
                           "eval/eval.csv", ""};
          LoadedCheckpoint checkpoint =
              load_checkpoint(actor_checkpoint_path(config, algo, seed));
          Instance full_instance{config.pool, demands, config.mdp.windows_per_episode};
          SliceEnv env(full_instance, config.mdp, active);
          if (checkpoint.net.input_size() != env.observation_size())
            throw ConfigError("eval: checkpoint for '" + algo +
                              "' does not match the scenario's observation size");
          EvalResult result =
              run_argmax_episode(env, checkpoint.net, mix_seed(seed, kEnvSeedStream));
          eval_writer.write(MetricsRow{run_id, algo, seed, -1, 0, result.episode_return,
                                       result.energy_w, result.mean_latency_s,
                                       result.violations, 0.0});
          manifest.runs.push_back(std::move(record));
        }
      }
    }
  }
  manifest.write(config.out_dir / "manifest.csv");
  return manifest;
}

void write_tradeoff_report(const std::vector<fs::path>& eval_files, const fs::path& out_file) {
  std::vector<MetricsRow> rows;
  for (const auto& file : eval_files) {
    auto part = read_metrics(file);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw ConfigError("tradeoff report: empty input set");

  // (algo, level label) -> accumulated energy/latency
  struct Acc {
    double energy = 0.0, latency = 0.0;
    int count = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& row : rows) {
    // run_id layout: eval_<Llevel>_<algo>[_s<seed>]
    std::string id = row.run_id;
    if (id.rfind("eval_", 0) != 0) continue;
    size_t level_end = id.find('_', 5);
    if (level_end == std::string::npos) continue;
    std::string level = id.substr(5, level_end - 5);
    Acc& acc = groups[{row.algo, level}];
    acc.energy += row.energy_w;
    acc.latency += row.mean_latency_s;
    ++acc.count;
  }
  if (groups.empty()) throw ConfigError("tradeoff report: no eval rows found");

  struct Entry {
    std::string algo, level;
    double energy, latency;
    int energy_rank = 0, latency_rank = 0;
  };
  std::vector<Entry> entries;
  for (const auto& [key, acc] : groups)
    entries.push_back(Entry{key.first, key.second, acc.energy / acc.count,
                            acc.latency / acc.count});

  auto rank_by = [&](auto member, auto setter) {
    std::vector<size_t> idx(entries.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return entries[a].*member < entries[b].*member;
    });
    for (size_t r = 0; r < idx.size(); ++r) entries[idx[r]].*setter = static_cast<int>(r) + 1;
  };
  rank_by(&Entry::energy, &Entry::energy_rank);
  rank_by(&Entry::latency, &Entry::latency_rank);

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.level, a.algo) < std::tie(b.level, b.algo);
  });

  fs::create_directories(out_file.parent_path());
  std::ofstream out(out_file);
  if (!out) throw ConfigError("cannot write tradeoff report " + out_file.string());
  out << "algo,load_level,energy_w,mean_latency_s,energy_rank,latency_rank\n";
  char buf[96];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", e.energy, e.latency);
    out << e.algo << ',' << e.level << ',' << buf << ',' << e.energy_rank << ','
        << e.latency_rank << "\n";
  }
}

Manifest run_tradeoff_report(const ExperimentConfig& config) {
  write_tradeoff_report({config.out_dir / "eval" / "eval.csv"},
                        config.out_dir / "report" / "tradeoff.csv");
  Manifest manifest;
  manifest.runs.push_back(RunRecord{"report", "tradeoff", "-", 0, "-", "ok",
                                    "report/tradeoff.csv", ""});
  manifest.write(config.out_dir / "manifest.csv");
  return manifest;
}

SolveResult run_solve(const ExperimentConfig& config) {
  config.validate();
  Instance instance = config.make_instance();
  SolveResult result = solve_exact(instance, config.solver_node_budget);

  MetricsWriter writer(config.out_dir / "solve" / "solve.csv");
  if (result.status == SolveStatus::Optimal) {
    auto [energy, latency] =
        assignment_energy_latency(config.pool, instance.demands, result.assignment);
    double ret =
        assignment_return(config.pool, instance.demands, result.assignment, config.mdp.alpha);
    writer.write(MetricsRow{"solve_exact", "exact", 0, -1, 0, ret, energy, latency, 0, 0.0});
  }
  return result;
}

}  // namespace oran
