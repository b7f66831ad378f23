// oranlab: experiment driver for the vO-DU pool allocation lab.
//
// Subcommands: train, sweep, eval, report, solve. Every run is deterministic
// given the config file and seed list; exit code 0 iff no run failed.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oran/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<uint64_t> seeds;
  std::vector<std::string> algos;
  std::string out_dir;
  long budget_steps = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seeds, "seed list override");
  cmd->add_option("--algo", opts.algos, "algo list override (ppo acer greedy exact)");
  cmd->add_option("--out", opts.out_dir, "output directory override");
  cmd->add_option("--budget-steps", opts.budget_steps, "training budget override (env steps)");
}

oran::ExperimentConfig load(const CommonOpts& opts) {
  oran::ExperimentConfig cfg = oran::load_experiment_config(opts.config_path);
  if (!opts.seeds.empty()) cfg.seeds = opts.seeds;
  if (!opts.algos.empty()) cfg.algos = opts.algos;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.budget_steps > 0) cfg.budget_steps = opts.budget_steps;
  cfg.validate();
  return cfg;
}

int finish(const oran::Manifest& manifest) {
  int failed = 0;
  for (const auto& r : manifest.runs)
    if (r.status != "ok") ++failed;
  if (failed > 0) {
    std::fprintf(stderr, "%d run(s) failed; see manifest.csv\n", failed);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vO-DU pool energy-aware allocation lab"};
  app.require_subcommand(1);

  CommonOpts train_opts, sweep_opts, eval_opts, report_opts, solve_opts;
  auto* train = app.add_subcommand("train", "train PPO/ACER and emit reward curves");
  add_common(train, train_opts);
  auto* sweep = app.add_subcommand("sweep", "architecture sweep over hidden widths");
  add_common(sweep, sweep_opts);
  auto* eval = app.add_subcommand("eval", "evaluate algos across load levels");
  add_common(eval, eval_opts);
  auto* report = app.add_subcommand("report", "energy/latency trade-off table");
  add_common(report, report_opts);
  auto* solve = app.add_subcommand("solve", "exact single-window solve of the scenario");
  add_common(solve, solve_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return finish(oran::run_training(load(train_opts)));
    if (sweep->parsed()) return finish(oran::run_arch_sweep(load(sweep_opts)));
    if (eval->parsed()) return finish(oran::run_eval_sweep(load(eval_opts)));
    if (report->parsed()) return finish(oran::run_tradeoff_report(load(report_opts)));
    if (solve->parsed()) {
      oran::ExperimentConfig cfg = load(solve_opts);
      oran::SolveResult result = oran::run_solve(cfg);
      if (result.status == oran::SolveStatus::Optimal) {
        std::printf("status: optimal\n");
        std::printf("single-window power: %.6f W\n", result.objective_w);
        std::printf("objective over %d window(s): %.6f\n", cfg.mdp.windows_per_episode,
                    result.objective_w * cfg.mdp.windows_per_episode);
        std::printf("nodes explored: %ld\n", result.nodes_explored);
        std::printf("assignment:");
        for (int m : result.assignment.user_to_vdu) std::printf(" %d", m);
        std::printf("\n");
      } else {
        std::printf("status: infeasible\n");
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
