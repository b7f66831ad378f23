#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oran/config.hpp"
#include "oran/metrics.hpp"
#include "oran/solver.hpp"

namespace oran {

struct RunRecord {
  std::string command;
  std::string run_id;
  std::string algo;
  uint64_t seed = 0;
  std::string sweep_point;  // "w64", "L0.5", or "-"
  std::string status;       // "ok" or "failed"
  std::string metrics_file;  // relative to the experiment's out_dir
  std::string detail;
};

struct Manifest {
  std::vector<RunRecord> runs;

  bool all_ok() const;
  void write(const std::filesystem::path& path) const;
};

// Trains PPO/ACER per seed, emitting per-episode and per-step reward curves
// and final checkpoints. A numeric failure marks that run failed and the
// remaining runs proceed.
Manifest run_training(const ExperimentConfig& config);

// Re-trains both agents at each hidden width in config.hidden_width_sweep,
// emitting one reward curve per (agent, width, seed).
Manifest run_arch_sweep(const ExperimentConfig& config);

// Greedy, exact, and argmax-policy evaluation per load level; DRL rows need
// the checkpoints produced by run_training. Throws ConfigError naming the
// algorithm whose checkpoint is missing.
Manifest run_eval_sweep(const ExperimentConfig& config);

// Energy/latency pairs per (algo, load level) aggregated over seeds, with a
// rank ordering along each axis. Throws ConfigError on an empty input set.
void write_tradeoff_report(const std::vector<std::filesystem::path>& eval_files,
                           const std::filesystem::path& out_file);
Manifest run_tradeoff_report(const ExperimentConfig& config);

// Exact solve of the configured scenario; emits one metrics row.
SolveResult run_solve(const ExperimentConfig& config);

}  // namespace oran
