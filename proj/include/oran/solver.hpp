#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oran/errors.hpp"
#include "oran/model.hpp"

namespace oran {

// One single-window assignment problem. Traffic is stationary inside a
// window, so the T-window objective is window_count times the single-window
// optimum; solvers work on one window and callers scale.
struct Instance {
  PoolModel model;
  std::vector<Demand> demands;
  int window_count = 1;

  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Assignment assignment;
  double objective_w = 0.0;  // single-window pool power of the assignment
  long nodes_explored = 0;
  double wall_time_s = 0.0;
};

// Thrown when a search or enumeration budget runs out before optimality is
// proven; carries the best complete feasible assignment found so far, if any.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::string what, std::optional<SolveResult> incumbent)
      : std::runtime_error(std::move(what)), incumbent_(std::move(incumbent)) {}
  const std::optional<SolveResult>& incumbent() const { return incumbent_; }

 private:
  std::optional<SolveResult> incumbent_;
};

// Depth-first branch-and-bound over user->vO-DU assignments. Users are
// branched in descending CPU demand; children in ascending vO-DU index with
// interchangeable empty vO-DUs collapsed. Deterministic; ties resolved by
// the first (lowest-index) branch found.
SolveResult solve_exact(const Instance& instance, long node_budget = 50'000'000);

// Full enumeration of every complete assignment, filtered by
// check_constraints. The testing oracle for solve_exact.
SolveResult brute_force_oracle(const Instance& instance, uint64_t enumeration_bound = 1'000'000);

// Admissible completion bound for a partial assignment: power of the current
// loads plus, per unassigned user, the smallest power increase any vO-DU
// could ever charge for it given how much load the other pending users could
// still add.
double lower_bound(const PoolModel& model, const Assignment& partial,
                   const std::vector<Demand>& demands);

}  // namespace oran
