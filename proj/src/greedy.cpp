#include "oran/greedy.hpp"

#include <algorithm>
#include <limits>

namespace oran {

int greedy_assign(const PoolModel& model, const std::vector<Demand>& demands,
                  const Assignment& current, int user, GreedyStep* step) {
  if (user < 0 || user >= static_cast<int>(demands.size()))
    throw DomainError("greedy_assign: user index out of range");
  if (current[static_cast<size_t>(user)] != -1)
    throw DomainError("greedy_assign: user already assigned");

  double before = pool_power_partial_w(model, demands, current);
  int best_m = -1;
  double best_marginal = std::numeric_limits<double>::infinity();
  int feasible = 0;

  Assignment candidate = current;
  for (int m = 0; m < model.m_count; ++m) {
    candidate[static_cast<size_t>(user)] = m;
    if (!check_constraints(model, demands, candidate).ok()) continue;
    ++feasible;
    double marginal = pool_power_partial_w(model, demands, candidate) - before;
    if (marginal < best_marginal) {
      best_marginal = marginal;
      best_m = m;
    }
  }
  if (best_m < 0) throw NoFeasibleVdu(user);
  if (step) {
    step->user = user;
    step->chosen_vdu = best_m;
    step->marginal_power_w = best_marginal;
    step->feasible_count = feasible;
  }
  return best_m;
}

std::pair<Assignment, GreedyTrace> greedy_solve(const Instance& instance,
                                                const std::vector<int>& arrival_order) {
  const auto& demands = instance.demands;
  if (arrival_order.size() != demands.size())
    throw DomainError("greedy_solve: arrival_order is not a permutation of the demand list");
  std::vector<bool> seen(demands.size(), false);
  for (int u : arrival_order) {
    if (u < 0 || u >= static_cast<int>(demands.size()) || seen[static_cast<size_t>(u)])
      throw DomainError("greedy_solve: arrival_order is not a permutation of the demand list");
    seen[static_cast<size_t>(u)] = true;
  }

  Assignment assignment(demands.size());
  GreedyTrace trace;
  for (int user : arrival_order) {
    GreedyStep step;
    try {
      int m = greedy_assign(instance.model, demands, assignment, user, &step);
      assignment[static_cast<size_t>(user)] = m;
      trace.steps.push_back(step);
    } catch (const NoFeasibleVdu&) {
      trace.rejected_users.push_back(user);
    }
  }
  return {assignment, trace};
}

}  // namespace oran
