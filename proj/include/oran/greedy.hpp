#pragma once

#include <utility>
#include <vector>

#include "oran/errors.hpp"
#include "oran/model.hpp"
#include "oran/solver.hpp"

namespace oran {

// Thrown when no vO-DU can take the demand without breaking (9a)-(9c).
class NoFeasibleVdu : public std::runtime_error {
 public:
  explicit NoFeasibleVdu(int user)
      : std::runtime_error("greedy: no feasible vO-DU for user " + std::to_string(user)),
        user_(user) {}
  int user() const { return user_; }

 private:
  int user_;
};

struct GreedyStep {
  int user = -1;
  int chosen_vdu = -1;
  double marginal_power_w = 0.0;
  int feasible_count = 0;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  std::vector<int> rejected_users;  // users no vO-DU could take
};

// Chooses, among the vO-DUs that keep (9a)-(9c) satisfied after adding the
// user, the one with the smallest pool-power increase; ties go to the lowest
// index. The current state is the partial assignment built so far.
// Throws NoFeasibleVdu when every vO-DU fails.
int greedy_assign(const PoolModel& model, const std::vector<Demand>& demands,
                  const Assignment& current, int user, GreedyStep* step = nullptr);

// Folds greedy_assign over the arrival order. Rejected users stay unassigned
// and are recorded in the trace.
std::pair<Assignment, GreedyTrace> greedy_solve(const Instance& instance,
                                                const std::vector<int>& arrival_order);

}  // namespace oran
