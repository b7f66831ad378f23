#pragma once

#include <cstdint>
#include <vector>

#include "oran/model.hpp"
#include "oran/solver.hpp"

namespace oran {

struct MdpConfig {
  double gamma = 0.99;
  double alpha = 0.0001;             // reward weight on pool power
  int windows_per_episode = 1;       // T
  bool arrival_shuffle = false;
  double infeasible_penalty = -1.0;  // reward when every action is masked
  bool expose_pending = false;       // append the pending user's demand to s(t)

  void validate() const;
};

using Observation = std::vector<double>;

// One MDP step. behavior_probs is the masked policy distribution the action
// was sampled from; mask mirrors which vO-DUs were selectable.
struct Transition {
  Observation obs;
  int action = -1;
  std::vector<double> behavior_probs;
  std::vector<bool> mask;
  double reward = 0.0;
  Observation next_obs;
  bool terminal = false;
};

// Sequential per-arrival allocation over T slicing windows. Loads reset at
// each window start; one step assigns one pending end-user to a vO-DU.
//
// active_users restricts which demands arrive (empty = all). The observation
// keeps the full-scenario layout with inactive demand entries zeroed, so one
// trained policy can be evaluated at reduced load levels.
class SliceEnv {
 public:
  SliceEnv(Instance instance, MdpConfig config, std::vector<int> active_users = {});

  // Zeroes loads, fixes the window-1 arrival queue, returns s(0).
  Observation reset(uint64_t seed);
  // Starts the next episode deterministically from the last reset seed.
  Observation reset_next_episode();

  // mask[m] = true iff assigning the pending user to m keeps (9a)-(9c)
  // satisfied on the users assigned so far.
  std::vector<bool> action_mask() const;

  // Assigns the pending user. Masked action with alternatives available is a
  // DomainError; if everything is masked the user is recorded as a violation
  // and the action value is ignored.
  Transition step(int action, std::vector<double> behavior_probs = {});

  Observation observe() const;

  bool terminal() const;
  int pending_user() const;  // demand index the next step decides
  int steps_per_episode() const;

  // episode metrics
  double pool_power_now_w() const;
  int violation_count() const { return violations_; }
  const Assignment& assignment() const { return assignment_; }
  const Instance& instance() const { return instance_; }
  int observation_size() const;
  int action_count() const { return instance_.model.m_count; }

 private:
  void start_window(int window);
  void require_initialized() const;

  Instance instance_;
  MdpConfig config_;
  std::vector<int> active_users_;
  std::vector<bool> is_active_;
  std::vector<int> vsc_indices_;
  std::vector<int> tolerant_indices_;

  bool initialized_ = false;
  uint64_t base_seed_ = 0;
  uint64_t episode_ = 0;
  int window_ = 0;
  int pos_ = 0;  // position in the current window's arrival order
  std::vector<int> arrival_order_;
  Assignment assignment_;
  std::vector<double> loads_;
  int violations_ = 0;
  bool terminal_ = true;
};

}  // namespace oran
