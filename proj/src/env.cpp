#include "oran/env.hpp"

#include <algorithm>
#include <numeric>

#include "oran/errors.hpp"
#include "oran/rng.hpp"

namespace oran {

void MdpConfig::validate() const {
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("mdp: gamma must be in [0,1]");
  if (!(alpha > 0.0)) throw DomainError("mdp: alpha must be > 0");
  if (windows_per_episode < 1) throw DomainError("mdp: windows_per_episode must be >= 1");
  if (!(infeasible_penalty < 0.0)) throw DomainError("mdp: infeasible_penalty must be < 0");
}

SliceEnv::SliceEnv(Instance instance, MdpConfig config, std::vector<int> active_users)
    : instance_(std::move(instance)), config_(config), active_users_(std::move(active_users)) {
  instance_.validate();
  config_.validate();
  if (instance_.demands.empty()) throw DomainError("env: empty demand list");
  if (active_users_.empty()) {
    active_users_.resize(instance_.demands.size());
    std::iota(active_users_.begin(), active_users_.end(), 0);
  }
  is_active_.assign(instance_.demands.size(), false);
  for (int u : active_users_) {
    if (u < 0 || u >= static_cast<int>(instance_.demands.size()) ||
        is_active_[static_cast<size_t>(u)])
      throw DomainError("env: active_users must be distinct demand indices");
    is_active_[static_cast<size_t>(u)] = true;
  }
  for (size_t i = 0; i < instance_.demands.size(); ++i) {
    if (instance_.demands[i].is_vsc())
      vsc_indices_.push_back(static_cast<int>(i));
    else
      tolerant_indices_.push_back(static_cast<int>(i));
  }
}

int SliceEnv::observation_size() const {
  int base = static_cast<int>(instance_.demands.size()) + instance_.model.m_count;
  return config_.expose_pending ? base + 2 : base;
}

int SliceEnv::steps_per_episode() const {
  return config_.windows_per_episode * static_cast<int>(active_users_.size());
}

void SliceEnv::start_window(int window) {
  window_ = window;
  pos_ = 0;
  assignment_ = Assignment(instance_.demands.size());
  loads_.assign(static_cast<size_t>(instance_.model.m_count), 0.0);
  arrival_order_ = active_users_;
  if (config_.arrival_shuffle) {
    uint64_t window_seed =
        mix_seed(base_seed_, episode_ * 1000003ULL + static_cast<uint64_t>(window));
    Rng rng(window_seed);
    shuffle(arrival_order_, rng);
  }
}

Observation SliceEnv::reset(uint64_t seed) {
  base_seed_ = seed;
  episode_ = 0;
  violations_ = 0;
  terminal_ = false;
  initialized_ = true;
  start_window(0);
  return observe();
}

Observation SliceEnv::reset_next_episode() {
  require_initialized();
  ++episode_;
  violations_ = 0;
  terminal_ = false;
  start_window(0);
  return observe();
}

void SliceEnv::require_initialized() const {
  if (!initialized_) throw StateError("env: reset() has not been called");
}

Observation SliceEnv::observe() const {
  require_initialized();
  const auto& model = instance_.model;
  double norm = model.max_capacity();
  Observation obs;
  obs.reserve(static_cast<size_t>(observation_size()));
  for (int w : vsc_indices_)
    obs.push_back(is_active_[static_cast<size_t>(w)]
                      ? instance_.demands[static_cast<size_t>(w)].cpus / norm
                      : 0.0);
  for (int v : tolerant_indices_)
    obs.push_back(is_active_[static_cast<size_t>(v)]
                      ? instance_.demands[static_cast<size_t>(v)].cpus / norm
                      : 0.0);
  for (int m = 0; m < model.m_count; ++m)
    obs.push_back(loads_[static_cast<size_t>(m)] / model.capacity(m));
  if (config_.expose_pending) {
    if (!terminal_) {
      const Demand& d = instance_.demands[static_cast<size_t>(pending_user())];
      obs.push_back(d.cpus / norm);
      obs.push_back(d.is_vsc() ? 1.0 : 0.0);
    } else {
      obs.push_back(0.0);
      obs.push_back(0.0);
    }
  }
  return obs;
}

bool SliceEnv::terminal() const {
  require_initialized();
  return terminal_;
}

int SliceEnv::pending_user() const {
  require_initialized();
  if (terminal_) throw StateError("env: episode is terminal");
  return arrival_order_[static_cast<size_t>(pos_)];
}

std::vector<bool> SliceEnv::action_mask() const {
  int user = pending_user();
  const auto& model = instance_.model;
  std::vector<bool> mask(static_cast<size_t>(model.m_count), false);
  Assignment candidate = assignment_;
  for (int m = 0; m < model.m_count; ++m) {
    candidate[static_cast<size_t>(user)] = m;
    mask[static_cast<size_t>(m)] = check_constraints(model, instance_.demands, candidate).ok();
  }
  return mask;
}

double SliceEnv::pool_power_now_w() const {
  require_initialized();
  return pool_power_partial_w(instance_.model, instance_.demands, assignment_);
}

Transition SliceEnv::step(int action, std::vector<double> behavior_probs) {
  require_initialized();
  if (terminal_) throw StateError("env: step after terminal");

  Transition t;
  t.obs = observe();
  t.mask = action_mask();
  t.behavior_probs = std::move(behavior_probs);

  int user = pending_user();
  bool any_feasible = std::any_of(t.mask.begin(), t.mask.end(), [](bool b) { return b; });
  if (!any_feasible) {
    // user cannot be placed anywhere: record the violation and move on
    ++violations_;
    t.action = -1;
    t.reward = config_.infeasible_penalty;
  } else {
    if (action < 0 || action >= instance_.model.m_count)
      throw DomainError("env: action index out of range");
    if (!t.mask[static_cast<size_t>(action)])
      throw DomainError("env: masked action selected while alternatives exist");
    assignment_[static_cast<size_t>(user)] = action;
    loads_[static_cast<size_t>(action)] += instance_.demands[static_cast<size_t>(user)].cpus;
    t.action = action;
    t.reward = -config_.alpha * pool_power_now_w();
  }

  ++pos_;
  if (pos_ == static_cast<int>(arrival_order_.size())) {
    if (window_ + 1 == config_.windows_per_episode) {
      terminal_ = true;
    } else {
      start_window(window_ + 1);
    }
  }
  t.terminal = terminal_;
  t.next_obs = observe();
  return t;
}

}  // namespace oran
