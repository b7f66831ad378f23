#include "oran/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "oran/greedy.hpp"

namespace oran {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_demand(const Demand& d, const PoolModel& model, size_t i) {
  if (!(d.cpus > 0.0)) throw DomainError("demand " + std::to_string(i) + ": cpus must be > 0");
  if (!(d.arrival_rate_pps > 0.0))
    throw DomainError("demand " + std::to_string(i) + ": arrival_rate_pps must be > 0");
  if (d.is_vsc() != (d.packet_size_cycles > 0.0))
    throw DomainError("demand " + std::to_string(i) + ": packet_size_cycles > 0 iff vsc");
  if (d.home_o_ru < 0 || d.home_o_ru >= model.o_ru_count)
    throw DomainError("demand " + std::to_string(i) + ": home_o_ru out of range");
}

double power_at(const PoolModel& model, int m, double z) {
  return z > 0.0 ? vdu_power_w(model, z, m) : 0.0;
}

}  // namespace

void Instance::validate() const {
  model.validate();
  for (size_t i = 0; i < demands.size(); ++i) validate_demand(demands[i], model, i);
  if (window_count < 1) throw DomainError("instance: window_count must be >= 1");
}

double lower_bound(const PoolModel& model, const Assignment& partial,
                   const std::vector<Demand>& demands) {
  std::vector<double> loads(static_cast<size_t>(model.m_count), 0.0);
  double pending_total = 0.0;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (partial[i] >= 0)
      loads[static_cast<size_t>(partial[i])] += demands[i].cpus;
    else
      pending_total += demands[i].cpus;
  }

  double bound = pool_power_partial_w(model, demands, partial);
  for (size_t i = 0; i < demands.size(); ++i) {
    if (partial[i] >= 0) continue;
    double c = demands[i].cpus;
    double others = pending_total - c;  // load the rest of the queue could add first
    double cheapest = kInf;
    for (int m = 0; m < model.m_count; ++m) {
      double cap = model.capacity(m);
      double z = loads[static_cast<size_t>(m)];
      if (z + c > cap) continue;
      // Marginal cost shrinks as the base load grows, so evaluate it at the
      // highest load this vO-DU could reach before the user arrives.
      double base = std::min(cap - c, z + others);
      base = std::max(base, z);
      double marginal = power_at(model, m, base + c) - power_at(model, m, base);
      cheapest = std::min(cheapest, marginal);
    }
    if (cheapest == kInf) return kInf;  // user fits nowhere: no feasible completion
    bound += cheapest;
  }
  return bound;
}

SolveResult brute_force_oracle(const Instance& instance, uint64_t enumeration_bound) {
  instance.validate();
  auto start = std::chrono::steady_clock::now();
  const auto& demands = instance.demands;
  const auto& model = instance.model;
  size_t n = demands.size();

  double combos = std::pow(static_cast<double>(model.m_count), static_cast<double>(n));
  if (combos > static_cast<double>(enumeration_bound))
    throw BudgetExhausted("brute_force_oracle: enumeration bound exceeded", std::nullopt);

  SolveResult result;
  result.status = SolveStatus::Infeasible;
  result.objective_w = kInf;

  Assignment assignment(n);
  std::fill(assignment.user_to_vdu.begin(), assignment.user_to_vdu.end(), 0);
  bool done = n == 0;
  long explored = 0;
  while (true) {
    ++explored;
    if (check_constraints(model, demands, assignment).ok()) {
      double power = pool_power_partial_w(model, demands, assignment);
      if (power < result.objective_w) {
        result.objective_w = power;
        result.assignment = assignment;
        result.status = SolveStatus::Optimal;
      }
    }
    if (done) break;
    // odometer increment over user indices
    size_t pos = 0;
    while (pos < n) {
      if (++assignment[pos] < model.m_count) break;
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  result.nodes_explored = explored;
  if (result.status == SolveStatus::Infeasible) {
    result.objective_w = 0.0;
    result.assignment = Assignment(n);
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

struct SearchState {
  const PoolModel* model;
  const std::vector<Demand>* demands;
  std::vector<int> order;        // branching order over users
  std::vector<int> vdu_class;    // symmetry class per vO-DU
  Assignment assignment;
  std::vector<double> loads;
  long nodes = 0;
  long budget = 0;
  double best_power = kInf;
  Assignment best_assignment;
  bool found = false;
};

// Optimistic viability of vO-DU m: with the load pushed to full capacity,
// could its queue be stable and its VSCs meet the latency bound? Arrival
// rates only ever grow, so a 'no' can never turn into a 'yes'.
bool vdu_viable(const SearchState& s, int m) {
  const PoolModel& model = *s.model;
  size_t mi = static_cast<size_t>(m);
  if (s.loads[mi] > model.capacity(m)) return false;
  double best_service = service_capacity_pps(model, model.capacity(m));
  double arrivals = 0.0;
  for (size_t i = 0; i < s.demands->size(); ++i)
    if (s.assignment[i] == m) arrivals += (*s.demands)[i].arrival_rate_pps;
  if (!(best_service > arrivals)) return false;
  double best_queue = 1.0 / (best_service - arrivals);
  for (size_t i = 0; i < s.demands->size(); ++i) {
    const Demand& d = (*s.demands)[i];
    if (s.assignment[i] != m || !d.is_vsc()) continue;
    double prop = model.distances_m[static_cast<size_t>(d.home_o_ru)][mi] /
                  model.propagation_speed_mps;
    double best_compute = d.packet_size_cycles / (model.capacity(m) * model.cpu_freq_hz);
    if (!(prop + best_queue + best_compute < model.latency_threshold_s)) return false;
  }
  return true;
}

void dfs(SearchState& s, size_t depth) {
  const PoolModel& model = *s.model;
  const auto& demands = *s.demands;

  if (depth == s.order.size()) {
    if (!check_constraints(model, demands, s.assignment).ok()) return;
    double power = pool_power_partial_w(model, demands, s.assignment);
    if (power < s.best_power) {
      s.best_power = power;
      s.best_assignment = s.assignment;
      s.found = true;
    }
    return;
  }

  int user = s.order[depth];
  double c = demands[static_cast<size_t>(user)].cpus;

  std::vector<bool> empty_class_tried(s.vdu_class.size(), false);
  for (int m = 0; m < model.m_count; ++m) {
    size_t mi = static_cast<size_t>(m);
    if (s.loads[mi] == 0.0) {
      // interchangeable empty vO-DUs: branch only the first of each class
      size_t cls = static_cast<size_t>(s.vdu_class[mi]);
      if (empty_class_tried[cls]) continue;
      empty_class_tried[cls] = true;
    }
    if (s.loads[mi] + c > model.capacity(m)) continue;

    ++s.nodes;
    if (s.nodes > s.budget) {
      std::optional<SolveResult> incumbent;
      if (s.found) {
        SolveResult r;
        r.status = SolveStatus::Optimal;
        r.assignment = s.best_assignment;
        r.objective_w = s.best_power;
        r.nodes_explored = s.nodes;
        incumbent = std::move(r);
      }
      throw BudgetExhausted("solve_exact: node budget exhausted", std::move(incumbent));
    }

    s.assignment[static_cast<size_t>(user)] = m;
    s.loads[mi] += c;

    if (vdu_viable(s, m) && lower_bound(model, s.assignment, demands) < s.best_power)
      dfs(s, depth + 1);

    s.loads[mi] -= c;
    s.assignment[static_cast<size_t>(user)] = -1;
  }
}

}  // namespace

SolveResult solve_exact(const Instance& instance, long node_budget) {
  instance.validate();
  auto start = std::chrono::steady_clock::now();
  const auto& model = instance.model;
  const auto& demands = instance.demands;
  size_t n = demands.size();

  SolveResult result;
  if (n == 0) {
    result.status = SolveStatus::Optimal;
    result.assignment = Assignment(0);
    result.objective_w = 0.0;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  SearchState s;
  s.model = &model;
  s.demands = &demands;
  s.assignment = Assignment(n);
  s.loads.assign(static_cast<size_t>(model.m_count), 0.0);
  s.budget = node_budget;

  // largest CPU demand first; stable so equal demands keep list order
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(), [&](int a, int b) {
    return demands[static_cast<size_t>(a)].cpus > demands[static_cast<size_t>(b)].cpus;
  });

  // vO-DUs with equal capacity and identical distance columns are
  // interchangeable while empty
  s.vdu_class.assign(static_cast<size_t>(model.m_count), -1);
  int next_class = 0;
  for (int m = 0; m < model.m_count; ++m) {
    if (s.vdu_class[static_cast<size_t>(m)] >= 0) continue;
    s.vdu_class[static_cast<size_t>(m)] = next_class;
    for (int m2 = m + 1; m2 < model.m_count; ++m2) {
      if (s.vdu_class[static_cast<size_t>(m2)] >= 0) continue;
      if (model.capacity(m) != model.capacity(m2)) continue;
      bool same = true;
      for (int o = 0; o < model.o_ru_count && same; ++o)
        same = model.distances_m[static_cast<size_t>(o)][static_cast<size_t>(m)] ==
               model.distances_m[static_cast<size_t>(o)][static_cast<size_t>(m2)];
      if (same) s.vdu_class[static_cast<size_t>(m2)] = next_class;
    }
    ++next_class;
  }

  // seed the incumbent with the greedy solution when it is complete and feasible
  {
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    auto [greedy_assignment, trace] = greedy_solve(instance, identity);
    if (trace.rejected_users.empty() &&
        check_constraints(model, demands, greedy_assignment).ok()) {
      s.best_power = pool_power_partial_w(model, demands, greedy_assignment);
      s.best_assignment = greedy_assignment;
      s.found = true;
    }
  }

  dfs(s, 0);

  result.nodes_explored = s.nodes;
  if (s.found) {
    result.status = SolveStatus::Optimal;
    result.assignment = s.best_assignment;
    result.objective_w = s.best_power;
  } else {
    result.status = SolveStatus::Infeasible;
    result.assignment = Assignment(n);
    result.objective_w = 0.0;
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace oran
