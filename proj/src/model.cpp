#include "oran/model.hpp"

#include <algorithm>
#include <cmath>

#include "oran/errors.hpp"

namespace oran {

double PoolModel::max_capacity() const {
  return *std::max_element(z_max.begin(), z_max.end());
}

void PoolModel::validate() const {
  if (m_count < 1) throw DomainError("pool: m_count must be >= 1");
  if (static_cast<int>(z_max.size()) != m_count)
    throw DomainError("pool: z_max size must equal m_count");
  for (double z : z_max)
    if (!(z > 0.0)) throw DomainError("pool: every z_max must be > 0");
  if (!(cpu_freq_hz > 0.0)) throw DomainError("pool: cpu_freq_hz must be > 0");
  if (!(p_idle_w >= 0.0) || !(p_full_w >= p_idle_w))
    throw DomainError("pool: need p_full_w >= p_idle_w >= 0");
  if (!(cycles_per_packet > 0.0)) throw DomainError("pool: cycles_per_packet must be > 0");
  if (o_ru_count < 1) throw DomainError("pool: o_ru_count must be >= 1");
  if (static_cast<int>(distances_m.size()) != o_ru_count)
    throw DomainError("pool: distances_m must have one row per O-RU");
  for (const auto& row : distances_m) {
    if (static_cast<int>(row.size()) != m_count)
      throw DomainError("pool: distances_m rows must have one entry per vO-DU");
    for (double d : row)
      if (!(d >= 0.0)) throw DomainError("pool: distances must be >= 0");
  }
  if (!(propagation_speed_mps > 0.0)) throw DomainError("pool: propagation_speed_mps must be > 0");
  if (!(latency_threshold_s > 0.0)) throw DomainError("pool: latency_threshold_s must be > 0");
}

PoolModel PoolModel::homogeneous(int m_count, double z_max, double cpu_freq_hz,
                                 double p_idle_w, double p_full_w, double cycles_per_packet,
                                 int o_ru_count, double base_distance_m, double o_ru_spacing_m,
                                 double propagation_speed_mps, double latency_threshold_s) {
  PoolModel model;
  model.m_count = m_count;
  model.z_max.assign(static_cast<size_t>(m_count), z_max);
  model.cpu_freq_hz = cpu_freq_hz;
  model.p_idle_w = p_idle_w;
  model.p_full_w = p_full_w;
  model.cycles_per_packet = cycles_per_packet;
  model.o_ru_count = o_ru_count;
  model.distances_m.resize(static_cast<size_t>(o_ru_count));
  for (int n = 0; n < o_ru_count; ++n)
    model.distances_m[static_cast<size_t>(n)]
        .assign(static_cast<size_t>(m_count), base_distance_m + o_ru_spacing_m * n);
  model.propagation_speed_mps = propagation_speed_mps;
  model.latency_threshold_s = latency_threshold_s;
  model.validate();
  return model;
}

bool Assignment::complete() const {
  return std::none_of(user_to_vdu.begin(), user_to_vdu.end(), [](int m) { return m < 0; });
}

std::string to_string(DemandKind kind) {
  return kind == DemandKind::Vsc ? "vsc" : "tolerant";
}

namespace {

void check_indices(const std::vector<Demand>& demands, const Assignment& assignment,
                   int m_count) {
  if (assignment.size() != demands.size())
    throw DomainError("assignment size does not match demand list");
  for (int idx : assignment.user_to_vdu)
    if (idx >= m_count || idx < -1) throw DomainError("assignment index out of range");
}

}  // namespace

double cpu_usage(const std::vector<Demand>& demands, const Assignment& assignment, int m) {
  if (m < 0) throw DomainError("cpu_usage: negative vO-DU index");
  if (assignment.size() != demands.size())
    throw DomainError("cpu_usage: assignment size does not match demand list");
  for (int idx : assignment.user_to_vdu)
    if (idx < -1) throw DomainError("cpu_usage: assignment index out of range");
  double z = 0.0;
  for (size_t i = 0; i < demands.size(); ++i)
    if (assignment[i] == m) z += demands[i].cpus;
  return z;
}

double vdu_power_w(const PoolModel& model, double z, int m) {
  if (m < 0 || m >= model.m_count) throw DomainError("vdu_power_w: vO-DU index out of range");
  double cap = model.capacity(m);
  if (z < 0.0 || z > cap) throw DomainError("vdu_power_w: z outside [0, z_max]");
  if (z == 0.0) return 0.0;  // switched off
  double u = z / cap;
  return model.p_idle_w + (model.p_full_w - model.p_idle_w) * (2.0 * u - std::pow(u, 1.4));
}

double pool_power_partial_w(const PoolModel& model, const std::vector<Demand>& demands,
                            const Assignment& assignment) {
  check_indices(demands, assignment, model.m_count);
  std::vector<double> loads(static_cast<size_t>(model.m_count), 0.0);
  for (size_t i = 0; i < demands.size(); ++i)
    if (assignment[i] >= 0) loads[static_cast<size_t>(assignment[i])] += demands[i].cpus;
  std::vector<double> powers(static_cast<size_t>(model.m_count));
  for (int m = 0; m < model.m_count; ++m)
    powers[static_cast<size_t>(m)] = vdu_power_w(model, loads[static_cast<size_t>(m)], m);
  // Accumulate in sorted order so assignments that permute interchangeable
  // vO-DUs produce bit-identical totals.
  std::sort(powers.begin(), powers.end());
  double total = 0.0;
  for (double p : powers) total += p;
  return total;
}

double pool_power_w(const PoolModel& model, const std::vector<Demand>& demands,
                    const Assignment& assignment) {
  if (!assignment.complete()) throw DomainError("pool_power_w: assignment incomplete");
  return pool_power_partial_w(model, demands, assignment);
}

double service_capacity_pps(const PoolModel& model, double z) {
  return z * model.cpu_freq_hz / model.cycles_per_packet;
}

double total_arrivals_pps(const std::vector<Demand>& demands, const Assignment& assignment,
                          int m) {
  double rate = 0.0;
  for (size_t i = 0; i < demands.size(); ++i)
    if (assignment[i] == m) rate += demands[i].arrival_rate_pps;
  return rate;
}

DelayBreakdown delay_breakdown(const PoolModel& model, const std::vector<Demand>& demands,
                               const Assignment& assignment, int w) {
  check_indices(demands, assignment, model.m_count);
  if (w < 0 || w >= static_cast<int>(demands.size()))
    throw DomainError("delay_breakdown: user index out of range");
  const Demand& user = demands[static_cast<size_t>(w)];
  if (!user.is_vsc()) throw DomainError("delay_breakdown: user is not a VSC");
  int m = assignment[static_cast<size_t>(w)];
  if (m < 0) throw DomainError("delay_breakdown: VSC is unassigned");
  if (user.home_o_ru < 0 || user.home_o_ru >= model.o_ru_count)
    throw DomainError("delay_breakdown: home_o_ru out of range");

  double z = cpu_usage(demands, assignment, m);
  double service = service_capacity_pps(model, z);
  double arrivals = total_arrivals_pps(demands, assignment, m);
  if (!(service > arrivals))
    throw InstabilityError("delay_breakdown: vO-DU " + std::to_string(m) +
                           " has no positive service margin");

  DelayBreakdown d;
  d.propagation_s = model.distances_m[static_cast<size_t>(user.home_o_ru)][static_cast<size_t>(m)] /
                    model.propagation_speed_mps;
  d.queueing_s = 1.0 / (service - arrivals);
  d.computing_s = user.packet_size_cycles / (z * model.cpu_freq_hz);
  d.total_s = d.propagation_s + d.queueing_s + d.computing_s;
  return d;
}

ConstraintReport check_constraints(const PoolModel& model, const std::vector<Demand>& demands,
                                   const Assignment& assignment) {
  check_indices(demands, assignment, model.m_count);
  ConstraintReport report;

  std::vector<double> loads(static_cast<size_t>(model.m_count), 0.0);
  std::vector<double> arrivals(static_cast<size_t>(model.m_count), 0.0);
  std::vector<bool> loaded(static_cast<size_t>(model.m_count), false);
  for (size_t i = 0; i < demands.size(); ++i) {
    int m = assignment[i];
    if (m < 0) continue;
    loads[static_cast<size_t>(m)] += demands[i].cpus;
    arrivals[static_cast<size_t>(m)] += demands[i].arrival_rate_pps;
    loaded[static_cast<size_t>(m)] = true;
  }

  for (int m = 0; m < model.m_count; ++m) {
    size_t mi = static_cast<size_t>(m);
    if (loads[mi] > model.capacity(m)) report.capacity_violations.push_back(m);
    if (loaded[mi] && !(service_capacity_pps(model, loads[mi]) > arrivals[mi]))
      report.stability_violations.push_back(m);
  }

  for (size_t i = 0; i < demands.size(); ++i) {
    if (!demands[i].is_vsc() || assignment[i] < 0) continue;
    int m = assignment[i];
    size_t mi = static_cast<size_t>(m);
    if (!(service_capacity_pps(model, loads[mi]) > arrivals[mi])) {
      // unstable queue: delay unbounded, (9b) cannot hold
      report.latency_violations.push_back(static_cast<int>(i));
      continue;
    }
    DelayBreakdown d = delay_breakdown(model, demands, assignment, static_cast<int>(i));
    if (!(d.total_s < model.latency_threshold_s))
      report.latency_violations.push_back(static_cast<int>(i));
  }
  return report;
}

}  // namespace oran
