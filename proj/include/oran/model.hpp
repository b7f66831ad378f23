#pragma once

#include <string>
#include <vector>

namespace oran {

enum class DemandKind { Vsc, Tolerant };

// One end-user's computing-resource request for a slicing window.
struct Demand {
  DemandKind kind = DemandKind::Vsc;
  double cpus = 0.0;                // c_w for a VSC, b_v for a tolerant user
  double arrival_rate_pps = 0.0;    // service rate mu into the network (VSC) or lambda_v (tolerant)
  double packet_size_cycles = 0.0;  // beta_w, CPU cycles per packet; 0 for tolerant users
  int home_o_ru = 0;                // index of the O-RU this user attaches through

  bool is_vsc() const { return kind == DemandKind::Vsc; }
};

// Static parameters of the vO-DU pool. Capacities and power parameters are
// identical across the pool by default; per-index capacity overrides are
// allowed through config for heterogeneous setups.
struct PoolModel {
  int m_count = 0;                   // M
  std::vector<double> z_max;         // per-vO-DU CPU capacity, size m_count
  double cpu_freq_hz = 0.0;          // F, cycles per second per CPU
  double p_idle_w = 0.0;             // P(0%)
  double p_full_w = 0.0;             // P(100%)
  double cycles_per_packet = 0.0;    // kappa: converts z*F (cycles/s) to packets/s
  int o_ru_count = 0;                // N
  std::vector<std::vector<double>> distances_m;  // [n][m], O-RU n to vO-DU m
  double propagation_speed_mps = 0.0;            // s
  double latency_threshold_s = 0.0;              // D_th

  double capacity(int m) const { return z_max[static_cast<size_t>(m)]; }
  double max_capacity() const;

  // Throws DomainError if any invariant is broken.
  void validate() const;

  // Homogeneous pool with a co-located vO-DU site: d[n][m] = base + spacing*n.
  static PoolModel homogeneous(int m_count, double z_max, double cpu_freq_hz,
                               double p_idle_w, double p_full_w,
                               double cycles_per_packet, int o_ru_count,
                               double base_distance_m, double o_ru_spacing_m,
                               double propagation_speed_mps,
                               double latency_threshold_s);
};

// Per-user vO-DU choice; -1 marks an unassigned user.
struct Assignment {
  std::vector<int> user_to_vdu;

  Assignment() = default;
  explicit Assignment(size_t users) : user_to_vdu(users, -1) {}

  bool complete() const;
  size_t size() const { return user_to_vdu.size(); }
  int& operator[](size_t i) { return user_to_vdu[i]; }
  int operator[](size_t i) const { return user_to_vdu[i]; }
};

// Latency components of one VSC packet, all in seconds.
struct DelayBreakdown {
  double propagation_s = 0.0;
  double queueing_s = 0.0;
  double computing_s = 0.0;
  double total_s = 0.0;
};

// Pass/fail per constraint with the violating indices.
struct ConstraintReport {
  std::vector<int> capacity_violations;   // vO-DU indices failing (9a)
  std::vector<int> latency_violations;    // VSC demand indices failing (9b)
  std::vector<int> stability_violations;  // vO-DU indices failing (9c)

  bool ok() const {
    return capacity_violations.empty() && latency_violations.empty() &&
           stability_violations.empty();
  }
};

// z^t_m: total CPU units of the users assigned to vO-DU m.
double cpu_usage(const std::vector<Demand>& demands, const Assignment& assignment, int m);

// Power draw of one vO-DU at load z. An empty vO-DU (z = 0) is switched off
// and draws nothing; an active one pays the idle floor plus the load curve
// 2u - u^1.4 evaluated on utilization u = z / z_max.
double vdu_power_w(const PoolModel& model, double z, int m = 0);

// Sum of vdu_power_w over the pool; requires a complete assignment.
double pool_power_w(const PoolModel& model, const std::vector<Demand>& demands,
                    const Assignment& assignment);

// Same sum evaluated on the assigned users only (partial assignments allowed).
double pool_power_partial_w(const PoolModel& model, const std::vector<Demand>& demands,
                            const Assignment& assignment);

// Packets/s a vO-DU can serve at load z.
double service_capacity_pps(const PoolModel& model, double z);

// Total packet arrival rate at vO-DU m: sum of mu over its VSCs plus sum of
// lambda_v over its tolerant users.
double total_arrivals_pps(const std::vector<Demand>& demands, const Assignment& assignment, int m);

// Propagation + queueing + computing delay of VSC w under the assignment.
// Throws DomainError if w is not an assigned VSC, InstabilityError if the
// vO-DU serving w has no positive service margin.
DelayBreakdown delay_breakdown(const PoolModel& model, const std::vector<Demand>& demands,
                               const Assignment& assignment, int w);

// Evaluates (9a) capacity, (9b) strict latency, (9c) strict stability on the
// assigned users. Reports, never throws.
ConstraintReport check_constraints(const PoolModel& model, const std::vector<Demand>& demands,
                                   const Assignment& assignment);

std::string to_string(DemandKind kind);

}  // namespace oran
