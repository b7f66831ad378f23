#pragma once

// Shared scenario builders for the test suites.

#include <vector>

#include "oran/model.hpp"
#include "oran/rng.hpp"
#include "oran/solver.hpp"

namespace oran::test {

inline PoolModel desk_pool(int m_count = 4, double z_max = 4.0, double d_th = 1.5e-3) {
  return PoolModel::homogeneous(m_count, z_max, 3.0e9, 87.0, 145.0, 1.0e6,
                                /*o_ru_count=*/3, /*base=*/300.0, /*spacing=*/150.0,
                                /*speed=*/3.0e8, d_th);
}

// Small random instance for solver/greedy cross-checks: M in {2,3}, four to
// seven users, randomized distances so vO-DUs are not all interchangeable.
// Some draws are infeasible on purpose.
inline Instance random_instance(uint64_t seed) {
  Rng rng(mix_seed(0x5EED, seed));
  int m_count = 2 + static_cast<int>(uniform_index(rng, 2));
  int users = 4 + static_cast<int>(uniform_index(rng, 4));
  int o_ru_count = 2;

  PoolModel pool;
  pool.m_count = m_count;
  pool.z_max.assign(static_cast<size_t>(m_count), 4.0);
  pool.cpu_freq_hz = 3.0e9;
  pool.p_idle_w = 87.0;
  pool.p_full_w = 145.0;
  pool.cycles_per_packet = 1.0e6;
  pool.o_ru_count = o_ru_count;
  pool.distances_m.resize(static_cast<size_t>(o_ru_count));
  for (int n = 0; n < o_ru_count; ++n) {
    pool.distances_m[static_cast<size_t>(n)].resize(static_cast<size_t>(m_count));
    for (int m = 0; m < m_count; ++m)
      pool.distances_m[static_cast<size_t>(n)][static_cast<size_t>(m)] =
          uniform_real(rng, 100.0, 900.0);
  }
  pool.propagation_speed_mps = 3.0e8;
  pool.latency_threshold_s = 2.0e-3;

  std::vector<Demand> demands;
  for (int i = 0; i < users; ++i) {
    Demand d;
    bool is_vsc = uniform_index(rng, 2) == 0;
    d.kind = is_vsc ? DemandKind::Vsc : DemandKind::Tolerant;
    d.cpus = uniform_real(rng, 0.8, 2.6);
    d.arrival_rate_pps = is_vsc ? uniform_real(rng, 100.0, 800.0)
                                : uniform_real(rng, 20.0, 200.0);
    d.packet_size_cycles = is_vsc ? 1.0e6 : 0.0;
    d.home_o_ru = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(o_ru_count)));
    demands.push_back(d);
  }
  return Instance{pool, demands, 1};
}

}  // namespace oran::test
