#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "oran/errors.hpp"
#include "oran/solver.hpp"
#include "support.hpp"

using namespace oran;

namespace {

Demand vsc(double cpus, double mu = 100.0, double beta = 1.0e6, int o_ru = 0) {
  return Demand{DemandKind::Vsc, cpus, mu, beta, o_ru};
}

Demand tolerant(double cpus, double lambda = 50.0, int o_ru = 0) {
  return Demand{DemandKind::Tolerant, cpus, lambda, 0.0, o_ru};
}

Instance benign_instance(int m_count, std::vector<Demand> demands) {
  PoolModel pool = test::desk_pool(m_count, 4.0, /*d_th=*/1.0e-2);
  return Instance{pool, std::move(demands), 1};
}

}  // namespace

TEST_CASE("solve_exact on single-choice and pigeonhole instances") {
  SUBCASE("one user, one vO-DU") {
    Instance instance = benign_instance(1, {vsc(2.0)});
    SolveResult result = solve_exact(instance);
    CHECK(result.status == SolveStatus::Optimal);
    CHECK(result.assignment.user_to_vdu == std::vector<int>{0});
  }

  SUBCASE("nine CPUs cannot fit two vO-DUs of four") {
    Instance instance = benign_instance(2, {vsc(3.0), vsc(3.0), tolerant(3.0)});
    SolveResult result = solve_exact(instance);
    CHECK(result.status == SolveStatus::Infeasible);
    CHECK(brute_force_oracle(instance).status == SolveStatus::Infeasible);
  }

  SUBCASE("optimum packs both VSCs together, tolerant user alone") {
    Instance instance = benign_instance(2, {vsc(2.0), vsc(2.0), tolerant(1.0)});
    SolveResult result = solve_exact(instance);
    CHECK(result.status == SolveStatus::Optimal);
    // frozen from exhaustive enumeration of all 2^3 assignments:
    // P(u=1) + P(u=0.25) = 145 + 107.6719369262715
    CHECK(result.objective_w == doctest::Approx(252.67193692627148).epsilon(1e-12));
    // both VSCs share one vO-DU, the tolerant user sits alone
    CHECK(result.assignment[0] == result.assignment[1]);
    CHECK(result.assignment[2] != result.assignment[0]);
    CHECK(result.objective_w == brute_force_oracle(instance).objective_w);
  }
}

TEST_CASE("brute force oracle edge cases") {
  SUBCASE("empty demand list is trivially optimal at zero power") {
    Instance instance = benign_instance(2, {});
    SolveResult result = brute_force_oracle(instance);
    CHECK(result.status == SolveStatus::Optimal);
    CHECK(result.objective_w == 0.0);
    CHECK(solve_exact(instance).status == SolveStatus::Optimal);
    CHECK(solve_exact(instance).objective_w == 0.0);
  }

  SUBCASE("a user bigger than every capacity is infeasible") {
    Instance instance = benign_instance(2, {vsc(5.0)});
    CHECK(brute_force_oracle(instance).status == SolveStatus::Infeasible);
    CHECK(solve_exact(instance).status == SolveStatus::Infeasible);
  }

  SUBCASE("enumeration bound is enforced") {
    std::vector<Demand> many;
    for (int i = 0; i < 10; ++i) many.push_back(tolerant(0.1));
    Instance instance = benign_instance(3, many);  // 3^10 = 59049
    CHECK_THROWS_AS(brute_force_oracle(instance, 1000), BudgetExhausted);
  }
}

TEST_CASE("solve_exact matches the oracle on 100 seeded instances") {
  int optimal_count = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Instance instance = test::random_instance(seed);
    SolveResult exact = solve_exact(instance);
    SolveResult oracle = brute_force_oracle(instance);
    REQUIRE(exact.status == oracle.status);
    if (exact.status == SolveStatus::Optimal) {
      ++optimal_count;
      REQUIRE(exact.objective_w == oracle.objective_w);  // bit-exact
      CHECK(check_constraints(instance.model, instance.demands, exact.assignment).ok());
      CHECK(exact.assignment.complete());
    }
  }
  CHECK(optimal_count >= 30);  // healthy mix of feasible and infeasible draws
}

TEST_CASE("solver determinism") {
  for (uint64_t seed : {3u, 17u, 42u}) {
    Instance instance = test::random_instance(seed);
    SolveResult a = solve_exact(instance);
    SolveResult b = solve_exact(instance);
    CHECK(a.status == b.status);
    CHECK(a.assignment.user_to_vdu == b.assignment.user_to_vdu);
    CHECK(a.objective_w == b.objective_w);
    CHECK(a.nodes_explored == b.nodes_explored);
  }
}

TEST_CASE("lower bound") {
  Instance instance = benign_instance(2, {vsc(2.0), vsc(2.0), tolerant(1.0)});
  const auto& model = instance.model;
  const auto& demands = instance.demands;

  SUBCASE("complete assignment: bound equals the pool power exactly") {
    Assignment a(3);
    a.user_to_vdu = {0, 0, 1};
    CHECK(lower_bound(model, a, demands) == pool_power_partial_w(model, demands, a));
  }

  SUBCASE("single unassigned user on an empty pool: min single-user power") {
    std::vector<Demand> one = {vsc(2.0)};
    Assignment empty(1);
    double expected = std::numeric_limits<double>::infinity();
    for (int m = 0; m < model.m_count; ++m)
      expected = std::min(expected, vdu_power_w(model, 2.0, m));
    CHECK(lower_bound(model, empty, one) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("admissible against the oracle on prefixes of 100 random instances") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      Instance random = test::random_instance(seed);
      SolveResult oracle = brute_force_oracle(random);
      if (oracle.status != SolveStatus::Optimal) continue;
      // every prefix of the optimal assignment must be bounded by the optimum
      Assignment partial(random.demands.size());
      double bound = lower_bound(random.model, partial, random.demands);
      CHECK(bound <= oracle.objective_w + 1e-9);
      for (size_t k = 0; k < random.demands.size(); ++k) {
        partial[k] = oracle.assignment[k];
        bound = lower_bound(random.model, partial, random.demands);
        CHECK(bound <= oracle.objective_w + 1e-9);
      }
    }
  }
}

TEST_CASE("node budget exhaustion carries the incumbent") {
  std::vector<Demand> many;
  for (int i = 0; i < 12; ++i) many.push_back(tolerant(0.3, 30.0));
  Instance instance = benign_instance(3, many);
  try {
    solve_exact(instance, 5);
    FAIL("expected BudgetExhausted");
  } catch (const BudgetExhausted& e) {
    // greedy seeding provides a feasible incumbent even this early
    REQUIRE(e.incumbent().has_value());
    CHECK(e.incumbent()->status == SolveStatus::Optimal);
    CHECK(check_constraints(instance.model, instance.demands, e.incumbent()->assignment).ok());
  }
}

TEST_CASE("invalid instances are rejected") {
  Instance bad = benign_instance(1, {vsc(-1.0)});
  CHECK_THROWS_AS(solve_exact(bad), DomainError);
  Instance bad_window = benign_instance(1, {vsc(1.0)});
  bad_window.window_count = 0;
  CHECK_THROWS_AS(solve_exact(bad_window), DomainError);
}
