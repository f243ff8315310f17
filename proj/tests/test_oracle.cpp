#include <random>

#include "doctest.h"
#include "ergocert/oracle.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("simulation of an absorbing state is exact") {
  const GameSpec g = matrix_as_game({{2.75}});
  for (std::uint64_t steps : {1ULL, 7ULL, 1000ULL})
    CHECK(simulate_mean_payoff(g, StationaryProfile::uniform(g), 0, steps, 9) == 2.75);
}

TEST_CASE("simulation of a deterministic 2-cycle") {
  const GameSpec g = two_cycle(0, 4);
  for (std::uint64_t steps : {10ULL, 11ULL, 1001ULL}) {
    const double avg = simulate_mean_payoff(g, StationaryProfile::uniform(g), 0, steps, 1);
    CHECK(std::abs(avg - 2.0) <= 2.0 / static_cast<double>(steps) + 1e-12);
  }
}

TEST_CASE("simulation is reproducible per seed") {
  const GameSpec g = random_game(3, 2, 4, 8, 5);
  const StationaryProfile prof = StationaryProfile::uniform(g);
  CHECK(simulate_mean_payoff(g, prof, 0, 5000, 42) == simulate_mean_payoff(g, prof, 0, 5000, 42));
}

TEST_CASE("simulation agrees with evaluation within three standard errors") {
  std::mt19937_64 rng(2);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const GameSpec g = random_game(3, 2, 4, 8, 900 + trial);
    const StationaryProfile prof = random_profile(g, rng);
    const auto ev = evaluate_stationary_pair(g, prof);
    for (StateId v = 0; v < 3; ++v) {
      const MonteCarloEstimate est = estimate_mean_payoff(g, prof, v, 20000, 10, 100 * trial);
      // Floor covers the O(1/steps) start-up bias and chains whose trajectories never vary.
      const double sigma = std::max(est.std_error, 1e-3);
      CHECK(std::abs(est.mean - ev.g(v)) <= 3.0 * sigma + 5e-3);
      ++checked;
    }
  }
  CHECK(checked == 30);
}

TEST_CASE("enumerate_pure_bounds examples") {
  SUBCASE("1-state saddle point") {
    const OracleReport r = enumerate_pure_bounds(matrix_as_game({{1, 0}, {0, 0}}));
    CHECK(r.lo[0] == 0.0);
    CHECK(r.hi[0] == 0.0);
    CHECK(r.profiles > 0);
  }
  SUBCASE("disconnected") {
    const OracleReport r = enumerate_pure_bounds(generate("disconnected", GenParams{}, 1));
    CHECK(r.lo == std::vector<double>{0.0, 10.0});
    CHECK(r.hi == std::vector<double>{0.0, 10.0});
  }
  SUBCASE("big match") {
    const OracleReport r = enumerate_pure_bounds(generate("big-match", GenParams{}, 1));
    CHECK(r.lo[0] < r.hi[0]);
    CHECK(r.lo[2] == 1.0);
    CHECK(r.hi[1] == 0.0);
  }
  SUBCASE("intervals are ordered on random games") {
    for (int s = 0; s < 20; ++s) {
      const OracleReport r = enumerate_pure_bounds(random_game(3, 2, 2, 8, 1000 + s));
      for (std::size_t v = 0; v < 3; ++v) CHECK(r.lo[v] <= r.hi[v] + 1e-9);
    }
  }
}
