#pragma once

#include <cstdint>
#include <vector>

#include "ergocert/game.hpp"
#include "ergocert/markov.hpp"

namespace ergocert {

/// Average of the one-step expected payoffs alpha^v A^v beta^v along one sampled trajectory
/// of `steps` positions starting at `start`.
double simulate_mean_payoff(const GameSpec& game, const StationaryProfile& profile, StateId start,
                            std::uint64_t steps, std::uint64_t seed);

struct MonteCarloEstimate {
  StateId start = 0;
  double mean = 0.0;
  /// Standard error across independent seeds.
  double std_error = 0.0;
  std::uint64_t steps = 0;
  std::size_t seeds = 0;
};

/// Runs `seeds` trajectories with seeds base_seed, base_seed+1, ...
MonteCarloEstimate estimate_mean_payoff(const GameSpec& game, const StationaryProfile& profile, StateId start,
                                        std::uint64_t steps, std::size_t seeds, std::uint64_t base_seed);

/// Bounds from pure stationary strategies only. These bracket the game value but are not the value:
/// lo^v <= value^v <= hi^v holds whenever the value exists, and the gap can be strict.
struct OracleReport {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::vector<std::size_t>> lo_argmax;
  std::vector<std::vector<std::size_t>> hi_argmin;
  std::uint64_t profiles = 0;
  std::vector<MonteCarloEstimate> monte_carlo;
};

OracleReport enumerate_pure_bounds(const GameSpec& game, std::uint64_t budget = kDefaultOracleBudget);

}  // namespace ergocert
