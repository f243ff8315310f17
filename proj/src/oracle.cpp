#include "ergocert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ergocert {

namespace {

struct SampledChain {
  std::vector<std::vector<double>> cumulative;
  std::vector<std::vector<StateId>> target;
  std::vector<double> reward;
};

SampledChain sampled_chain(const GameSpec& game, const StationaryProfile& profile) {
  const std::size_t n = game.size();
  SampledChain chain;
  chain.cumulative.resize(n);
  chain.target.resize(n);
  chain.reward.assign(n, 0.0);
  for (StateId v = 0; v < n; ++v) {
    const State& s = game[v];
    std::vector<double> row(n, 0.0);
    for (std::size_t k = 0; k < s.rows(); ++k)
      for (std::size_t l = 0; l < s.cols(); ++l) {
        const double w = profile.alpha[v][k] * profile.beta[v][l];
        if (w == 0.0) continue;
        chain.reward[v] += w * game.expected_reward(v, k, l);
        for (const Transition& t : s.cell(k, l)) row[t.to] += w * t.prob;
      }
    double acc = 0.0;
    for (StateId u = 0; u < n; ++u) {
      if (row[u] <= 0.0) continue;
      acc += row[u];
      chain.cumulative[v].push_back(acc);
      chain.target[v].push_back(u);
    }
  }
  return chain;
}

}  // namespace

double simulate_mean_payoff(const GameSpec& game, const StationaryProfile& profile, StateId start,
                            std::uint64_t steps, std::uint64_t seed) {
  const SampledChain chain = sampled_chain(game, profile);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StateId v = start;
  double sum = 0.0;
  for (std::uint64_t j = 0; j < steps; ++j) {
    sum += chain.reward[v];
    const auto& cum = chain.cumulative[v];
    if (cum.size() == 1) {
      v = chain.target[v][0];
      continue;
    }
    const double r = unit(rng) * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), r);
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    v = chain.target[v][idx];
  }
  return steps == 0 ? 0.0 : sum / static_cast<double>(steps);
}

MonteCarloEstimate estimate_mean_payoff(const GameSpec& game, const StationaryProfile& profile, StateId start,
                                        std::uint64_t steps, std::size_t seeds, std::uint64_t base_seed) {
  MonteCarloEstimate est;
  est.start = start;
  est.steps = steps;
  est.seeds = seeds;
  std::vector<double> samples(seeds);
  for (std::size_t i = 0; i < seeds; ++i) samples[i] = simulate_mean_payoff(game, profile, start, steps, base_seed + i);
  if (seeds == 0) return est;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(seeds);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  est.mean = mean;
  est.std_error = seeds > 1 ? std::sqrt(var / static_cast<double>(seeds - 1) / static_cast<double>(seeds)) : 0.0;
  return est;
}

OracleReport enumerate_pure_bounds(const GameSpec& game, std::uint64_t budget) {
  PureBounds b = brute_force_game_bounds(game, budget);
  OracleReport report;
  report.lo = std::move(b.lo);
  report.hi = std::move(b.hi);
  report.lo_argmax = std::move(b.lo_argmax);
  report.hi_argmin = std::move(b.hi_argmin);
  report.profiles = b.profiles;
  return report;
}

}  // namespace ergocert
