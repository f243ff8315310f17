#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ergocert/game.hpp"

namespace ergocert {

/// One distribution per state for one player.
using StationaryStrategy = std::vector<std::vector<double>>;

struct StationaryProfile {
  StationaryStrategy alpha;  // over K^v
  StationaryStrategy beta;   // over L^v

  static StationaryProfile uniform(const GameSpec& game);
  static StationaryProfile pure(const GameSpec& game, const std::vector<std::size_t>& rows,
                                const std::vector<std::size_t>& cols);
};

struct MarkovEvaluation {
  Eigen::MatrixXd transition;  // p_{alpha,beta}
  Eigen::MatrixXd limiting;    // q, rows are limiting distributions
  Eigen::VectorXd reward;      // one-step expected reward alpha^v A^v beta^v
  Eigen::VectorXd g;           // mean payoff per start state
};

/// Arcs below this probability are dropped when classifying states of a chain.
inline constexpr double kZeroArc = 1e-14;

Eigen::MatrixXd induced_chain(const GameSpec& game, const StationaryProfile& profile);

/// Cesaro limit of P^t built from recurrent classes and absorption probabilities.
/// Throws ChainError("ill-conditioned chain") when a class system is numerically singular.
Eigen::MatrixXd limiting_matrix(const Eigen::MatrixXd& p);

MarkovEvaluation evaluate_stationary_pair(const GameSpec& game, const StationaryProfile& profile);

enum class Role { Maximizer, Minimizer };

struct BestResponse {
  Eigen::VectorXd value;
  /// Optimal pure action per state for the optimizing player.
  std::vector<std::size_t> policy;
  std::size_t iterations = 0;
};

/// Mean-payoff optimum of the MDP left when the other player's strategy is fixed.
/// `role` names the optimizing player; `fixed` is the opponent's stationary strategy.
BestResponse best_response_value(const GameSpec& game, const StationaryStrategy& fixed, Role role);

struct PureBounds {
  std::vector<double> lo;  // max over pure alpha of the minimizer's best response value
  std::vector<double> hi;  // min over pure beta of the maximizer's best response value
  std::vector<std::vector<std::size_t>> lo_argmax;  // pure alpha attaining lo^v
  std::vector<std::vector<std::size_t>> hi_argmin;  // pure beta attaining hi^v
  std::uint64_t profiles = 0;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 10000;

/// Number of pure stationary profiles, saturating at UINT64_MAX.
std::uint64_t pure_profile_count(const GameSpec& game);

/// Enumerates pure stationary strategies of each player in turn.
/// Throws BudgetError("instance too large for oracle") beyond `budget` profiles.
PureBounds brute_force_game_bounds_serial(const GameSpec& game, std::uint64_t budget = kDefaultOracleBudget);
/// OpenMP over strategies with a fixed reduction order; equals the serial result.
PureBounds brute_force_game_bounds_parallel(const GameSpec& game, std::uint64_t budget = kDefaultOracleBudget);
inline PureBounds brute_force_game_bounds(const GameSpec& game, std::uint64_t budget = kDefaultOracleBudget) {
  return brute_force_game_bounds_parallel(game, budget);
}

/// Decodes a mixed-radix index into one pure action per state.
std::vector<std::size_t> decode_pure(std::uint64_t index, const std::vector<std::size_t>& radix);

}  // namespace ergocert
