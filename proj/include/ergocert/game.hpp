#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergocert/rational.hpp"

namespace ergocert {

using StateId = std::size_t;

/// Potential vector x, indexed by state.
using Potential = std::vector<double>;

/// Membership mask over the states of one game.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n) : mask_(n, 0) {}
  static StateSet all(std::size_t n);
  static StateSet of(std::size_t n, std::initializer_list<StateId> members);

  std::size_t universe() const { return mask_.size(); }
  bool contains(StateId v) const { return mask_[v] != 0; }
  void insert(StateId v) { mask_[v] = 1; }
  void erase(StateId v) { mask_[v] = 0; }
  bool empty() const;
  std::size_t count() const;
  std::vector<StateId> members() const;
  StateSet complement() const;
  bool subset_of(const StateSet& other) const;
  bool disjoint(const StateSet& other) const;

  friend bool operator==(const StateSet&, const StateSet&) = default;

 private:
  std::vector<char> mask_;
};

struct Transition {
  StateId to = 0;
  double prob = 0.0;
  /// Exact form when the probability came from a rational literal.
  std::optional<Rational> exact;
  double reward = 0.0;
};

struct State {
  std::string name;
  std::vector<std::string> actions1;  // K^v, rows
  std::vector<std::string> actions2;  // L^v, columns
  /// Successor lists per action pair, indexed k * |L^v| + l. Absent successors have probability 0.
  std::vector<std::vector<Transition>> cells;

  std::size_t rows() const { return actions1.size(); }
  std::size_t cols() const { return actions2.size(); }
  const std::vector<Transition>& cell(std::size_t k, std::size_t l) const { return cells[k * cols() + l]; }
  std::vector<Transition>& cell(std::size_t k, std::size_t l) { return cells[k * cols() + l]; }
};

/// A finite zero-sum stochastic game. Treated as immutable once built.
struct GameSpec {
  std::vector<State> states;

  std::size_t size() const { return states.size(); }
  const State& operator[](StateId v) const { return states[v]; }

  /// Sum_u p^{vu}_{kl} r^{vu}_{kl}.
  double expected_reward(StateId v, std::size_t k, std::size_t l) const;
  /// Sum over u outside the set of p^{vu}_{kl}.
  double mass_outside(StateId v, std::size_t k, std::size_t l, const StateSet& set) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const GameSpec& game);

struct NormalizedGame {
  GameSpec game;
  /// Added to every reward; all values of the normalized game exceed the original ones by this amount.
  double offset = 0.0;
  double reward_bound = 0.0;
};

/// Shifts rewards so the minimum reward is zero when any reward is negative.
NormalizedGame normalize_rewards(const GameSpec& game);

struct GameParams {
  std::size_t n = 0;
  std::size_t N = 0;
  long long W = 1;
  double R = 0.0;
  int eta = 0;
};

/// Throws std::domain_error when a nonzero probability has no exact rational form.
GameParams game_params(const GameSpec& game);

double min_reward(const GameSpec& game);
double max_reward(const GameSpec& game);

/// Entries a^v_{kl}(x) = sum_u p^{vu}_{kl} (r^{vu}_{kl} + x^v - x^u).
Eigen::MatrixXd local_reward_matrix(const GameSpec& game, StateId v, const Potential& x);

/// Game with rewards r + x^v - x^u.
GameSpec apply_potential(const GameSpec& game, const Potential& x);

/// Adds c to every reward.
GameSpec shift_rewards(const GameSpec& game, double c);

}  // namespace ergocert
