#include "ergocert/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergocert {

StateSet StateSet::all(std::size_t n) {
  StateSet s(n);
  for (StateId v = 0; v < n; ++v) s.insert(v);
  return s;
}

StateSet StateSet::of(std::size_t n, std::initializer_list<StateId> members) {
  StateSet s(n);
  for (StateId v : members) s.insert(v);
  return s;
}

bool StateSet::empty() const { return count() == 0; }

std::size_t StateSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), char{1}));
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  for (StateId v = 0; v < mask_.size(); ++v)
    if (mask_[v]) out.push_back(v);
  return out;
}

StateSet StateSet::complement() const {
  StateSet s(mask_.size());
  for (StateId v = 0; v < mask_.size(); ++v)
    if (!mask_[v]) s.insert(v);
  return s;
}

bool StateSet::subset_of(const StateSet& other) const {
  for (StateId v = 0; v < mask_.size(); ++v)
    if (mask_[v] && !other.contains(v)) return false;
  return true;
}

bool StateSet::disjoint(const StateSet& other) const {
  for (StateId v = 0; v < mask_.size(); ++v)
    if (mask_[v] && other.contains(v)) return false;
  return true;
}

double GameSpec::expected_reward(StateId v, std::size_t k, std::size_t l) const {
  double sum = 0.0;
  for (const Transition& t : states[v].cell(k, l)) sum += t.prob * t.reward;
  return sum;
}

double GameSpec::mass_outside(StateId v, std::size_t k, std::size_t l, const StateSet& set) const {
  double sum = 0.0;
  for (const Transition& t : states[v].cell(k, l))
    if (!set.contains(t.to)) sum += t.prob;
  return sum;
}

ValidationReport validate(const GameSpec& game) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  if (game.size() == 0) add("game has no states");

  for (StateId v = 0; v < game.size(); ++v) {
    const State& s = game[v];
    const std::string where = "state '" + s.name + "'";
    if (s.actions1.empty() || s.actions2.empty()) {
      add("empty action set at " + where);
      continue;
    }
    if (s.cells.size() != s.rows() * s.cols()) {
      add("action-pair table has wrong size at " + where);
      continue;
    }
    for (std::size_t k = 0; k < s.rows(); ++k) {
      for (std::size_t l = 0; l < s.cols(); ++l) {
        const std::string at = "(" + s.name + "," + s.actions1[k] + "," + s.actions2[l] + ")";
        double sum = 0.0;
        Rational exact_sum{0, 1};
        bool all_exact = true;
        bool exact_ok = true;
        for (const Transition& t : s.cell(k, l)) {
          if (t.to >= game.size()) add("unknown successor state at " + at);
          if (!(t.prob >= 0.0 && t.prob <= 1.0)) add("probability out of range at " + at);
          if (!std::isfinite(t.reward)) add("non-finite reward at " + at);
          sum += t.prob;
          if (t.exact && exact_ok) {
            try {
              exact_sum = exact_sum + *t.exact;
            } catch (const std::overflow_error&) {
              exact_ok = false;
            }
          } else {
            all_exact = false;
          }
        }
        const bool sums_to_one = (all_exact && exact_ok) ? exact_sum == Rational{1, 1} : std::abs(sum - 1.0) <= 1e-12;
        if (!sums_to_one) add("non-stopping condition fails at " + at);
      }
    }
  }
  return report;
}

double min_reward(const GameSpec& game) {
  double lo = std::numeric_limits<double>::infinity();
  for (const State& s : game.states)
    for (const auto& cell : s.cells)
      for (const Transition& t : cell) lo = std::min(lo, t.reward);
  return std::isfinite(lo) ? lo : 0.0;
}

double max_reward(const GameSpec& game) {
  double hi = -std::numeric_limits<double>::infinity();
  for (const State& s : game.states)
    for (const auto& cell : s.cells)
      for (const Transition& t : cell) hi = std::max(hi, t.reward);
  return std::isfinite(hi) ? hi : 0.0;
}

GameSpec shift_rewards(const GameSpec& game, double c) {
  GameSpec out = game;
  for (State& s : out.states)
    for (auto& cell : s.cells)
      for (Transition& t : cell) t.reward += c;
  return out;
}

NormalizedGame normalize_rewards(const GameSpec& game) {
  const double lo = min_reward(game);
  NormalizedGame out;
  out.offset = lo < 0.0 ? -lo : 0.0;
  out.game = out.offset == 0.0 ? game : shift_rewards(game, out.offset);
  // Exact zero for the minimum avoids -0.0 and rounding residue.
  if (out.offset != 0.0)
    for (State& s : out.game.states)
      for (auto& cell : s.cells)
        for (Transition& t : cell)
          if (t.reward < 0.0) t.reward = 0.0;
  out.reward_bound = std::max(0.0, max_reward(out.game));
  return out;
}

GameParams game_params(const GameSpec& game) {
  GameParams p;
  p.n = game.size();
  for (const State& s : game.states) p.N = std::max({p.N, s.rows(), s.cols()});
  p.R = std::max(0.0, max_reward(game));

  long long W = 1;
  for (const State& s : game.states) {
    for (const auto& cell : s.cells) {
      for (const Transition& t : cell) {
        if (t.prob == 0.0) continue;
        if (!t.exact) throw std::domain_error("W undefined for irrational probability");
        if (t.exact->num == 0) continue;
        // ceil(1/p) = ceil(den/num)
        const long long need = (t.exact->den + t.exact->num - 1) / t.exact->num;
        W = std::max(W, need);
      }
    }
  }
  p.W = W;
  const double bits = std::max(p.R > 0.0 ? std::log2(p.R) : 0.0, std::log2(static_cast<double>(W)));
  p.eta = std::max(0, static_cast<int>(std::ceil(bits)));
  return p;
}

Eigen::MatrixXd local_reward_matrix(const GameSpec& game, StateId v, const Potential& x) {
  const State& s = game[v];
  Eigen::MatrixXd a(s.rows(), s.cols());
  for (std::size_t k = 0; k < s.rows(); ++k) {
    for (std::size_t l = 0; l < s.cols(); ++l) {
      double sum = 0.0;
      for (const Transition& t : s.cell(k, l)) sum += t.prob * (t.reward + x[v] - x[t.to]);
      a(k, l) = sum;
    }
  }
  return a;
}

GameSpec apply_potential(const GameSpec& game, const Potential& x) {
  GameSpec out = game;
  for (StateId v = 0; v < out.size(); ++v)
    for (auto& cell : out.states[v].cells)
      for (Transition& t : cell) t.reward += x[v] - x[t.to];
  return out;
}

}  // namespace ergocert
