#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ergocert/game.hpp"
#include "ergocert/matrix_game.hpp"

namespace ergocert {

/// Slack absorbed into every band threshold; values within it of a boundary count as above it.
inline constexpr double kBandSlack = 1e-9;

struct BandPartition {
  double m_minus = 0.0;
  double m_plus = 0.0;
  double delta = 0.0;
  StateSet top;     // T: m >= m- + 3 delta
  StateSet bottom;  // B: m <  m- + delta
  StateSet middle;  // M: the rest of S
  StateSet pumped;  // P: m >= m- + 2 delta
};

/// Splits the states of `scope` by their local values; states outside `scope` belong to no set.
BandPartition partition(const std::vector<double>& m, const StateSet& scope, double m_minus, double m_plus);

struct RBounds {
  std::vector<double> value;
  /// True where the bound came from the upper (a-tilde) side.
  std::vector<char> upper_side;
};

/// Row maxima of a-tilde^v(x) = sum p r + sum_{x^u <= x^v} p (x^v - x^u).
double a_tilde_bound(const GameSpec& game, StateId v, const Potential& x);
/// Row maxima of b-tilde^v(x) = m+ - sum p r - sum_{x^u >= x^v} p (x^v - x^u).
double b_tilde_bound(const GameSpec& game, StateId v, const Potential& x, double m_plus);

RBounds r_bounds(const GameSpec& game, const Potential& x, const StateSet& pumped, double m_plus);

class Digraph {
 public:
  explicit Digraph(std::size_t n) : n_(n), adj_(n * n, 0) {}
  std::size_t size() const { return n_; }
  bool arc(StateId v, StateId u) const { return adj_[v * n_ + u] != 0; }
  void add_arc(StateId v, StateId u) { adj_[v * n_ + u] = 1; }
  std::size_t arc_count() const;

 private:
  std::size_t n_;
  std::vector<char> adj_;
};

/// Arc (v,u), v != u, iff x^u - x^v < |L^v| W (R^v)^2 / eps for v in P,
/// or x^v - x^u < |K^v| W (R^v)^2 / eps for v outside P.
Digraph auxiliary_graph(const GameSpec& game, const Potential& x, const StateSet& pumped, const RBounds& rb,
                        double eps, long long W);

StateSet forward_closure(const Digraph& g, const StateSet& seeds);

/// Forward closures of T and B, returned only when they stay inside P and outside P respectively.
std::optional<std::pair<StateSet, StateSet>> find_closed_sets(const Digraph& g, const StateSet& top,
                                                              const StateSet& pumped, const StateSet& bottom);

/// Per-iteration snapshot handed to observers before the stop tests run.
struct PumpIteration {
  std::uint64_t tau = 0;
  const Potential* x = nullptr;
  const std::vector<double>* m = nullptr;
  const BandPartition* band = nullptr;
};

using PumpObserver = std::function<void(const PumpIteration&)>;

struct PumpConfig {
  double eps = 0.0;
  long long W = 1;
  std::uint64_t cap = 1;
  MatrixGameOptions lp;
  PumpObserver observer;
};

struct PumpStats {
  std::uint64_t iterations = 0;
  std::vector<std::uint64_t> pump_counts;  // times each state was in P
  std::uint64_t cap = 0;
};

struct PumpOutcome {
  enum class Kind { BandCollapsed, WitnessSets, CapExceeded };
  Kind kind = Kind::CapExceeded;
  Potential x;
  std::vector<double> m;  // local values at x
  BandPartition band;     // partition at x
  bool top_empty = false;
  bool bottom_empty = false;
  StateSet closed_top;     // I
  StateSet closed_bottom;  // F
  PumpStats stats;
};

/// Pumps the upper half of the band inside `scope` by a fixed delta = (m+ - m-)/4 per iteration
/// until T or B empties, closed witness sets appear, or `cap` pump steps have been taken.
/// Potentials outside `scope` are never modified.
PumpOutcome modified_pump(const GameSpec& game, const Potential& x0, const StateSet& scope, double m_minus,
                          double m_plus, const PumpConfig& config);

}  // namespace ergocert
