#include "ergocert/pump.hpp"

#include <algorithm>
#include <limits>

namespace ergocert {

BandPartition partition(const std::vector<double>& m, const StateSet& scope, double m_minus, double m_plus) {
  const std::size_t n = m.size();
  BandPartition band;
  band.m_minus = m_minus;
  band.m_plus = m_plus;
  band.delta = (m_plus - m_minus) / 4.0;
  band.top = band.bottom = band.middle = band.pumped = StateSet(n);

  const double top_at = m_minus + 3.0 * band.delta - kBandSlack;
  const double bottom_below = m_minus + band.delta - kBandSlack;
  const double pumped_at = m_minus + 2.0 * band.delta - kBandSlack;
  for (StateId v = 0; v < n; ++v) {
    if (!scope.contains(v)) continue;
    if (m[v] >= top_at)
      band.top.insert(v);
    else if (m[v] < bottom_below)
      band.bottom.insert(v);
    else
      band.middle.insert(v);
    if (m[v] >= pumped_at) band.pumped.insert(v);
  }
  return band;
}

double a_tilde_bound(const GameSpec& game, StateId v, const Potential& x) {
  const State& s = game[v];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.rows(); ++k)
    for (std::size_t l = 0; l < s.cols(); ++l) {
      double sum = 0.0;
      for (const Transition& t : s.cell(k, l)) {
        sum += t.prob * t.reward;
        if (x[t.to] <= x[v]) sum += t.prob * (x[v] - x[t.to]);
      }
      best = std::max(best, sum);
    }
  return best;
}

double b_tilde_bound(const GameSpec& game, StateId v, const Potential& x, double m_plus) {
  const State& s = game[v];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.rows(); ++k)
    for (std::size_t l = 0; l < s.cols(); ++l) {
      double sum = m_plus;
      for (const Transition& t : s.cell(k, l)) {
        sum -= t.prob * t.reward;
        if (x[t.to] >= x[v]) sum -= t.prob * (x[v] - x[t.to]);
      }
      best = std::max(best, sum);
    }
  return best;
}

RBounds r_bounds(const GameSpec& game, const Potential& x, const StateSet& pumped, double m_plus) {
  RBounds rb;
  rb.value.resize(game.size());
  rb.upper_side.resize(game.size());
  for (StateId v = 0; v < game.size(); ++v) {
    const bool upper = pumped.contains(v);
    rb.upper_side[v] = upper ? 1 : 0;
    rb.value[v] = upper ? a_tilde_bound(game, v, x) : b_tilde_bound(game, v, x, m_plus);
  }
  return rb;
}

std::size_t Digraph::arc_count() const {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), char{1}));
}

Digraph auxiliary_graph(const GameSpec& game, const Potential& x, const StateSet& pumped, const RBounds& rb,
                        double eps, long long W) {
  const std::size_t n = game.size();
  Digraph g(n);
  for (StateId v = 0; v < n; ++v) {
    const double r2 = rb.value[v] * rb.value[v];
    if (pumped.contains(v)) {
      const double threshold = static_cast<double>(game[v].cols()) * static_cast<double>(W) * r2 / eps;
      for (StateId u = 0; u < n; ++u)
        if (u != v && x[u] - x[v] < threshold) g.add_arc(v, u);
    } else {
      const double threshold = static_cast<double>(game[v].rows()) * static_cast<double>(W) * r2 / eps;
      for (StateId u = 0; u < n; ++u)
        if (u != v && x[v] - x[u] < threshold) g.add_arc(v, u);
    }
  }
  return g;
}

StateSet forward_closure(const Digraph& g, const StateSet& seeds) {
  StateSet reached = seeds;
  std::vector<StateId> frontier = seeds.members();
  while (!frontier.empty()) {
    const StateId v = frontier.back();
    frontier.pop_back();
    for (StateId u = 0; u < g.size(); ++u) {
      if (g.arc(v, u) && !reached.contains(u)) {
        reached.insert(u);
        frontier.push_back(u);
      }
    }
  }
  return reached;
}

std::optional<std::pair<StateSet, StateSet>> find_closed_sets(const Digraph& g, const StateSet& top,
                                                              const StateSet& pumped, const StateSet& bottom) {
  StateSet closed_top = forward_closure(g, top);
  if (!closed_top.subset_of(pumped)) return std::nullopt;
  StateSet closed_bottom = forward_closure(g, bottom);
  if (!closed_bottom.disjoint(pumped)) return std::nullopt;
  return std::make_pair(std::move(closed_top), std::move(closed_bottom));
}

PumpOutcome modified_pump(const GameSpec& game, const Potential& x0, const StateSet& scope, double m_minus,
                          double m_plus, const PumpConfig& config) {
  const std::size_t n = game.size();
  PumpOutcome out;
  out.x = x0;
  out.stats.cap = config.cap;
  out.stats.pump_counts.assign(n, 0);
  const double delta = (m_plus - m_minus) / 4.0;

  for (std::uint64_t tau = 0;; ++tau) {
    out.stats.iterations = tau;
    out.m = local_value_vector(game, out.x, config.lp);
    out.band = partition(out.m, scope, m_minus, m_plus);
    if (config.observer) config.observer(PumpIteration{tau, &out.x, &out.m, &out.band});

    out.top_empty = out.band.top.empty();
    out.bottom_empty = out.band.bottom.empty();
    if (out.top_empty || out.bottom_empty) {
      out.kind = PumpOutcome::Kind::BandCollapsed;
      return out;
    }

    const double global_max = *std::max_element(out.m.begin(), out.m.end());
    const RBounds rb = r_bounds(game, out.x, out.band.pumped, global_max);
    const Digraph g = auxiliary_graph(game, out.x, out.band.pumped, rb, config.eps, config.W);
    if (auto sets = find_closed_sets(g, out.band.top, out.band.pumped, out.band.bottom)) {
      out.kind = PumpOutcome::Kind::WitnessSets;
      out.closed_top = std::move(sets->first);
      out.closed_bottom = std::move(sets->second);
      return out;
    }

    if (tau >= config.cap) {
      out.kind = PumpOutcome::Kind::CapExceeded;
      return out;
    }
    for (StateId v : out.band.pumped.members()) {
      out.x[v] -= delta;
      ++out.stats.pump_counts[v];
    }
  }
}

}  // namespace ergocert
