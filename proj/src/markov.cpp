#include "ergocert/markov.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <sstream>

#include "ergocert/errors.hpp"

namespace ergocert {

StationaryProfile StationaryProfile::uniform(const GameSpec& game) {
  StationaryProfile p;
  for (const State& s : game.states) {
    p.alpha.emplace_back(s.rows(), 1.0 / static_cast<double>(s.rows()));
    p.beta.emplace_back(s.cols(), 1.0 / static_cast<double>(s.cols()));
  }
  return p;
}

StationaryProfile StationaryProfile::pure(const GameSpec& game, const std::vector<std::size_t>& rows,
                                          const std::vector<std::size_t>& cols) {
  StationaryProfile p;
  for (StateId v = 0; v < game.size(); ++v) {
    p.alpha.emplace_back(game[v].rows(), 0.0);
    p.beta.emplace_back(game[v].cols(), 0.0);
    p.alpha.back()[rows[v]] = 1.0;
    p.beta.back()[cols[v]] = 1.0;
  }
  return p;
}

Eigen::MatrixXd induced_chain(const GameSpec& game, const StationaryProfile& profile) {
  const auto n = static_cast<Eigen::Index>(game.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (StateId v = 0; v < game.size(); ++v) {
    const State& s = game[v];
    for (std::size_t k = 0; k < s.rows(); ++k) {
      const double ak = profile.alpha[v][k];
      if (ak == 0.0) continue;
      for (std::size_t l = 0; l < s.cols(); ++l) {
        const double w = ak * profile.beta[v][l];
        if (w == 0.0) continue;
        for (const Transition& t : s.cell(k, l))
          p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(t.to)) += w * t.prob;
      }
    }
  }
  return p;
}

namespace {

// Tarjan's strongly connected components; returns component id per node.
std::vector<int> strong_components(const std::vector<std::vector<std::size_t>>& adj, int& count) {
  const std::size_t n = adj.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  int next = 0;
  count = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.node].size()) {
        const std::size_t w = adj[f.node][f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
    }
  }
  return comp;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > 1e-13)) throw ChainError("ill-conditioned chain (retry with exact arithmetic)");
  return lu.solve(rhs);
}

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > 1e-13)) throw ChainError("ill-conditioned chain (retry with exact arithmetic)");
  return lu.solve(rhs);
}

struct ChainStructure {
  std::vector<int> comp;
  std::vector<char> recurrent_comp;
  std::vector<std::vector<std::size_t>> classes;  // recurrent classes
  std::vector<std::size_t> transient;
};

ChainStructure classify(const Eigen::MatrixXd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) > kZeroArc) adj[v].push_back(u);

  ChainStructure cs;
  int count = 0;
  cs.comp = strong_components(adj, count);
  cs.recurrent_comp.assign(static_cast<std::size_t>(count), 1);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u : adj[v])
      if (cs.comp[u] != cs.comp[v]) cs.recurrent_comp[static_cast<std::size_t>(cs.comp[v])] = 0;

  std::vector<int> class_of_comp(static_cast<std::size_t>(count), -1);
  for (std::size_t v = 0; v < n; ++v) {
    const auto c = static_cast<std::size_t>(cs.comp[v]);
    if (!cs.recurrent_comp[c]) {
      cs.transient.push_back(v);
      continue;
    }
    if (class_of_comp[c] < 0) {
      class_of_comp[c] = static_cast<int>(cs.classes.size());
      cs.classes.emplace_back();
    }
    cs.classes[static_cast<std::size_t>(class_of_comp[c])].push_back(v);
  }
  return cs;
}

}  // namespace

Eigen::MatrixXd limiting_matrix(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  const ChainStructure cs = classify(p);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);

  std::vector<Eigen::VectorXd> stationary;
  for (const auto& cls : cs.classes) {
    const auto m = static_cast<Eigen::Index>(cls.size());
    // pi (P_CC - I) = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd sys(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        sys(j, i) = p(static_cast<Eigen::Index>(cls[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(cls[static_cast<std::size_t>(j)])) -
                    (i == j ? 1.0 : 0.0);
    sys.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;
    Eigen::VectorXd pi = solve_checked(sys, rhs);
    for (Eigen::Index i = 0; i < m; ++i) pi(i) = std::max(0.0, pi(i));
    pi /= pi.sum();
    for (std::size_t a : cls)
      for (Eigen::Index j = 0; j < m; ++j)
        q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(cls[static_cast<std::size_t>(j)])) = pi(j);
    stationary.push_back(std::move(pi));
  }

  if (!cs.transient.empty()) {
    const auto t = static_cast<Eigen::Index>(cs.transient.size());
    const auto c = static_cast<Eigen::Index>(cs.classes.size());
    Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(t, t);
    Eigen::MatrixXd into = Eigen::MatrixXd::Zero(t, c);
    std::vector<Eigen::Index> class_of(static_cast<std::size_t>(n), -1);
    for (Eigen::Index ci = 0; ci < c; ++ci)
      for (std::size_t a : cs.classes[static_cast<std::size_t>(ci)]) class_of[a] = ci;
    std::vector<Eigen::Index> pos(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < t; ++i) pos[cs.transient[static_cast<std::size_t>(i)]] = i;

    for (Eigen::Index i = 0; i < t; ++i) {
      const auto v = static_cast<Eigen::Index>(cs.transient[static_cast<std::size_t>(i)]);
      for (Eigen::Index u = 0; u < n; ++u) {
        const double puv = p(v, u);
        if (puv <= kZeroArc) continue;
        if (pos[static_cast<std::size_t>(u)] >= 0)
          sys(i, pos[static_cast<std::size_t>(u)]) -= puv;
        else
          into(i, class_of[static_cast<std::size_t>(u)]) += puv;
      }
    }
    const Eigen::MatrixXd absorb = solve_checked(sys, into);
    for (Eigen::Index i = 0; i < t; ++i) {
      const auto v = static_cast<Eigen::Index>(cs.transient[static_cast<std::size_t>(i)]);
      double total = 0.0;
      for (Eigen::Index ci = 0; ci < c; ++ci) total += std::max(0.0, absorb(i, ci));
      for (Eigen::Index ci = 0; ci < c; ++ci) {
        const double w = std::max(0.0, absorb(i, ci)) / (total > 0.0 ? total : 1.0);
        const auto& cls = cs.classes[static_cast<std::size_t>(ci)];
        for (std::size_t j = 0; j < cls.size(); ++j)
          q(v, static_cast<Eigen::Index>(cls[j])) += w * stationary[static_cast<std::size_t>(ci)](static_cast<Eigen::Index>(j));
      }
    }
  }
  return q;
}

MarkovEvaluation evaluate_stationary_pair(const GameSpec& game, const StationaryProfile& profile) {
  MarkovEvaluation ev;
  ev.transition = induced_chain(game, profile);
  ev.limiting = limiting_matrix(ev.transition);
  const Potential zero(game.size(), 0.0);
  ev.reward.resize(static_cast<Eigen::Index>(game.size()));
  for (StateId v = 0; v < game.size(); ++v) {
    const Eigen::MatrixXd a = local_reward_matrix(game, v, zero);
    const Eigen::Map<const Eigen::VectorXd> al(profile.alpha[v].data(), a.rows());
    const Eigen::Map<const Eigen::VectorXd> be(profile.beta[v].data(), a.cols());
    ev.reward(static_cast<Eigen::Index>(v)) = al.dot(a * be);
  }
  ev.g = ev.limiting * ev.reward;
  return ev;
}

namespace {

struct MdpAction {
  double reward;
  Eigen::VectorXd row;
};

// Per state, the optimizing player's actions against the fixed opponent.
std::vector<std::vector<MdpAction>> reduce_to_mdp(const GameSpec& game, const StationaryStrategy& fixed, Role role) {
  const auto n = static_cast<Eigen::Index>(game.size());
  const Potential zero(game.size(), 0.0);
  std::vector<std::vector<MdpAction>> mdp(game.size());
  for (StateId v = 0; v < game.size(); ++v) {
    const State& s = game[v];
    const Eigen::MatrixXd a = local_reward_matrix(game, v, zero);
    const std::size_t own = role == Role::Maximizer ? s.rows() : s.cols();
    const std::size_t other = role == Role::Maximizer ? s.cols() : s.rows();
    for (std::size_t i = 0; i < own; ++i) {
      MdpAction act{0.0, Eigen::VectorXd::Zero(n)};
      for (std::size_t j = 0; j < other; ++j) {
        const double w = fixed[v][j];
        if (w == 0.0) continue;
        const std::size_t k = role == Role::Maximizer ? i : j;
        const std::size_t l = role == Role::Maximizer ? j : i;
        act.reward += w * a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
        for (const Transition& t : s.cell(k, l)) act.row(static_cast<Eigen::Index>(t.to)) += w * t.prob;
      }
      // Maximize in both cases: the minimizer maximizes the negated reward.
      if (role == Role::Minimizer) act.reward = -act.reward;
      mdp[v].push_back(std::move(act));
    }
  }
  return mdp;
}

std::string describe(const std::vector<std::size_t>& policy, const Eigen::VectorXd& g) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < policy.size(); ++i) os << (i ? "," : "") << policy[i];
  os << "] g=[";
  for (Eigen::Index i = 0; i < g.size(); ++i) os << (i ? "," : "") << g(i);
  os << "]";
  return os.str();
}

}  // namespace

BestResponse best_response_value(const GameSpec& game, const StationaryStrategy& fixed, Role role) {
  const auto mdp = reduce_to_mdp(game, fixed, role);
  const std::size_t n = game.size();
  const auto ni = static_cast<Eigen::Index>(n);

  std::vector<std::size_t> policy(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t a = 1; a < mdp[v].size(); ++a)
      if (mdp[v][a].reward > mdp[v][policy[v]].reward) policy[v] = a;

  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> previous;
  Eigen::VectorXd previous_g;
  BestResponse out;

  while (true) {
    ++out.iterations;
    Eigen::MatrixXd p(ni, ni);
    Eigen::VectorXd r(ni);
    for (std::size_t v = 0; v < n; ++v) {
      p.row(static_cast<Eigen::Index>(v)) = mdp[v][policy[v]].row.transpose();
      r(static_cast<Eigen::Index>(v)) = mdp[v][policy[v]].reward;
    }
    const Eigen::MatrixXd q = limiting_matrix(p);
    const Eigen::VectorXd g = q * r;

    // Bias: h(v) - sum_u p(v,u) h(u) = r(v) - g(v), with h = 0 at one state per recurrent class.
    const ChainStructure cs = classify(p);
    Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(ni, ni) - p;
    Eigen::VectorXd rhs = r - g;
    for (const auto& cls : cs.classes) {
      const auto ref = static_cast<Eigen::Index>(cls.front());
      sys.row(ref).setZero();
      sys(ref, ref) = 1.0;
      rhs(ref) = 0.0;
    }
    const Eigen::VectorXd h = solve_checked(sys, rhs);

    if (!seen.insert(policy).second)
      throw Error("policy iteration cycled: previous " + describe(previous, previous_g) + ", current " +
                  describe(policy, g));

    const double scale = 1.0 + g.cwiseAbs().maxCoeff() + h.cwiseAbs().maxCoeff();
    const double tol = 1e-10 * scale;

    // Gain improvement.
    std::vector<std::size_t> next = policy;
    bool changed = false;
    std::vector<double> best_gain(n);
    for (std::size_t v = 0; v < n; ++v) {
      double best = mdp[v][policy[v]].row.dot(g);
      for (std::size_t a = 0; a < mdp[v].size(); ++a) {
        const double val = mdp[v][a].row.dot(g);
        if (val > best + tol) {
          best = val;
          next[v] = a;
          changed = true;
        }
      }
      best_gain[v] = best;
    }
    // Bias improvement among gain-maximizing actions.
    if (!changed) {
      for (std::size_t v = 0; v < n; ++v) {
        double best = mdp[v][policy[v]].reward + mdp[v][policy[v]].row.dot(h);
        for (std::size_t a = 0; a < mdp[v].size(); ++a) {
          if (mdp[v][a].row.dot(g) < best_gain[v] - tol) continue;
          const double val = mdp[v][a].reward + mdp[v][a].row.dot(h);
          if (val > best + tol) {
            best = val;
            next[v] = a;
            changed = true;
          }
        }
      }
    }
    if (!changed) {
      out.value = role == Role::Maximizer ? g : Eigen::VectorXd(-g);
      out.policy = policy;
      return out;
    }
    previous = policy;
    previous_g = g;
    policy = std::move(next);
  }
}

std::vector<std::size_t> decode_pure(std::uint64_t index, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> out(radix.size());
  for (std::size_t v = 0; v < radix.size(); ++v) {
    out[v] = static_cast<std::size_t>(index % radix[v]);
    index /= radix[v];
  }
  return out;
}

namespace {

std::uint64_t saturating_product(const std::vector<std::size_t>& radix) {
  std::uint64_t total = 1;
  for (std::size_t r : radix) {
    if (r != 0 && total > std::numeric_limits<std::uint64_t>::max() / r) return std::numeric_limits<std::uint64_t>::max();
    total *= r;
  }
  return total;
}

StationaryStrategy pure_strategy(const std::vector<std::size_t>& choice, const std::vector<std::size_t>& radix) {
  StationaryStrategy s;
  for (std::size_t v = 0; v < radix.size(); ++v) {
    s.emplace_back(radix[v], 0.0);
    s.back()[choice[v]] = 1.0;
  }
  return s;
}

struct Radices {
  std::vector<std::size_t> rows, cols;
  std::uint64_t rows_count = 0, cols_count = 0;
};

Radices radices(const GameSpec& game) {
  Radices r;
  for (const State& s : game.states) {
    r.rows.push_back(s.rows());
    r.cols.push_back(s.cols());
  }
  r.rows_count = saturating_product(r.rows);
  r.cols_count = saturating_product(r.cols);
  return r;
}

// Folds per-strategy value vectors in index order, so the result does not depend on scheduling.
void reduce_bounds(const std::vector<Eigen::VectorXd>& values, const std::vector<std::size_t>& radix, bool maximize,
                   std::vector<double>& best, std::vector<std::vector<std::size_t>>& arg) {
  const std::size_t n = radix.size();
  best.assign(n, maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity());
  arg.assign(n, {});
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t v = 0; v < n; ++v) {
      const double val = values[i](static_cast<Eigen::Index>(v));
      if (maximize ? val > best[v] : val < best[v]) {
        best[v] = val;
        arg[v] = decode_pure(i, radix);
      }
    }
  }
}

PureBounds enumerate(const GameSpec& game, std::uint64_t budget, bool parallel) {
  const Radices rad = radices(game);
  const std::uint64_t profiles = pure_profile_count(game);
  if (profiles > budget) throw BudgetError("instance too large for oracle");

  std::vector<Eigen::VectorXd> lo_values(rad.rows_count), hi_values(rad.cols_count);
  std::exception_ptr failure;
  const auto rows_count = static_cast<long long>(rad.rows_count);
  const auto cols_count = static_cast<long long>(rad.cols_count);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long i = 0; i < rows_count; ++i) {
    try {
      const auto alpha = pure_strategy(decode_pure(static_cast<std::uint64_t>(i), rad.rows), rad.rows);
      lo_values[static_cast<std::size_t>(i)] = best_response_value(game, alpha, Role::Minimizer).value;
    } catch (...) {
#pragma omp critical(ergocert_enumerate)
      if (!failure) failure = std::current_exception();
    }
  }
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long i = 0; i < cols_count; ++i) {
    try {
      const auto beta = pure_strategy(decode_pure(static_cast<std::uint64_t>(i), rad.cols), rad.cols);
      hi_values[static_cast<std::size_t>(i)] = best_response_value(game, beta, Role::Maximizer).value;
    } catch (...) {
#pragma omp critical(ergocert_enumerate)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  PureBounds out;
  out.profiles = profiles;
  reduce_bounds(lo_values, rad.rows, true, out.lo, out.lo_argmax);
  reduce_bounds(hi_values, rad.cols, false, out.hi, out.hi_argmin);
  return out;
}

}  // namespace

std::uint64_t pure_profile_count(const GameSpec& game) {
  const Radices rad = radices(game);
  if (rad.cols_count != 0 && rad.rows_count > std::numeric_limits<std::uint64_t>::max() / rad.cols_count)
    return std::numeric_limits<std::uint64_t>::max();
  return rad.rows_count * rad.cols_count;
}

PureBounds brute_force_game_bounds_serial(const GameSpec& game, std::uint64_t budget) {
  return enumerate(game, budget, false);
}

PureBounds brute_force_game_bounds_parallel(const GameSpec& game, std::uint64_t budget) {
  return enumerate(game, budget, true);
}

}  // namespace ergocert
