#include "ergocert/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "ergocert/errors.hpp"
#include "ergocert/pump.hpp"

namespace ergocert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool leaks(const GameSpec& game, StateId v, std::size_t k, std::size_t l, const StateSet& set) {
  for (const Transition& t : game[v].cell(k, l))
    if (t.prob > 0.0 && !set.contains(t.to)) return true;
  return false;
}

}  // namespace

double witness_tolerance(double eps) { return std::min(eps / 10.0, 1e-6); }

std::vector<std::size_t> bar_actions(const GameSpec& game, StateId v, const StateSet& set, Player player) {
  const State& s = game[v];
  std::vector<std::size_t> out;
  if (player == Player::One) {
    for (std::size_t k = 0; k < s.rows(); ++k) {
      bool closed = true;
      for (std::size_t l = 0; l < s.cols() && closed; ++l) closed = !leaks(game, v, k, l, set);
      if (closed) out.push_back(k);
    }
  } else {
    for (std::size_t l = 0; l < s.cols(); ++l) {
      bool closed = true;
      for (std::size_t k = 0; k < s.rows() && closed; ++k) closed = !leaks(game, v, k, l, set);
      if (closed) out.push_back(l);
    }
  }
  return out;
}

ConditionReport check_witness_conditions(const GameSpec& game, const Potential& x, const StateSet& I,
                                         const StateSet& F, double a_prime, double b_prime, double eps, long long W,
                                         const MatrixGameOptions& lp) {
  ConditionReport rep;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };
  if (I.empty() || F.empty()) fail("I and F must be non-empty");
  if (!I.disjoint(F)) fail("I and F overlap");
  if (b_prime - a_prime < 3.0 * eps - 1e-12) fail("b' - a' = " + fmt(b_prime - a_prime) + " < 3 eps");
  if (!rep.ok()) return rep;

  const std::vector<double> m = local_value_vector(game, x, lp);
  const double m_plus = *std::max_element(m.begin(), m.end());
  if (a_prime < -kBandSlack || b_prime > m_plus + kBandSlack) fail("a', b' outside [0, m+(x)]");

  rep.min_gap_margin_I = std::numeric_limits<double>::infinity();
  rep.min_gap_margin_F = std::numeric_limits<double>::infinity();
  for (StateId v = 0; v < game.size(); ++v) {
    if (I.contains(v)) {
      if (m[v] < b_prime - kBandSlack) fail("local value below b' at " + game[v].name);
      const double r = a_tilde_bound(game, v, x);
      const double threshold = static_cast<double>(game[v].cols()) * static_cast<double>(W) * r * r / eps;
      for (StateId u = 0; u < game.size(); ++u) {
        if (I.contains(u)) continue;
        const double margin = (x[u] - x[v]) - threshold;
        rep.min_gap_margin_I = std::min(rep.min_gap_margin_I, margin);
        if (margin < 0.0) fail("potential gap too small from " + game[v].name + " to " + game[u].name);
      }
    }
    if (F.contains(v)) {
      if (!(m[v] < a_prime)) fail("local value not below a' at " + game[v].name);
      const double r = b_tilde_bound(game, v, x, m_plus);
      const double threshold = static_cast<double>(game[v].rows()) * static_cast<double>(W) * r * r / eps;
      for (StateId u = 0; u < game.size(); ++u) {
        if (F.contains(u)) continue;
        const double margin = (x[v] - x[u]) - threshold;
        rep.min_gap_margin_F = std::min(rep.min_gap_margin_F, margin);
        if (margin < 0.0) fail("potential gap too small from " + game[v].name + " to " + game[u].name);
      }
    }
  }
  return rep;
}

namespace {

using Q = boost::multiprecision::cpp_rational;

struct Truncated {
  std::vector<double> p;
  std::vector<std::string> exact;
};

Truncated truncate(const std::vector<double>& optimal, const std::vector<std::string>& optimal_exact,
                   const std::vector<std::size_t>& keep, const std::string& where) {
  Truncated out;
  out.p.assign(optimal.size(), 0.0);
  if (!optimal_exact.empty()) {
    Q mass = 0;
    for (std::size_t k : keep) mass += Q(optimal_exact[k]);
    if (mass == 0) throw Error("witness preconditions violated at " + where);
    out.exact.assign(optimal.size(), "0");
    for (std::size_t k : keep) {
      const Q p = Q(optimal_exact[k]) / mass;
      out.exact[k] = p.str();
      out.p[k] = p.convert_to<double>();
    }
    return out;
  }
  double mass = 0.0;
  for (std::size_t k : keep) mass += optimal[k];
  if (!(mass > 0.0)) throw Error("witness preconditions violated at " + where);
  for (std::size_t k : keep) out.p[k] = optimal[k] / mass;
  return out;
}

}  // namespace

WitnessCertificate build_witness(const GameSpec& game, const Potential& x, const StateSet& I, const StateSet& F,
                                 double a_prime, double b_prime, double eps, double m_plus,
                                 const WitnessOptions& opt) {
  const std::size_t n = game.size();
  WitnessCertificate cert;
  cert.I = I;
  cert.F = F;
  cert.x = x;
  cert.alpha.assign(n, {});
  cert.beta.assign(n, {});
  const bool exact = opt.lp.exact;
  if (exact) {
    cert.alpha_exact.assign(n, {});
    cert.beta_exact.assign(n, {});
  }
  cert.a_prime = a_prime;
  cert.b_prime = b_prime;
  cert.a = a_prime + eps;
  cert.b = b_prime - eps;
  cert.eps = eps;
  cert.m_plus = m_plus;

  for (StateId v : I.members()) {
    const auto keep = bar_actions(game, v, I, Player::One);
    if (keep.empty()) throw Error("witness preconditions violated at " + game[v].name);
    const Eigen::MatrixXd a = local_reward_matrix(game, v, x);
    Truncated t;
    if (exact) {
      const auto sol = solve_matrix_game_exact(a);
      t = truncate(sol.approx.row_strategy, sol.row_strategy, keep, game[v].name);
      cert.alpha_exact[v] = t.exact;
    } else {
      t = truncate(solve_matrix_game(a, opt.lp).row_strategy, {}, keep, game[v].name);
    }
    cert.alpha[v] = t.p;
  }

  for (StateId u : F.members()) {
    const auto keep = bar_actions(game, u, F, Player::Two);
    if (keep.empty()) throw Error("witness preconditions violated at " + game[u].name);
    const Eigen::MatrixXd a = local_reward_matrix(game, u, x);
    Truncated t;
    if (opt.reflect) {
      // Player 2 maximizes m+ - a_{kl} in the transposed game.
      const Eigen::MatrixXd reflected = Eigen::MatrixXd::Constant(a.cols(), a.rows(), m_plus) - a.transpose();
      if (exact) {
        const auto sol = solve_matrix_game_exact(reflected);
        t = truncate(sol.approx.row_strategy, sol.row_strategy, keep, game[u].name);
      } else {
        t = truncate(solve_matrix_game(reflected, opt.lp).row_strategy, {}, keep, game[u].name);
      }
    } else if (exact) {
      const auto sol = solve_matrix_game_exact(a);
      t = truncate(sol.approx.col_strategy, sol.col_strategy, keep, game[u].name);
    } else {
      t = truncate(solve_matrix_game(a, opt.lp).col_strategy, {}, keep, game[u].name);
    }
    cert.beta[u] = t.p;
    if (exact) cert.beta_exact[u] = t.exact;
  }

  cert.margins.assign(n, 0.0);
  for (StateId v : I.members()) {
    const Eigen::MatrixXd a = local_reward_matrix(game, v, x);
    const Eigen::Map<const Eigen::VectorXd> al(cert.alpha[v].data(), a.rows());
    cert.margins[v] = (al.transpose() * a).minCoeff() - cert.b;
  }
  for (StateId u : F.members()) {
    const Eigen::MatrixXd a = local_reward_matrix(game, u, x);
    const Eigen::Map<const Eigen::VectorXd> be(cert.beta[u].data(), a.cols());
    cert.margins[u] = cert.a - (a * be).maxCoeff();
  }
  return cert;
}

namespace {

bool is_distribution(const std::vector<double>& p, std::size_t size) {
  if (p.size() != size) return false;
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

}  // namespace

VerificationReport verify_witness(const GameSpec& game, const WitnessCertificate& cert, double tol) {
  VerificationReport rep;
  const std::size_t n = game.size();
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

  const bool shapes_ok = cert.I.universe() == n && cert.F.universe() == n && cert.x.size() == n &&
                         cert.alpha.size() == n && cert.beta.size() == n;
  if (!shapes_ok) {
    fail("certificate does not match the game's state count");
    return rep;
  }

  // (a) closure equalities
  rep.structural = true;
  if (cert.I.empty() || cert.F.empty() || !cert.I.disjoint(cert.F)) {
    rep.structural = false;
    fail("I and F must be disjoint and non-empty");
  }
  for (StateId v : cert.I.members()) {
    if (!is_distribution(cert.alpha[v], game[v].rows())) {
      rep.structural = false;
      fail("alpha at " + game[v].name + " is not a distribution");
      continue;
    }
    for (std::size_t k = 0; k < game[v].rows(); ++k) {
      if (cert.alpha[v][k] == 0.0) continue;
      for (std::size_t l = 0; l < game[v].cols(); ++l)
        for (const Transition& t : game[v].cell(k, l))
          if (t.prob > 0.0 && !cert.I.contains(t.to)) {
            rep.structural = false;
            fail("N1 violated at (" + game[v].name + "," + game[v].actions1[k] + "," + game[t.to].name + "," +
                 game[v].actions2[l] + ") with weight " + fmt(cert.alpha[v][k] * t.prob));
          }
    }
  }
  for (StateId u : cert.F.members()) {
    if (!is_distribution(cert.beta[u], game[u].cols())) {
      rep.structural = false;
      fail("beta at " + game[u].name + " is not a distribution");
      continue;
    }
    for (std::size_t l = 0; l < game[u].cols(); ++l) {
      if (cert.beta[u][l] == 0.0) continue;
      for (std::size_t k = 0; k < game[u].rows(); ++k)
        for (const Transition& t : game[u].cell(k, l))
          if (t.prob > 0.0 && !cert.F.contains(t.to)) {
            rep.structural = false;
            fail("N2 violated at (" + game[u].name + "," + game[u].actions1[k] + "," + game[t.to].name + "," +
                 game[u].actions2[l] + ") with weight " + fmt(cert.beta[u][l] * t.prob));
          }
    }
  }
  if (!rep.structural) return rep;

  // (b) one-step guarantees at x
  rep.local = true;
  if (cert.b - cert.a < cert.eps - 1e-12) {
    rep.local = false;
    fail("b - a = " + fmt(cert.b - cert.a) + " is below eps");
  }
  for (StateId v : cert.I.members()) {
    const Eigen::MatrixXd a = local_reward_matrix(game, v, cert.x);
    const Eigen::Map<const Eigen::VectorXd> al(cert.alpha[v].data(), a.rows());
    const double worst = (al.transpose() * a).minCoeff();
    if (worst < cert.b - tol) {
      rep.local = false;
      fail("N3 fails at " + game[v].name + ": guarantee " + fmt(worst) + " < b = " + fmt(cert.b));
    }
  }
  for (StateId u : cert.F.members()) {
    const Eigen::MatrixXd a = local_reward_matrix(game, u, cert.x);
    const Eigen::Map<const Eigen::VectorXd> be(cert.beta[u].data(), a.cols());
    const double worst = (a * be).maxCoeff();
    if (worst > cert.a - tol) {
      rep.local = false;
      fail("N3 fails at " + game[u].name + ": guarantee " + fmt(worst) + " not below a = " + fmt(cert.a));
    }
  }

  // (c) mean payoffs against best responses, with uniform play outside I (resp. F)
  StationaryStrategy alpha(n), beta(n);
  for (StateId v = 0; v < n; ++v) {
    alpha[v] = cert.I.contains(v) ? cert.alpha[v]
                                  : std::vector<double>(game[v].rows(), 1.0 / static_cast<double>(game[v].rows()));
    beta[v] = cert.F.contains(v) ? cert.beta[v]
                                 : std::vector<double>(game[v].cols(), 1.0 / static_cast<double>(game[v].cols()));
  }
  rep.global = true;
  try {
    const BestResponse against_alpha = best_response_value(game, alpha, Role::Minimizer);
    const BestResponse against_beta = best_response_value(game, beta, Role::Maximizer);
    rep.certified_lower = std::numeric_limits<double>::infinity();
    rep.certified_upper = -std::numeric_limits<double>::infinity();
    for (StateId v : cert.I.members()) {
      const double g = against_alpha.value(static_cast<Eigen::Index>(v));
      rep.certified_lower = std::min(rep.certified_lower, g);
      if (g < cert.b - tol) {
        rep.global = false;
        fail("mean payoff " + fmt(g) + " at " + game[v].name + " is below b");
      }
    }
    for (StateId u : cert.F.members()) {
      const double g = against_beta.value(static_cast<Eigen::Index>(u));
      rep.certified_upper = std::max(rep.certified_upper, g);
      if (g > cert.a + tol) {
        rep.global = false;
        fail("mean payoff " + fmt(g) + " at " + game[u].name + " is above a");
      }
    }
  } catch (const std::exception& e) {
    rep.global = false;
    fail(std::string("global check failed: ") + e.what());
  }
  return rep;
}

}  // namespace ergocert
