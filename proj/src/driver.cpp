#include "ergocert/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ergocert/errors.hpp"
#include "ergocert/lp.hpp"

namespace ergocert {

double default_dtol(double eps) { return std::min(eps / 100.0, 1e-7); }

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Ergodic:
      return "ergodic";
    case Verdict::Kind::NonErgodic:
      return "non-ergodic";
    case Verdict::Kind::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

IterationCap compute_iteration_cap(const GameParams& params, double delta, double eps, std::uint64_t ceiling) {
  const long double n = static_cast<long double>(params.n);
  const long double base = n * static_cast<long double>(params.N) * static_cast<long double>(params.W) *
                           static_cast<long double>(params.R) / static_cast<long double>(eps);
  const long double tail = n * n * static_cast<long double>(params.R) / static_cast<long double>(delta);
  if (!(base > 0.0L) || !(tail > 0.0L)) return {1, false};

  const long double exponent = std::pow(2.0L, n) - 1.0L;
  const long double log_cap = exponent * std::log(base) + std::log(tail) + std::log(2.0L * n);
  if (!(log_cap < std::log(static_cast<long double>(ceiling)))) return {ceiling, true};
  const long double kappa = std::pow(base, exponent) * tail;
  const long double cap = std::ceil(2.0L * n * kappa - 1e-9L) + 1.0L;
  if (!(cap < static_cast<long double>(ceiling))) return {ceiling, true};
  return {static_cast<std::uint64_t>(cap), false};
}

std::uint64_t outer_iteration_bound(double R, double eps) {
  const double ratio = R / (24.0 * eps);
  if (!(ratio > 1.0)) return 1;
  return static_cast<std::uint64_t>(std::ceil(std::log(ratio) / std::log(8.0 / 7.0))) + 1;
}

namespace {

Potential centered(const Potential& x) {
  if (x.empty()) return x;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  Potential out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - mean;
  return out;
}

// Shift with the smallest sup-norm.
Potential midrange_centered(const Potential& x) {
  if (x.empty()) return x;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (*lo + *hi);
  Potential out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - mid;
  return out;
}

double sup_norm(const Potential& x) {
  double s = 0.0;
  for (double e : x) s = std::max(s, std::abs(e));
  return s;
}

std::pair<double, double> range_of(const std::vector<double>& m) {
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  return {*lo, *hi};
}

// One LP round: fix local optimal strategies at x and minimize ||x'||_inf subject to
// alpha^v A^v(x') >= m_minus and A^v(x') beta^v <= m_plus.
std::optional<Potential> reduce_round(const GameSpec& game, const Potential& x, double m_minus, double m_plus,
                                      double slack, const MatrixGameOptions& lp_opt) {
  const std::size_t n = game.size();
  const auto sols = local_values_parallel(game, x, lp_opt);
  // Variables: x'^v = pos_v - neg_v (2n columns), then t.
  const std::size_t vars = 2 * n + 1;
  lp::Matrix<double> a;
  std::vector<double> b;
  auto add_row = [&](const std::vector<double>& coef, double rhs) {
    std::vector<double> row(vars, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      row[v] = coef[v];
      row[n + v] = -coef[v];
    }
    row[2 * n] = coef[n];
    a.push_back(std::move(row));
    b.push_back(rhs);
  };

  for (StateId v = 0; v < n; ++v) {
    const State& s = game[v];
    const auto& alpha = sols[v].row_strategy;
    const auto& beta = sols[v].col_strategy;
    // a_kl(x') = c_kl + x'^v - sum_u p_u x'^u
    for (std::size_t l = 0; l < s.cols(); ++l) {
      std::vector<double> coef(n + 1, 0.0);
      double constant = 0.0;
      for (std::size_t k = 0; k < s.rows(); ++k) {
        if (alpha[k] == 0.0) continue;
        constant += alpha[k] * game.expected_reward(v, k, l);
        coef[v] += alpha[k];
        for (const Transition& t : s.cell(k, l)) coef[t.to] -= alpha[k] * t.prob;
      }
      // constant + coef.x' >= m_minus - slack
      for (auto& c : coef) c = -c;
      add_row(coef, constant - m_minus + slack);
    }
    for (std::size_t k = 0; k < s.rows(); ++k) {
      std::vector<double> coef(n + 1, 0.0);
      double constant = 0.0;
      for (std::size_t l = 0; l < s.cols(); ++l) {
        if (beta[l] == 0.0) continue;
        constant += beta[l] * game.expected_reward(v, k, l);
        coef[v] += beta[l];
        for (const Transition& t : s.cell(k, l)) coef[t.to] -= beta[l] * t.prob;
      }
      add_row(coef, m_plus + slack - constant);
    }
  }
  for (StateId v = 0; v < n; ++v) {
    std::vector<double> up(n + 1, 0.0), down(n + 1, 0.0);
    up[v] = 1.0;
    up[n] = -1.0;
    down[v] = -1.0;
    down[n] = -1.0;
    add_row(up, 0.0);
    add_row(down, 0.0);
  }
  std::vector<double> c(vars, 0.0);
  c[2 * n] = -1.0;
  const auto res = lp::solve(a, b, c);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  Potential out(n);
  for (StateId v = 0; v < n; ++v) out[v] = res.primal[v] - res.primal[n + v];
  return out;
}

}  // namespace

ReduceResult reduce_potential(const GameSpec& game, const Potential& x, double m_minus, double m_plus, double dtol,
                              const MatrixGameOptions& lp) {
  ReduceResult out{centered(x), false};
  Potential current = out.x;
  for (int round = 0; round < 2; ++round) {
    std::optional<Potential> candidate;
    try {
      candidate = reduce_round(game, current, m_minus, m_plus, dtol / 4.0, lp);
    } catch (const Error&) {
      break;
    }
    if (!candidate) break;
    const auto m = local_value_vector(game, *candidate, lp);
    const auto [lo, hi] = range_of(m);
    if (lo < m_minus - dtol || hi > m_plus + dtol) break;
    const Potential next = midrange_centered(*candidate);
    if (sup_norm(next) >= sup_norm(out.x)) break;
    current = next;
    out.x = current;
    out.reduced = true;
  }
  return out;
}

DecideResult decide_ergodicity(const GameSpec& game, double eps, const DriverConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  DecideResult result;
  Verdict& verdict = result.verdict;
  DriverStats& stats = result.stats;
  verdict.eps = eps;

  const GameParams params = game_params(game);
  const std::size_t n = game.size();
  const double dtol = config.dtol >= 0.0 ? config.dtol : default_dtol(eps);
  const double reduce_above = config.reduce_above >= 0.0 ? config.reduce_above : std::max(1.0, params.R);
  stats.outer_cap = config.outer_cap.value_or(outer_iteration_bound(params.R, eps));
  const StateSet everything = StateSet::all(n);

  auto finish = [&]() {
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  };
  auto inconclusive = [&](std::string reason) {
    verdict.kind = Verdict::Kind::Inconclusive;
    verdict.reason = std::move(reason);
    if (!stats.outer.empty()) stats.outer.back().outcome = "inconclusive";
    return finish();
  };
  auto pump_cap = [&](const Potential& x, double delta) {
    // Transformed rewards are bounded by R plus the potential spread.
    GameParams p = params;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    p.R = params.R + (*hi - *lo);
    IterationCap cap = compute_iteration_cap(p, delta, eps, config.hard_cap);
    if (config.cap_override && *config.cap_override < cap.cap) cap = {*config.cap_override, false};
    stats.cap_saturated = stats.cap_saturated || cap.saturated;
    return cap.cap;
  };
  auto pump_config = [&](int phase, std::uint64_t cap) {
    PumpConfig pc;
    pc.eps = eps;
    pc.W = params.W;
    pc.cap = cap;
    pc.lp = config.lp;
    if (config.trace) {
      pc.observer = [&, phase](const PumpIteration& it) { config.trace(TraceEvent{stats.outer_iterations, phase, it}); };
    }
    return pc;
  };
  auto reduce = [&](const Potential& x, const std::vector<double>& m) {
    const auto [lo, hi] = range_of(m);
    const Potential c = centered(x);
    const double spread = c.empty() ? 0.0 : std::max(std::abs(*std::min_element(c.begin(), c.end())),
                                                     std::abs(*std::max_element(c.begin(), c.end())));
    if (spread <= reduce_above) return c;
    const ReduceResult r = reduce_potential(game, x, lo, hi, dtol, config.lp);
    stats.outer.back().potential_reduced = r.reduced;
    return r.x;
  };
  // Builds and verifies a witness; returns false (leaving the verdict untouched) if anything fails.
  auto try_witness = [&](const Potential& x, const StateSet& I, const StateSet& F, double a_prime, double b_prime,
                         int phase, std::string& why) {
    const ConditionReport cond = check_witness_conditions(game, x, I, F, a_prime, b_prime, eps, params.W, config.lp);
    if (!cond.ok()) {
      why = cond.failures.front();
      return false;
    }
    const auto m = local_value_vector(game, x, config.lp);
    const double m_plus = *std::max_element(m.begin(), m.end());
    try {
      WitnessOptions wopt;
      wopt.lp = config.lp;
      WitnessCertificate cert = build_witness(game, x, I, F, a_prime, b_prime, eps, m_plus, wopt);
      VerificationReport rep = verify_witness(game, cert, witness_tolerance(eps));
      if (!rep.passed()) {
        why = rep.failures.empty() ? "verification failed" : rep.failures.front();
        return false;
      }
      verdict.kind = Verdict::Kind::NonErgodic;
      verdict.x = x;
      verdict.I = I;
      verdict.F = F;
      verdict.a_prime = a_prime;
      verdict.b_prime = b_prime;
      verdict.witness_phase = phase;
      verdict.witness = std::move(cert);
      verdict.verification = std::move(rep);
      stats.outer.back().outcome = "witness";
      return true;
    } catch (const Error& e) {
      why = e.what();
      return false;
    }
  };

  Potential x(n, 0.0);
  try {
    while (true) {
      const auto m = local_value_vector(game, x, config.lp);
      const auto [m_minus, m_plus] = range_of(m);
      stats.outer.push_back(OuterRecord{m_minus, m_plus, "", 0, 0, 0, 0, false});
      verdict.x = x;
      verdict.m_minus = m_minus;
      verdict.m_plus = m_plus;

      if (m_plus - m_minus <= 24.0 * eps) {
        verdict.kind = Verdict::Kind::Ergodic;
        stats.outer.back().outcome = "ergodic";
        return finish();
      }
      if (stats.outer_iterations >= stats.outer_cap) return inconclusive("outer iteration cap reached");

      const double delta = (m_plus - m_minus) / 4.0;
      const std::uint64_t cap1 = pump_cap(x, delta);
      stats.outer.back().phase1_cap = cap1;
      const PumpOutcome first = modified_pump(game, x, everything, m_minus, m_plus, pump_config(1, cap1));
      stats.outer.back().phase1_iterations = first.stats.iterations;

      if (first.kind == PumpOutcome::Kind::CapExceeded) {
        verdict.x = first.x;
        return inconclusive("pump cap reached in phase 1");
      }
      if (first.kind == PumpOutcome::Kind::BandCollapsed) {
        stats.outer.back().outcome = "phase1-collapse";
        x = reduce(first.x, first.m);
        ++stats.outer_iterations;
        continue;
      }

      // Closed sets found. Accept them directly when the separation already suffices.
      const StateSet& F = first.closed_bottom;
      double a_first = -std::numeric_limits<double>::infinity();
      for (StateId v = 0; v < n; ++v)
        if (!first.band.pumped.contains(v)) a_first = std::max(a_first, first.m[v]);
      // F needs strict inequality; eps/2 keeps it robust to rounding of the stored potential.
      a_first += eps / 2.0;
      const double mid = (m_minus + m_plus) / 2.0;
      std::string why;
      if (mid - a_first >= 3.0 * eps && try_witness(first.x, first.closed_top, F, a_first, mid, 1, why))
        return finish();

      // Second phase: pump inside I over the upper half of the band.
      const double delta2 = (m_plus - mid) / 4.0;
      const std::uint64_t cap2 = pump_cap(first.x, delta2);
      stats.outer.back().phase2_cap = cap2;
      const PumpOutcome second = modified_pump(game, first.x, first.closed_top, mid, m_plus, pump_config(2, cap2));
      stats.outer.back().phase2_iterations = second.stats.iterations;

      verdict.x = second.x;
      if (second.kind == PumpOutcome::Kind::CapExceeded) return inconclusive("pump cap reached in phase 2");
      if (second.kind == PumpOutcome::Kind::BandCollapsed && second.top_empty) {
        stats.outer.back().outcome = "phase2-collapse";
        x = reduce(second.x, second.m);
        ++stats.outer_iterations;
        continue;
      }
      const StateSet I = second.kind == PumpOutcome::Kind::WitnessSets ? second.closed_top : first.closed_top;
      const double a_prime = mid;
      const double b_prime = 0.625 * m_plus + 0.375 * m_minus;
      if (try_witness(second.x, I, F, a_prime, b_prime, 2, why)) return finish();
      return inconclusive("witness rejected: " + why);
    }
  } catch (const Error& e) {
    return inconclusive(std::string("solver failure: ") + e.what());
  }
}

}  // namespace ergocert
