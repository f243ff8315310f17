#pragma once

#include <string>
#include <vector>

#include "ergocert/game.hpp"
#include "ergocert/markov.hpp"
#include "ergocert/matrix_game.hpp"

namespace ergocert {

enum class Player { One, Two };

/// Actions of `player` at v that keep all mass inside `set` against every opposing action.
std::vector<std::size_t> bar_actions(const GameSpec& game, StateId v, const StateSet& set, Player player);

/// Hypotheses under which closed sets I, F at potential x yield a witness:
/// b' - a' >= 3 eps, local values >= b' on I and < a' on F, and the potential gaps
///   x^u - x^v >= |L^v| W R^v(x)^2 / eps   (v in I, u not in I, R^v from a-tilde)
///   x^v - x^u >= |K^v| W R^v(x)^2 / eps   (v in F, u not in F, R^v from b-tilde)
struct ConditionReport {
  bool ok() const { return failures.empty(); }
  std::vector<std::string> failures;
  double min_gap_margin_I = 0.0;  // smallest (gap - threshold) over I boundary pairs
  double min_gap_margin_F = 0.0;
};

ConditionReport check_witness_conditions(const GameSpec& game, const Potential& x, const StateSet& I,
                                         const StateSet& F, double a_prime, double b_prime, double eps, long long W,
                                         const MatrixGameOptions& lp = {});

struct WitnessCertificate {
  StateSet I;
  StateSet F;
  Potential x;
  /// alpha[v] is set for v in I, beta[u] for u in F; other entries are empty.
  StationaryStrategy alpha;
  StationaryStrategy beta;
  /// Exact renderings when built with the exact LP path; empty otherwise.
  std::vector<std::vector<std::string>> alpha_exact;
  std::vector<std::vector<std::string>> beta_exact;
  double a = 0.0;  // a' + eps
  double b = 0.0;  // b' - eps
  double a_prime = 0.0;
  double b_prime = 0.0;
  double eps = 0.0;
  double m_plus = 0.0;
  /// Per state of I: min_l (alpha A^v(x))_l - b. Per state of F: a - max_k (A^u(x) beta)_k.
  std::vector<double> margins;
};

struct WitnessOptions {
  MatrixGameOptions lp;
  /// Build the F side from the reflected game m+ E - A^T (otherwise from the minimizer's LP directly).
  bool reflect = true;
};

/// Truncates optimal local strategies to their closed actions and renormalizes.
/// Throws Error("witness preconditions violated at <state>") when no closed action exists.
WitnessCertificate build_witness(const GameSpec& game, const Potential& x, const StateSet& I, const StateSet& F,
                                 double a_prime, double b_prime, double eps, double m_plus,
                                 const WitnessOptions& opt = {});

struct VerificationReport {
  bool structural = false;  // closure equalities
  bool local = false;       // one-step guarantees at x
  bool global = false;      // mean-payoff guarantees against best responses
  std::vector<std::string> failures;
  /// min over I of the minimizer's best-response value, and max over F of the maximizer's.
  double certified_lower = 0.0;
  double certified_upper = 0.0;
  bool passed() const { return structural && local && global; }
  double certified_gap() const { return certified_lower - certified_upper; }
};

/// N3's strict inequality is tested as <= a - tol; the global check allows tol slack.
VerificationReport verify_witness(const GameSpec& game, const WitnessCertificate& cert, double tol);

/// min(eps/10, 1e-6)
double witness_tolerance(double eps);

}  // namespace ergocert
