#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergocert/game.hpp"
#include "ergocert/matrix_game.hpp"
#include "ergocert/pump.hpp"
#include "ergocert/witness.hpp"

namespace ergocert {

inline constexpr std::uint64_t kDefaultHardCap = 20'000'000;

struct IterationCap {
  std::uint64_t cap = 1;
  bool saturated = false;
};

/// min(2 n kappa + 1, ceiling) with kappa = (n N W R / eps)^(2^n - 1) n^2 R / delta,
/// evaluated in log space so overflow saturates at the ceiling.
IterationCap compute_iteration_cap(const GameParams& params, double delta, double eps,
                                   std::uint64_t ceiling = kDefaultHardCap);

/// ceil(log(R / 24 eps) / log(8/7)) + 1, or 1 when R <= 24 eps.
std::uint64_t outer_iteration_bound(double R, double eps);

struct ReduceResult {
  Potential x;
  /// False when the LP heuristic failed and the mean-centered input was returned.
  bool reduced = false;
};

/// Shrinks the potential while keeping every local value inside [m_minus - dtol, m_plus + dtol].
/// Fixes the current local optimal strategies, minimizes ||x'||_inf over the resulting linear
/// system, and repeats once from the new point. Falls back to x - mean(x).
ReduceResult reduce_potential(const GameSpec& game, const Potential& x, double m_minus, double m_plus, double dtol,
                              const MatrixGameOptions& lp = {});

/// Pump iteration as seen by a driver-level observer.
struct TraceEvent {
  std::uint64_t outer = 0;
  int phase = 1;
  PumpIteration step;
};

struct DriverConfig {
  /// Band recheck tolerance; negative means min(eps/100, 1e-7).
  double dtol = -1.0;
  std::uint64_t hard_cap = kDefaultHardCap;
  /// Lowers the per-call pump cap below the computed one.
  std::optional<std::uint64_t> cap_override;
  /// Defaults to outer_iteration_bound(R, eps).
  std::optional<std::uint64_t> outer_cap;
  MatrixGameOptions lp;
  /// Potentials whose centered spread is at most this are only mean-centered; negative means max(1, R).
  double reduce_above = -1.0;
  std::function<void(const TraceEvent&)> trace;
};

struct OuterRecord {
  double m_minus = 0.0;
  double m_plus = 0.0;
  /// "phase1-collapse", "phase2-collapse", "witness", "ergodic", "inconclusive"
  std::string outcome;
  std::uint64_t phase1_iterations = 0;
  std::uint64_t phase2_iterations = 0;
  std::uint64_t phase1_cap = 0;
  std::uint64_t phase2_cap = 0;
  bool potential_reduced = false;
};

struct DriverStats {
  std::uint64_t outer_iterations = 0;
  std::uint64_t outer_cap = 0;
  bool cap_saturated = false;
  std::vector<OuterRecord> outer;
  double wall_seconds = 0.0;
};

struct Verdict {
  enum class Kind { Ergodic, NonErgodic, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Potential x;
  double m_minus = 0.0;
  double m_plus = 0.0;
  double eps = 0.0;
  // Non-ergodic only.
  StateSet I;
  StateSet F;
  double a_prime = 0.0;
  double b_prime = 0.0;
  int witness_phase = 0;
  std::optional<WitnessCertificate> witness;
  std::optional<VerificationReport> verification;
  // Inconclusive only.
  std::string reason;
};

struct DecideResult {
  Verdict verdict;
  DriverStats stats;
};

/// Decides 24eps-ergodicity of a game with non-negative rewards.
DecideResult decide_ergodicity(const GameSpec& game, double eps, const DriverConfig& config = {});

double default_dtol(double eps);

const char* to_string(Verdict::Kind kind);

}  // namespace ergocert
