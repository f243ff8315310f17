#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ergocert/driver.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/game.hpp"
#include "ergocert/markov.hpp"
#include "ergocert/oracle.hpp"

namespace ergocert {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGameFormat = "ergocert-game/1";
inline constexpr const char* kCertificateFormat = "ergocert-certificate/1";
inline constexpr const char* kProfileFormat = "ergocert-profile/1";

/// Collects up to 20 syntax and validation messages.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<std::string> msgs);
  std::vector<std::string> messages;
};

inline constexpr std::size_t kMaxReportedErrors = 20;

/// Game document:
///   {"format": "ergocert-game/1", "states": [names],
///    "actions": {state: {"player1": [labels], "player2": [labels]}},
///    "transitions": [{"from", "k", "l", "to", "p": "a/b" or decimal string, "r": number}]}
/// Syntax errors carry line:column; semantic errors carry the transition record index.
GameSpec parse_game(std::string_view text);
std::string serialize_game(const GameSpec& game);

/// Rounds to 12 significant digits; used for every number written by the tools.
double round12(double v);
Json number12(double v);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t h);
/// Hash of the 12-digit rendering of a potential.
std::string potential_hash(const Potential& x);

struct GenParams {
  std::size_t n = 4;
  std::size_t N = 2;
  long long W = 4;
  long long R = 8;
  double reward_a = 0.0;
  double reward_b = 10.0;
  std::size_t rows = 2;
  std::size_t cols = 2;
};

/// kind in {random, big-match, disconnected, cycle, ergodic-extension}.
/// Throws std::invalid_argument on an unknown kind or invalid parameters.
GameSpec generate(std::string_view kind, const GenParams& params, std::uint64_t seed);

/// Everything the certificate records besides the verdict itself.
struct SolveMeta {
  double reward_offset = 0.0;
  bool exact = false;
  double dtol = 0.0;
  std::uint64_t hard_cap = 0;
  std::uint64_t cap_override = 0;  // 0 when unset
};

/// Certificate document for a verdict on the normalized game. All values are in normalized units;
/// subtract reward_offset to return to the original rewards.
Json certificate_json(const GameSpec& normalized, const DecideResult& result, const SolveMeta& meta);

struct CertificateCheck {
  bool passed = false;
  std::vector<std::string> messages;
  Json report;
};

/// Rechecks a certificate against the original game document alone.
CertificateCheck check_certificate(const GameSpec& original, const Json& certificate);

/// Profile document {"format": "ergocert-profile/1", "alpha": {state: [..]}, "beta": {state: [..]}};
/// states left out play uniformly.
StationaryProfile parse_profile(const GameSpec& game, std::string_view text);

Json trace_record(const GameSpec& game, const TraceEvent& event);

Json oracle_json(const GameSpec& game, const OracleReport& report);

/// Stable text rendering: two-space indent, trailing newline.
std::string dump(const Json& doc);

}  // namespace ergocert
