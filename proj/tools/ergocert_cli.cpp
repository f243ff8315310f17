// ergocert command-line interface.
//
// Exit codes: solve 0 ergodic / 2 non-ergodic / 3 inconclusive; verify 0 pass / 1 fail;
// 64 usage, 65 invalid input document, 66 I/O.

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ergocert/driver.hpp"
#include "ergocert/io.hpp"
#include "ergocert/oracle.hpp"

namespace fs = std::filesystem;
using namespace ergocert;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitIo = 66;

struct IoFailure {
  std::string what;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoFailure{"cannot write " + path};
}

GameSpec load_game(const std::string& path) { return parse_game(read_file(path)); }

struct SolveOptions {
  double eps = 0.05;
  bool trace = false;
  std::uint64_t cap = 0;
  std::uint64_t outer_cap = 0;
  std::uint64_t hard_cap = kDefaultHardCap;
  bool exact = false;
};

int exit_code(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Ergodic:
      return 0;
    case Verdict::Kind::NonErgodic:
      return 2;
    case Verdict::Kind::Inconclusive:
      return 3;
  }
  return 3;
}

// Solves one game and returns (certificate text, exit code).
std::pair<std::string, int> solve_one(const GameSpec& original, const SolveOptions& so) {
  const NormalizedGame norm = normalize_rewards(original);
  DriverConfig cfg;
  cfg.hard_cap = so.hard_cap;
  cfg.lp.exact = so.exact;
  if (so.cap) cfg.cap_override = so.cap;
  if (so.outer_cap) cfg.outer_cap = so.outer_cap;
  if (so.trace) {
    cfg.trace = [&](const TraceEvent& ev) {
      const std::string line = trace_record(norm.game, ev).dump() + "\n";
#pragma omp critical(ergocert_trace)
      std::cerr << line;
    };
  }
  const DecideResult res = decide_ergodicity(norm.game, so.eps, cfg);
  SolveMeta meta;
  meta.reward_offset = norm.offset;
  meta.exact = so.exact;
  meta.dtol = default_dtol(so.eps);
  meta.hard_cap = so.hard_cap;
  meta.cap_override = so.cap;
  return {dump(certificate_json(norm.game, res, meta)), exit_code(res.verdict.kind)};
}

int run_solve(const std::vector<std::string>& games, const std::string& out, const std::string& out_dir,
              const SolveOptions& so, int jobs) {
  if (!(so.eps > 0.0)) {
    std::cerr << "error: --epsilon must be positive\n";
    return kExitUsage;
  }
  if (games.size() == 1 && out_dir.empty()) {
    const auto [text, code] = solve_one(load_game(games[0]), so);
    write_output(out, text);
    return code;
  }
  if (out_dir.empty()) {
    std::cerr << "error: several games need --out-dir\n";
    return kExitUsage;
  }
  std::vector<GameSpec> loaded;
  for (const auto& g : games) loaded.push_back(load_game(g));
  std::vector<std::string> texts(games.size());
  std::vector<int> codes(games.size(), 0);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t i = 0; i < games.size(); ++i) std::tie(texts[i], codes[i]) = solve_one(loaded[i], so);
  int worst = 0;
  for (std::size_t i = 0; i < games.size(); ++i) {
    const fs::path target = fs::path(out_dir) / (fs::path(games[i]).stem().string() + ".cert.json");
    write_output(target.string(), texts[i]);
    std::cout << games[i] << " " << codes[i] << "\n";
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int run_verify(const std::string& game_path, const std::string& cert_path) {
  const GameSpec game = load_game(game_path);
  Json cert;
  try {
    cert = Json::parse(read_file(cert_path));
  } catch (const Json::parse_error& e) {
    std::cerr << "error: certificate is not valid JSON: " << e.what() << "\n";
    return 1;
  }
  const CertificateCheck check = check_certificate(game, cert);
  std::cout << dump(check.report);
  return check.passed ? 0 : 1;
}

int run_eval(const std::string& game_path, const std::string& profile_path) {
  const GameSpec game = load_game(game_path);
  const StationaryProfile prof = parse_profile(game, read_file(profile_path));
  const MarkovEvaluation ev = evaluate_stationary_pair(game, prof);
  Json doc;
  Json g = Json::object();
  for (StateId v = 0; v < game.size(); ++v) g[game[v].name] = number12(ev.g[static_cast<Eigen::Index>(v)]);
  doc["g"] = std::move(g);
  std::cout << dump(doc);
  return 0;
}

int run_oracle(const std::string& game_path, std::uint64_t budget, std::uint64_t mc_steps, std::size_t mc_seeds,
               std::uint64_t seed) {
  const GameSpec game = load_game(game_path);
  OracleReport rep = enumerate_pure_bounds(game, budget);
  if (mc_steps > 0) {
    const StationaryProfile uniform = StationaryProfile::uniform(game);
    for (StateId v = 0; v < game.size(); ++v)
      rep.monte_carlo.push_back(estimate_mean_payoff(game, uniform, v, mc_steps, mc_seeds, seed));
  }
  std::cout << dump(oracle_json(game, rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide 24eps-ergodicity of zero-sum stochastic games"};
  app.require_subcommand(1);
  int jobs = 1;
  std::uint64_t seed = 1;
  app.add_option("--jobs", jobs, "Parallel jobs for multi-file batches")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for all randomness");

  SolveOptions so;
  std::vector<std::string> solve_games;
  std::string solve_out, solve_out_dir;
  auto* solve = app.add_subcommand("solve", "Decide ergodicity and write a certificate");
  solve->add_option("game", solve_games, "Game document(s)")->required();
  solve->add_option("--epsilon,-e", so.eps, "Tolerance eps")->required();
  solve->add_flag("--trace", so.trace, "Write one JSON record per pump iteration to stderr");
  solve->add_option("--cap", so.cap, "Lower the per-call pump iteration cap");
  solve->add_option("--outer-cap", so.outer_cap, "Override the outer iteration bound");
  solve->add_option("--hard-cap", so.hard_cap, "Ceiling for the computed pump cap");
  solve->add_flag("--exact", so.exact, "Solve local matrix games in exact rational arithmetic");
  solve->add_option("--output,-o", solve_out, "Certificate path (default stdout)");
  solve->add_option("--out-dir", solve_out_dir, "Directory for batch certificates");

  std::string verify_game, verify_cert;
  auto* verify = app.add_subcommand("verify", "Recheck a certificate from the game and certificate alone");
  verify->add_option("game", verify_game)->required();
  verify->add_option("certificate", verify_cert)->required();

  std::string eval_game, eval_profile;
  auto* eval = app.add_subcommand("eval", "Mean payoffs of a stationary profile");
  eval->add_option("game", eval_game)->required();
  eval->add_option("profile", eval_profile)->required();

  std::string oracle_game;
  std::uint64_t budget = kDefaultOracleBudget, mc_steps = 0;
  std::size_t mc_seeds = 10;
  auto* oracle = app.add_subcommand("oracle", "Pure-strategy value bounds by enumeration");
  oracle->add_option("game", oracle_game)->required();
  oracle->add_option("--budget", budget, "Maximum number of pure profiles");
  oracle->add_option("--mc-steps", mc_steps, "Monte-Carlo steps per trajectory for the uniform profile (0 = off)");
  oracle->add_option("--mc-seeds", mc_seeds, "Monte-Carlo trajectories per state");

  std::string kind, gen_out;
  GenParams gp;
  auto* gen = app.add_subcommand("gen", "Generate a game document");
  gen->add_option("kind", kind, "random | big-match | disconnected | cycle | ergodic-extension")->required();
  gen->add_option("--n", gp.n, "States (random, cycle)");
  gen->add_option("--N", gp.N, "Maximum actions per player (random)");
  gen->add_option("--W", gp.W, "Probability grid 1/W (random)");
  gen->add_option("--R", gp.R, "Reward bound");
  gen->add_option("--a", gp.reward_a, "First reward (disconnected)");
  gen->add_option("--b", gp.reward_b, "Second reward (disconnected)");
  gen->add_option("--rows", gp.rows, "Matrix rows (ergodic-extension)");
  gen->add_option("--cols", gp.cols, "Matrix columns (ergodic-extension)");
  gen->add_option("--output,-o", gen_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return run_solve(solve_games, solve_out, solve_out_dir, so, jobs);
    if (*verify) return run_verify(verify_game, verify_cert);
    if (*eval) return run_eval(eval_game, eval_profile);
    if (*oracle) return run_oracle(oracle_game, budget, mc_steps, mc_seeds, seed);
    if (*gen) {
      try {
        write_output(gen_out, serialize_game(generate(kind, gp, seed)));
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
      }
      return 0;
    }
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    for (const auto& m : e.messages) std::cerr << "error: " << m << "\n";
    return kExitData;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
