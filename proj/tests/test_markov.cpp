#include <random>

#include "doctest.h"
#include "ergocert/errors.hpp"
#include "ergocert/oracle.hpp"
#include "support.hpp"

using namespace testing;

namespace {

double identity_error(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  return std::max({(q * p - q).cwiseAbs().maxCoeff(), (p * q - q).cwiseAbs().maxCoeff(),
                   (q * q - q).cwiseAbs().maxCoeff()});
}

Eigen::MatrixXd random_chain(std::size_t n, std::mt19937_64& rng) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t support = 1 + rng() % 3;
    for (std::size_t s = 0; s < support; ++s) p(i, rng() % n) += u(rng) + 0.05;
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

}  // namespace

TEST_CASE("induced_chain examples") {
  SUBCASE("pure deterministic") {
    const GameSpec g = two_cycle(0, 4);
    const Eigen::MatrixXd p = induced_chain(g, StationaryProfile::uniform(g));
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
  }
  SUBCASE("uniform over four distinct successors") {
    Builder b;
    b.state("v", 2, 2);
    for (int i = 0; i < 4; ++i) b.state("t" + std::to_string(i));
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t l = 0; l < 2; ++l) b.arc(0, k, l, 1 + 2 * k + l, 1, 1, 0.0);
    for (StateId t = 1; t <= 4; ++t) b.arc(t, 0, 0, t, 1, 1, 0.0);
    const GameSpec g = b.build();
    const Eigen::MatrixXd p = induced_chain(g, StationaryProfile::uniform(g));
    for (int t = 1; t <= 4; ++t) CHECK(p(0, t) == doctest::Approx(0.25));
    CHECK(p.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single state") {
    const GameSpec g = matrix_as_game({{1, 2}});
    const Eigen::MatrixXd p = induced_chain(g, StationaryProfile::uniform(g));
    CHECK(p.rows() == 1);
    CHECK(p(0, 0) == 1.0);
  }
}

TEST_CASE("limiting_matrix examples") {
  CHECK((limiting_matrix(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  Eigen::MatrixXd cyc(2, 2);
  cyc << 0, 1, 1, 0;
  CHECK((limiting_matrix(cyc) - Eigen::MatrixXd::Constant(2, 2, 0.5)).norm() < 1e-12);
  Eigen::MatrixXd fork(3, 3);
  fork << 0, 0.5, 0.5, 0, 1, 0, 0, 0, 1;
  const Eigen::MatrixXd q = limiting_matrix(fork);
  CHECK(q(0, 0) == doctest::Approx(0.0));
  CHECK(q(0, 1) == doctest::Approx(0.5));
  CHECK(q(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("limiting matrix identities on random chains") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd p = random_chain(2 + rng() % 7, rng);
    const Eigen::MatrixXd q = limiting_matrix(p);
    CHECK(identity_error(p, q) <= 1e-8);
    CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("limiting matrix agrees with Cesaro-averaged powers") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const Eigen::MatrixXd p = random_chain(n, rng);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n), sum = Eigen::MatrixXd::Zero(n, n);
    const int steps = 20000;
    for (int t = 0; t < steps; ++t) {
      sum += power;
      power = power * p;
    }
    CHECK((sum / steps - limiting_matrix(p)).cwiseAbs().maxCoeff() < 5e-3);
  }
}

TEST_CASE("evaluate_stationary_pair examples") {
  const GameSpec cyc = two_cycle(0, 4);
  const auto ev = evaluate_stationary_pair(cyc, StationaryProfile::uniform(cyc));
  CHECK(ev.g(0) == doctest::Approx(2.0));
  CHECK(ev.g(1) == doctest::Approx(2.0));
  const GameSpec abs = matrix_as_game({{3.25}});
  CHECK(evaluate_stationary_pair(abs, StationaryProfile::uniform(abs)).g(0) == doctest::Approx(3.25));
}

TEST_CASE("evaluate_stationary_pair matches a long simulation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const GameSpec g = random_game(3, 2, 4, 8, 500 + trial);
    const StationaryProfile prof = random_pure_profile(g, rng);
    const auto ev = evaluate_stationary_pair(g, prof);
    for (StateId v = 0; v < 3; ++v)
      CHECK(std::abs(simulate_mean_payoff(g, prof, v, 1'000'000, 1000 + trial) - ev.g(v)) < 1e-2);
  }
}

TEST_CASE("potential invariance with large potentials") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec g = random_game(4, 3, 4, 8, 600 + trial);
    Potential x(4);
    for (double& e : x) e = std::uniform_real_distribution<double>(-1000, 1000)(rng);
    const StationaryProfile prof = random_profile(g, rng);
    const auto g0 = evaluate_stationary_pair(g, prof).g;
    const auto g1 = evaluate_stationary_pair(apply_potential(g, x), prof).g;
    CHECK((g0 - g1).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("reward shift moves every mean payoff by the same constant") {
  std::mt19937_64 rng(29);
  const GameSpec g = random_game(4, 2, 4, 8, 701);
  const StationaryProfile prof = random_profile(g, rng);
  const auto g0 = evaluate_stationary_pair(g, prof).g;
  const auto g1 = evaluate_stationary_pair(shift_rewards(g, 2.5), prof).g;
  CHECK(((g1 - g0).array() - 2.5).abs().maxCoeff() < 1e-9);
}

TEST_CASE("best_response_value examples") {
  SUBCASE("single state reduces to one-step optimization") {
    const GameSpec g = matrix_as_game({{1, 5}, {4, 2}});
    const StationaryStrategy beta{{0.5, 0.5}};
    const BestResponse br = best_response_value(g, beta, Role::Maximizer);
    CHECK(br.value(0) == doctest::Approx(3.0));
    const StationaryStrategy alpha{{0.25, 0.75}};
    CHECK(best_response_value(g, alpha, Role::Minimizer).value(0) == doctest::Approx(std::min(3.25, 2.75)));
  }
  SUBCASE("identical rows make the choice irrelevant") {
    const GameSpec g = matrix_as_game({{1, 3}, {1, 3}});
    const StationaryStrategy beta{{0.5, 0.5}};
    CHECK(best_response_value(g, beta, Role::Maximizer).value(0) == doctest::Approx(2.0));
  }
  SUBCASE("2-state MDP matches enumeration of its four policies") {
    Builder b;
    b.state("a", 2, 1);
    b.state("c", 2, 1);
    b.arc(0, 0, 0, 0, 1, 1, 1.0).arc(0, 1, 0, 1, 1, 1, 0.0);
    b.arc(1, 0, 0, 1, 1, 1, 3.0).arc(1, 1, 0, 0, 1, 2, 5.0).arc(1, 1, 0, 1, 1, 2, 0.0);
    const GameSpec g = b.build();
    Eigen::VectorXd best = Eigen::VectorXd::Constant(2, -1e9);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        best = best.cwiseMax(evaluate_stationary_pair(g, StationaryProfile::pure(g, {i, j}, {0, 0})).g);
    const BestResponse br = best_response_value(g, StationaryStrategy{{1.0}, {1.0}}, Role::Maximizer);
    CHECK((br.value - best).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("best responses dominate random profiles") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const GameSpec g = random_game(3 + rng() % 2, 3, 4, 8, 800 + trial);
    const StationaryProfile prof = random_profile(g, rng);
    const auto gv = evaluate_stationary_pair(g, prof).g;
    CHECK((best_response_value(g, prof.beta, Role::Maximizer).value - gv).minCoeff() >= -1e-8);
    CHECK((gv - best_response_value(g, prof.alpha, Role::Minimizer).value).minCoeff() >= -1e-8);
  }
}

TEST_CASE("brute-force bounds") {
  SUBCASE("1-state matrix game brackets the value") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::MatrixXd a = random_matrix(2 + rng() % 2, 2 + rng() % 2, rng);
      std::vector<std::vector<double>> rows(a.rows(), std::vector<double>(a.cols()));
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
      const PureBounds b = brute_force_game_bounds(matrix_as_game(rows));
      const double v = solve_matrix_game(a).value;
      CHECK(b.lo[0] <= v + 1e-9);
      CHECK(b.hi[0] >= v - 1e-9);
      CHECK(b.lo[0] == doctest::Approx(a.rowwise().minCoeff().maxCoeff()));
    }
  }
  SUBCASE("disconnected states") {
    GenParams p;
    const PureBounds b = brute_force_game_bounds(generate("disconnected", p, 1));
    CHECK(b.lo == std::vector<double>{0.0, 10.0});
    CHECK(b.hi == std::vector<double>{0.0, 10.0});
  }
  SUBCASE("big match has a stationary gap at the live state") {
    const PureBounds b = brute_force_game_bounds(generate("big-match", GenParams{}, 1));
    CHECK(b.lo[0] < b.hi[0] - 0.5);
  }
  SUBCASE("budget") {
    CHECK_THROWS_WITH_AS(brute_force_game_bounds(random_game(5, 3, 2, 8, 3), 10), "instance too large for oracle",
                         BudgetError);
  }
  SUBCASE("serial and parallel enumeration agree") {
    const GameSpec g = random_game(4, 3, 2, 8, 41);
    const PureBounds s = brute_force_game_bounds_serial(g, 1'000'000);
    const PureBounds q = brute_force_game_bounds_parallel(g, 1'000'000);
    CHECK(s.lo == q.lo);
    CHECK(s.hi == q.hi);
    CHECK(s.lo_argmax == q.lo_argmax);
  }
}

TEST_CASE("decode_pure is mixed radix") {
  CHECK(decode_pure(5, {2, 3}) == std::vector<std::size_t>{1, 2});
  CHECK(decode_pure(0, {4, 4}) == std::vector<std::size_t>{0, 0});
}
