#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace testing;

TEST_CASE("validate accepts a single self-loop state") {
  Builder b;
  b.state("v");
  b.arc(0, 0, 0, 0, 1, 1, 0.0);
  CHECK(validate(b.build()).ok());
}

TEST_CASE("validate reports a row summing to 0.9") {
  Builder b;
  b.state("v");
  b.state("u");
  b.arc(0, 0, 0, 0, 9, 10, 0.0);
  b.arc(1, 0, 0, 1, 1, 1, 0.0);
  const auto rep = validate(b.build());
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0] == "non-stopping condition fails at (v,k0,l0)");
}

TEST_CASE("validate reports a negative probability") {
  GameSpec g;
  State s;
  s.name = "v";
  s.actions1 = {"a"};
  s.actions2 = {"b"};
  s.cells = {{Transition{0, -0.1, std::nullopt, 0.0}, Transition{0, 1.1, std::nullopt, 0.0}}};
  g.states.push_back(s);
  const auto rep = validate(g);
  CHECK_FALSE(rep.ok());
  CHECK(std::find_if(rep.violations.begin(), rep.violations.end(), [](const std::string& m) {
          return m.find("probability out of range") != std::string::npos;
        }) != rep.violations.end());
}

TEST_CASE("validate reports empty action sets") {
  GameSpec g;
  State s;
  s.name = "v";
  s.actions1 = {"a"};
  g.states.push_back(s);
  CHECK_FALSE(validate(g).ok());
}

TEST_CASE("normalize_rewards shifts negative rewards") {
  Builder b;
  b.state("v", 2, 1);
  b.arc(0, 0, 0, 0, 1, 1, -3.0).arc(0, 1, 0, 0, 1, 1, 5.0);
  const NormalizedGame ng = normalize_rewards(b.build());
  CHECK(ng.offset == doctest::Approx(3.0));
  CHECK(min_reward(ng.game) == doctest::Approx(0.0));
  CHECK(max_reward(ng.game) == doctest::Approx(8.0));
  CHECK(game_params(ng.game).R == doctest::Approx(8.0));
}

TEST_CASE("normalize_rewards leaves non-negative rewards alone") {
  const GameSpec g = two_cycle(1.0, 4.0);
  const NormalizedGame ng = normalize_rewards(g);
  CHECK(ng.offset == 0.0);
  CHECK(ng.game.states[0].cells[0][0].reward == 1.0);
  CHECK(ng.game.states[1].cells[0][0].reward == 4.0);
}

TEST_CASE("normalize_rewards on a constant negative game gives all-zero values") {
  Builder b;
  b.state("v", 2, 2);
  b.state("u");
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) b.arc(0, k, l, 1, 1, 1, -2.5);
  b.arc(1, 0, 0, 0, 1, 1, -2.5);
  const NormalizedGame ng = normalize_rewards(b.build());
  CHECK(ng.offset == doctest::Approx(2.5));
  for (double m : local_value_vector(ng.game, Potential(2, 0.0))) CHECK(m == doctest::Approx(0.0));
}

TEST_CASE("normalization shifts local values by exactly the offset") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec g = shift_rewards(random_game(3, 3, 4, 8, 100 + trial), -4.0);
    const NormalizedGame ng = normalize_rewards(g);
    Potential x(3);
    for (double& e : x) e = std::uniform_real_distribution<double>(-5, 5)(rng);
    const auto m0 = local_value_vector(g, x);
    const auto m1 = local_value_vector(ng.game, x);
    for (std::size_t v = 0; v < 3; ++v) CHECK(m1[v] - ng.offset == doctest::Approx(m0[v]).epsilon(1e-12));
  }
}

TEST_CASE("game_params computes W from the smallest probability") {
  Builder b;
  b.state("v");
  b.state("u");
  b.arc(0, 0, 0, 0, 1, 3, 0.0).arc(0, 0, 0, 1, 2, 3, 0.0).arc(1, 0, 0, 1, 1, 1, 0.0);
  CHECK(game_params(b.build()).W == 3);
}

TEST_CASE("game_params of a deterministic game has W = 1") {
  CHECK(game_params(two_cycle(0, 1)).W == 1);
}

TEST_CASE("game_params counts states and actions") {
  Builder b;
  b.state("v", 3, 2);
  b.state("u", 3, 2);
  for (StateId v = 0; v < 2; ++v)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t l = 0; l < 2; ++l) b.arc(v, k, l, v, 1, 1, 1.0);
  const GameParams p = game_params(b.build());
  CHECK(p.n == 2);
  CHECK(p.N == 3);
}

TEST_CASE("game_params rejects probabilities without a rational form") {
  GameSpec g = two_cycle(0, 1);
  g.states[0].cells[0][0].exact.reset();
  g.states[0].cells[0][0].prob = 1.0 / 3.0;
  CHECK_THROWS_WITH_AS(game_params(g), "W undefined for irrational probability", std::domain_error);
}

TEST_CASE("local_reward_matrix examples") {
  SUBCASE("self-loop ignores the potential") {
    const GameSpec g = matrix_as_game({{1, 2}, {3, 4}});
    const Eigen::MatrixXd a = local_reward_matrix(g, 0, Potential{17.0});
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 1) == 4.0);
  }
  SUBCASE("single arc picks up x^v - x^u") {
    Builder b;
    b.state("v");
    b.state("u");
    b.arc(0, 0, 0, 1, 1, 1, 5.0).arc(1, 0, 0, 1, 1, 1, 0.0);
    CHECK(local_reward_matrix(b.build(), 0, Potential{2.0, 0.0})(0, 0) == doctest::Approx(7.0));
  }
  SUBCASE("symmetric split cancels") {
    Builder b;
    b.state("v");
    b.state("u");
    b.state("w");
    b.arc(0, 0, 0, 1, 1, 2, 0.0).arc(0, 0, 0, 2, 1, 2, 0.0).arc(1, 0, 0, 1, 1, 1, 0).arc(2, 0, 0, 2, 1, 1, 0);
    CHECK(local_reward_matrix(b.build(), 0, Potential{0.0, 2.0, -2.0})(0, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("local_reward_matrix is invariant under uniform potential shifts") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec g = random_game(4, 3, 4, 8, 200 + trial);
    Potential x(4), y(4);
    const double c = std::uniform_real_distribution<double>(-100, 100)(rng);
    for (std::size_t v = 0; v < 4; ++v) {
      x[v] = std::uniform_real_distribution<double>(-10, 10)(rng);
      y[v] = x[v] + c;
    }
    for (StateId v = 0; v < 4; ++v)
      CHECK((local_reward_matrix(g, v, x) - local_reward_matrix(g, v, y)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("apply_potential examples") {
  const GameSpec g = two_cycle(0.0, 0.0);
  SUBCASE("zero potential") {
    const GameSpec t = apply_potential(g, Potential{0.0, 0.0});
    CHECK(t.states[0].cells[0][0].reward == 0.0);
  }
  SUBCASE("uniform potential") {
    const GameSpec t = apply_potential(g, Potential{3.0, 3.0});
    CHECK(t.states[0].cells[0][0].reward == 0.0);
    CHECK(t.states[1].cells[0][0].reward == 0.0);
  }
  SUBCASE("two-cycle telescopes") {
    const GameSpec t = apply_potential(g, Potential{1.0, 0.0});
    CHECK(t.states[0].cells[0][0].reward == 1.0);
    CHECK(t.states[1].cells[0][0].reward == -1.0);
    const auto ev = evaluate_stationary_pair(t, StationaryProfile::uniform(t));
    CHECK(ev.g(0) == doctest::Approx(0.0));
    CHECK(ev.g(1) == doctest::Approx(0.0));
  }
}

TEST_CASE("apply_potential preserves mean payoffs of random profiles") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec g = random_game(4, 2, 4, 8, 300 + trial);
    Potential x(4);
    for (double& e : x) e = std::uniform_real_distribution<double>(-20, 20)(rng);
    const StationaryProfile prof = random_profile(g, rng);
    const auto g0 = evaluate_stationary_pair(g, prof).g;
    const auto g1 = evaluate_stationary_pair(apply_potential(g, x), prof).g;
    CHECK((g0 - g1).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("StateSet operations") {
  StateSet s = StateSet::of(4, {0, 2});
  CHECK(s.count() == 2);
  CHECK(s.complement() == StateSet::of(4, {1, 3}));
  CHECK(s.subset_of(StateSet::all(4)));
  CHECK(s.disjoint(StateSet::of(4, {1})));
  CHECK_FALSE(StateSet(4).count());
  CHECK(StateSet(4).empty());
}

TEST_CASE("Rational parsing") {
  CHECK(Rational::parse("2/4") == Rational{1, 2});
  CHECK(Rational::parse("0.125") == Rational{1, 8});
  CHECK(Rational::parse("1") == Rational{1, 1});
  CHECK_FALSE(Rational::parse("a/b").has_value());
  CHECK_FALSE(Rational::parse("1/0").has_value());
  CHECK((Rational{1, 3} + Rational{2, 3}) == Rational{1, 1});
}
