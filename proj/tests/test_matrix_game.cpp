#include <random>

#include "doctest.h"
#include "ergocert/lp.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd a(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double e : r) a(i, j++) = e;
    ++i;
  }
  return a;
}

void check_saddle(const Eigen::MatrixXd& a, const MatrixGameSolution& s, double tol) {
  const Eigen::Map<const Eigen::VectorXd> row(s.row_strategy.data(), a.rows());
  const Eigen::Map<const Eigen::VectorXd> col(s.col_strategy.data(), a.cols());
  CHECK(row.minCoeff() >= -1e-12);
  CHECK(col.minCoeff() >= -1e-12);
  CHECK(std::abs(row.sum() - 1.0) <= 1e-12);
  CHECK(std::abs(col.sum() - 1.0) <= 1e-12);
  CHECK((a * col).maxCoeff() <= s.value + tol);
  CHECK((row.transpose() * a).minCoeff() >= s.value - tol);
  CHECK(s.duality_gap <= tol);
}

}  // namespace

TEST_CASE("1x1 game") {
  const auto s = solve_matrix_game(mat({{4.5}}));
  CHECK(s.value == 4.5);
  CHECK(s.row_strategy == std::vector<double>{1.0});
  CHECK(s.col_strategy == std::vector<double>{1.0});
}

TEST_CASE("matching pennies") {
  const auto s = solve_matrix_game(mat({{1, -1}, {-1, 1}}));
  CHECK(s.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.row_strategy[0] == doctest::Approx(0.5));
  CHECK(s.col_strategy[0] == doctest::Approx(0.5));
}

TEST_CASE("2x2 game [[3,1],[0,2]] matches the equalization formula") {
  const Eigen::MatrixXd a = mat({{3, 1}, {0, 2}});
  const auto s = solve_matrix_game(a);
  CHECK(std::abs(s.value - 1.5) <= 1e-10);
  CHECK(std::abs(s.row_strategy[0] - 0.5) <= 1e-10);
  CHECK(std::abs(s.row_strategy[1] - 0.5) <= 1e-10);
  CHECK(std::abs(s.col_strategy[0] - 0.25) <= 1e-10);
  CHECK(std::abs(s.col_strategy[1] - 0.75) <= 1e-10);
}

TEST_CASE("exact solve renders rationals") {
  const auto s = solve_matrix_game_exact(mat({{3, 1}, {0, 2}}));
  CHECK(s.value == "3/2");
  CHECK(s.row_strategy == std::vector<std::string>{"1/2", "1/2"});
  CHECK(s.col_strategy == std::vector<std::string>{"1/4", "3/4"});
}

TEST_CASE("random 2x2 games agree with the closed form") {
  std::mt19937_64 rng(21);
  int mixed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::MatrixXd a = random_matrix(2, 2, rng);
    const double lower = std::max(a.row(0).minCoeff(), a.row(1).minCoeff());
    const double upper = std::min(a.col(0).maxCoeff(), a.col(1).maxCoeff());
    double value = lower;
    if (lower < upper) {
      ++mixed;
      value = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / (a(0, 0) + a(1, 1) - a(0, 1) - a(1, 0));
    }
    CHECK(std::abs(solve_matrix_game(a).value - value) <= 1e-10);
  }
  CHECK(mixed > 20);
}

TEST_CASE("random games up to 6x6 satisfy the saddle-point check") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::MatrixXd a = random_matrix(1 + rng() % 6, 1 + rng() % 6, rng);
    check_saddle(a, solve_matrix_game(a), 1e-9);
  }
}

TEST_CASE("shift equivariance, transpose duality and monotonicity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd a = random_matrix(1 + rng() % 5, 1 + rng() % 5, rng);
    const double c = std::uniform_real_distribution<double>(-10, 10)(rng);
    const double v = solve_matrix_game(a).value;
    CHECK(solve_matrix_game(a.array() + c).value == doctest::Approx(v + c).epsilon(1e-9));
    CHECK(solve_matrix_game(-a.transpose()).value == doctest::Approx(-v).epsilon(1e-9));
    Eigen::MatrixXd b = a;
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] += std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(solve_matrix_game(b).value >= v - 1e-9);
  }
}

TEST_CASE("degenerate matrices") {
  check_saddle(mat({{0, 0}, {0, 0}}), solve_matrix_game(mat({{0, 0}, {0, 0}})), 1e-12);
  const Eigen::MatrixXd dup = mat({{1, 2, 2}, {1, 2, 2}, {3, 0, 0}});
  check_saddle(dup, solve_matrix_game(dup), 1e-9);
  const Eigen::MatrixXd big = mat({{1e6, -1e6}, {-1e6, 1e6}});
  check_saddle(big, solve_matrix_game(big), 1e-3);
}

TEST_CASE("local_value examples") {
  const GameSpec g = matrix_as_game({{2.0}});
  CHECK(local_value(g, 0, Potential{99.0}).value == 2.0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec r = random_game(4, 3, 4, 8, 400 + trial);
    Potential x(4), y(4);
    for (std::size_t v = 0; v < 4; ++v) y[v] = (x[v] = std::uniform_real_distribution<double>(-9, 9)(rng)) + 3.5;
    for (StateId v = 0; v < 4; ++v)
      CHECK(local_value(r, v, x).value == doctest::Approx(local_value(r, v, y).value).epsilon(1e-10));
    // pumping v itself moves m^v by at most delta
    const double delta = 1.7;
    for (StateId v = 0; v < 4; ++v) {
      Potential z = x;
      z[v] -= delta;
      CHECK(std::abs(local_value(r, v, z).value - local_value(r, v, x).value) <= delta + 1e-9);
    }
  }
}

TEST_CASE("serial and parallel local sweeps agree bitwise") {
  const GameSpec g = random_game(12, 4, 8, 8, 77);
  Potential x(12);
  for (std::size_t v = 0; v < 12; ++v) x[v] = static_cast<double>(v) * 0.37 - 2.0;
  const auto a = local_values_serial(g, x);
  const auto b = local_values_parallel(g, x);
  for (std::size_t v = 0; v < 12; ++v) {
    CHECK(a[v].value == b[v].value);
    CHECK(a[v].row_strategy == b[v].row_strategy);
  }
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  using ergocert::lp::solve;
  using ergocert::lp::Status;
  // x <= -1 with x >= 0
  CHECK(solve<double>({{1.0}}, {-1.0}, {1.0}).status == Status::Infeasible);
  // max x with -x <= 1
  CHECK(solve<double>({{-1.0}}, {1.0}, {1.0}).status == Status::Unbounded);
  const auto r = solve<double>({{1.0, 1.0}, {1.0, 3.0}}, {4.0, 6.0}, {1.0, 2.0});
  CHECK(r.status == Status::Optimal);
  CHECK(r.objective == doctest::Approx(5.0));
}
