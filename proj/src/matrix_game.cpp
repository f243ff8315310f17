#include "ergocert/matrix_game.hpp"

#include <algorithm>
#include <exception>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "ergocert/errors.hpp"
#include "ergocert/lp.hpp"

namespace ergocert {

namespace {

void normalize(std::vector<double>& p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return;
  }
  for (double& v : p) v /= sum;
}

void finish(const Eigen::MatrixXd& a, MatrixGameSolution& sol) {
  const Eigen::Map<const Eigen::VectorXd> row(sol.row_strategy.data(), static_cast<Eigen::Index>(sol.row_strategy.size()));
  const Eigen::Map<const Eigen::VectorXd> col(sol.col_strategy.data(), static_cast<Eigen::Index>(sol.col_strategy.size()));
  const double lower = (row.transpose() * a).minCoeff();
  const double upper = (a * col).maxCoeff();
  sol.duality_gap = std::max(0.0, upper - lower);
  sol.value = std::clamp(sol.value, std::min(lower, upper), std::max(lower, upper));
}

}  // namespace

MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& a, const MatrixGameOptions& opt) {
  if (opt.exact) return solve_matrix_game_exact(a).approx;

  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  MatrixGameSolution sol;

  if (rows == 1 || cols == 1) {
    // Degenerate shapes: one player has no choice.
    sol.row_strategy.assign(rows, 0.0);
    sol.col_strategy.assign(cols, 0.0);
    if (rows == 1) {
      Eigen::Index j = 0;
      sol.value = a.row(0).minCoeff(&j);
      sol.row_strategy[0] = 1.0;
      sol.col_strategy[static_cast<std::size_t>(j)] = 1.0;
    } else {
      Eigen::Index i = 0;
      sol.value = a.col(0).maxCoeff(&i);
      sol.col_strategy[0] = 1.0;
      sol.row_strategy[static_cast<std::size_t>(i)] = 1.0;
    }
    finish(a, sol);
    return sol;
  }

  // Column player's LP on the positive shift A + s: max sum w, (A + s) w <= 1, w >= 0.
  // Optimal sum w = 1 / Val(A + s); the row duals give the row strategy.
  const double shift = 1.0 - a.minCoeff();
  lp::Matrix<double> m(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) + shift;
  const std::vector<double> b(rows, 1.0);
  const std::vector<double> c(cols, 1.0);
  const auto res = lp::solve(m, b, c);
  if (res.status != lp::Status::Optimal || !(res.objective > 0.0)) {
    throw LpError("LP did not converge", a.minCoeff(), a.maxCoeff());
  }

  sol.col_strategy = res.primal;
  sol.row_strategy = res.dual;
  normalize(sol.col_strategy);
  normalize(sol.row_strategy);
  sol.value = 1.0 / res.objective - shift;
  finish(a, sol);
  if (sol.duality_gap > std::max(opt.tol, 1e-9 * (1.0 + a.cwiseAbs().maxCoeff()))) {
    // Rounding drift at large magnitudes; the exact path is deterministic and cheap for small games.
    if (rows * cols <= 64) return solve_matrix_game_exact(a).approx;
    throw LpError("LP did not converge", sol.value - sol.duality_gap, sol.value + sol.duality_gap);
  }
  return sol;
}

ExactMatrixGameSolution solve_matrix_game_exact(const Eigen::MatrixXd& a) {
  using Q = boost::multiprecision::cpp_rational;
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());

  std::vector<std::vector<Q>> exact(rows, std::vector<Q>(cols));
  Q lo = Q(a(0, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      exact[i][j] = Q(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      if (exact[i][j] < lo) lo = exact[i][j];
    }
  const Q shift = Q(1) - lo;
  lp::Matrix<Q> m(rows, std::vector<Q>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = exact[i][j] + shift;
  const std::vector<Q> b(rows, Q(1));
  const std::vector<Q> c(cols, Q(1));
  const auto res = lp::solve(m, b, c);
  if (res.status != lp::Status::Optimal) throw LpError("LP did not converge", a.minCoeff(), a.maxCoeff());

  ExactMatrixGameSolution out;
  const Q total = res.objective;
  const Q value = Q(1) / total - shift;
  out.value = value.str();
  auto render = [&](const std::vector<Q>& raw, std::vector<std::string>& text, std::vector<double>& approx) {
    Q sum = 0;
    for (const Q& q : raw) sum += q;
    for (const Q& q : raw) {
      const Q p = q / sum;
      text.push_back(p.str());
      approx.push_back(p.convert_to<double>());
    }
  };
  render(res.primal, out.col_strategy, out.approx.col_strategy);
  render(res.dual, out.row_strategy, out.approx.row_strategy);
  out.approx.value = value.convert_to<double>();
  finish(a, out.approx);
  return out;
}

MatrixGameSolution local_value(const GameSpec& game, StateId v, const Potential& x, const MatrixGameOptions& opt) {
  return solve_matrix_game(local_reward_matrix(game, v, x), opt);
}

std::vector<MatrixGameSolution> local_values_serial(const GameSpec& game, const Potential& x,
                                                    const MatrixGameOptions& opt) {
  std::vector<MatrixGameSolution> out(game.size());
  for (StateId v = 0; v < game.size(); ++v) out[v] = local_value(game, v, x, opt);
  return out;
}

std::vector<MatrixGameSolution> local_values_parallel(const GameSpec& game, const Potential& x,
                                                      const MatrixGameOptions& opt) {
  const auto n = static_cast<long>(game.size());
  std::vector<MatrixGameSolution> out(game.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (n > 4)
  for (long v = 0; v < n; ++v) {
    try {
      out[static_cast<std::size_t>(v)] = local_value(game, static_cast<StateId>(v), x, opt);
    } catch (...) {
#pragma omp critical(ergocert_local_values)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> local_value_vector(const GameSpec& game, const Potential& x, const MatrixGameOptions& opt) {
  const auto sols = local_values_parallel(game, x, opt);
  std::vector<double> m(sols.size());
  for (std::size_t v = 0; v < sols.size(); ++v) m[v] = sols[v].value;
  return m;
}

}  // namespace ergocert
