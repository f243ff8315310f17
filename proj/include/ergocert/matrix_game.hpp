#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergocert/game.hpp"

namespace ergocert {

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  /// max_k (A col)_k - min_l (row^T A)_l, non-negative up to rounding.
  double duality_gap = 0.0;
};

/// Exact solve; strategies are rendered as "p/q" strings.
struct ExactMatrixGameSolution {
  MatrixGameSolution approx;
  std::string value;
  std::vector<std::string> row_strategy;
  std::vector<std::string> col_strategy;
};

struct MatrixGameOptions {
  double tol = 1e-9;
  /// Solve in exact rational arithmetic (tiny matrices only).
  bool exact = false;
};

/// Minimax value and optimal mixed strategies of the row-maximizer game A.
/// Throws LpError("LP did not converge") if the pivot budget runs out.
MatrixGameSolution solve_matrix_game(const Eigen::MatrixXd& a, const MatrixGameOptions& opt = {});

ExactMatrixGameSolution solve_matrix_game_exact(const Eigen::MatrixXd& a);

/// Value of the local matrix game A^v(x).
MatrixGameSolution local_value(const GameSpec& game, StateId v, const Potential& x,
                               const MatrixGameOptions& opt = {});

/// Per-state local solutions for every state of the game.
std::vector<MatrixGameSolution> local_values_serial(const GameSpec& game, const Potential& x,
                                                    const MatrixGameOptions& opt = {});
/// OpenMP sweep over states; identical results to the serial sweep.
std::vector<MatrixGameSolution> local_values_parallel(const GameSpec& game, const Potential& x,
                                                      const MatrixGameOptions& opt = {});

/// Local values m^v(x) only, using the parallel sweep.
std::vector<double> local_value_vector(const GameSpec& game, const Potential& x, const MatrixGameOptions& opt = {});

}  // namespace ergocert
