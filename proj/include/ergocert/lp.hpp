#pragma once

// Dense two-phase tableau simplex, templated on the scalar so the same code
// runs in double precision and in exact rational arithmetic.
//
//   maximize  c^T z   subject to  A z <= b,  z >= 0
//
// Pivoting uses Dantzig's rule and falls back to Bland's rule once a run of
// degenerate pivots is seen. Row ties break on the lowest basic index, so the
// output is deterministic for identical input.

#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace ergocert::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class Scalar>
struct Result {
  Status status = Status::IterationLimit;
  Scalar objective{};
  std::vector<Scalar> primal;
  /// Multipliers of the <= rows (valid for rows with b_i >= 0).
  std::vector<Scalar> dual;
  std::size_t pivots = 0;
};

template <class Scalar>
struct Options {
  /// Zero for exact scalars.
  Scalar eps = std::is_floating_point_v<Scalar> ? Scalar(1e-12) : Scalar(0);
  std::size_t max_pivots = 0;  // 0: derived from the problem size
  std::size_t degenerate_run_before_bland = 20;
};

template <class Scalar>
using Matrix = std::vector<std::vector<Scalar>>;

namespace detail {

template <class Scalar>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows + 1, std::vector<Scalar>(cols + 1, Scalar(0))), basis_(rows) {}

  Scalar& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return t_[r][c]; }
  Scalar& rhs(std::size_t r) { return t_[r].back(); }
  const Scalar& rhs(std::size_t r) const { return t_[r].back(); }
  std::size_t rows() const { return t_.size() - 1; }  // constraint rows are 1..rows()
  std::size_t cols() const { return t_[0].size() - 1; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Scalar inv = Scalar(1) / t_[pr][pc];
    for (auto& v : t_[pr]) v *= inv;
    t_[pr][pc] = Scalar(1);
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == pr) continue;
      const Scalar f = t_[r][pc];
      if (f == Scalar(0)) continue;
      for (std::size_t c = 0; c < t_[r].size(); ++c) t_[r][c] -= f * t_[pr][c];
      t_[r][pc] = Scalar(0);
    }
    basis_[pr - 1] = pc;
  }

  /// Runs the simplex on row 0 (stored as z - c^T x = 0, so negative entries improve).
  Status optimize(const std::vector<char>& allowed, const Options<Scalar>& opt, std::size_t& pivots,
                  std::size_t budget) {
    std::size_t degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= opt.degenerate_run_before_bland;
      std::size_t enter = cols();
      Scalar best = -opt.eps;
      for (std::size_t c = 0; c < cols(); ++c) {
        if (!allowed[c]) continue;
        const Scalar rc = t_[0][c];
        if (bland) {
          if (rc < -opt.eps) {
            enter = c;
            break;
          }
        } else if (rc < best) {
          best = rc;
          enter = c;
        }
      }
      if (enter == cols()) return Status::Optimal;

      std::size_t leave = 0;
      Scalar best_ratio{};
      for (std::size_t r = 1; r <= rows(); ++r) {
        const Scalar a = t_[r][enter];
        if (!(a > opt.eps)) continue;
        const Scalar ratio = t_[r].back() / a;
        if (leave == 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r - 1] < basis_[leave - 1])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == 0) return Status::Unbounded;
      if (pivots >= budget) return Status::IterationLimit;
      degenerate_run = (best_ratio == Scalar(0)) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++pivots;
    }
  }

 private:
  Matrix<Scalar> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

template <class Scalar>
Result<Scalar> solve(const Matrix<Scalar>& A, const std::vector<Scalar>& b, const std::vector<Scalar>& c,
                     const Options<Scalar>& opt = {}) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();

  std::vector<char> negated(m, 0);
  std::size_t artificial = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < Scalar(0)) {
      negated[i] = 1;
      ++artificial;
    }

  // Columns: [z (n)] [slack (m)] [artificial]
  const std::size_t total = n + m + artificial;
  detail::Tableau<Scalar> tab(m, total);
  std::size_t next_art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const Scalar sign = negated[i] ? Scalar(-1) : Scalar(1);
    for (std::size_t j = 0; j < n; ++j) tab.at(i + 1, j) = sign * A[i][j];
    tab.at(i + 1, n + i) = sign;
    tab.rhs(i + 1) = sign * b[i];
    if (negated[i]) {
      tab.at(i + 1, next_art) = Scalar(1);
      tab.basis()[i] = next_art++;
    } else {
      tab.basis()[i] = n + i;
    }
  }

  Result<Scalar> res;
  const std::size_t budget = opt.max_pivots ? opt.max_pivots : 50 * (m + total) + 1000;
  std::vector<char> allowed(total, 1);

  if (artificial > 0) {
    // Phase 1: minimize the sum of artificials, i.e. maximize its negation.
    for (std::size_t c2 = 0; c2 <= total; ++c2) tab.at(0, c2) = Scalar(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!negated[i]) continue;
      for (std::size_t c2 = 0; c2 <= total; ++c2)
        if (c2 < n + m || c2 == total) tab.at(0, c2) -= tab.at(i + 1, c2);
    }
    const Status s1 = tab.optimize(allowed, opt, res.pivots, budget);
    if (s1 == Status::IterationLimit) {
      res.status = s1;
      return res;
    }
    if (-tab.rhs(0) > opt.eps * Scalar(static_cast<long>(m + 1)) || -tab.rhs(0) < -opt.eps * Scalar(static_cast<long>(m + 1))) {
      res.status = Status::Infeasible;
      return res;
    }
    // Drive remaining artificials out of the basis.
    for (std::size_t r = 1; r <= m; ++r) {
      if (tab.basis()[r - 1] < n + m) continue;
      for (std::size_t c2 = 0; c2 < n + m; ++c2) {
        const Scalar a = tab.at(r, c2);
        if (a > opt.eps || a < -opt.eps) {
          tab.pivot(r, c2);
          ++res.pivots;
          break;
        }
      }
    }
    for (std::size_t c2 = n + m; c2 < total; ++c2) allowed[c2] = 0;
  }

  // Phase 2 objective row, expressed in the current basis.
  for (std::size_t c2 = 0; c2 <= total; ++c2) tab.at(0, c2) = Scalar(0);
  for (std::size_t j = 0; j < n; ++j) tab.at(0, j) = -c[j];
  for (std::size_t r = 1; r <= m; ++r) {
    const std::size_t bv = tab.basis()[r - 1];
    if (bv >= n) continue;
    const Scalar f = tab.at(0, bv);
    if (f == Scalar(0)) continue;
    for (std::size_t c2 = 0; c2 <= total; ++c2) tab.at(0, c2) -= f * tab.at(r, c2);
  }

  res.status = tab.optimize(allowed, opt, res.pivots, budget);
  res.objective = tab.rhs(0);
  res.primal.assign(n, Scalar(0));
  for (std::size_t r = 1; r <= m; ++r) {
    const std::size_t bv = tab.basis()[r - 1];
    if (bv < n) res.primal[bv] = tab.rhs(r);
  }
  res.dual.assign(m, Scalar(0));
  for (std::size_t i = 0; i < m; ++i) res.dual[i] = negated[i] ? -tab.at(0, n + i) : tab.at(0, n + i);
  return res;
}

}  // namespace ergocert::lp
