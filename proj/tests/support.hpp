#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ergocert/game.hpp"
#include "ergocert/io.hpp"
#include "ergocert/markov.hpp"
#include "ergocert/matrix_game.hpp"
#include "ergocert/pump.hpp"

namespace testing {

using namespace ergocert;

/// Small in-memory game builder; states get one label per action index.
class Builder {
 public:
  StateId state(const std::string& name, std::size_t rows = 1, std::size_t cols = 1) {
    State s;
    s.name = name;
    for (std::size_t k = 0; k < rows; ++k) s.actions1.push_back("k" + std::to_string(k));
    for (std::size_t l = 0; l < cols; ++l) s.actions2.push_back("l" + std::to_string(l));
    s.cells.assign(rows * cols, {});
    game_.states.push_back(std::move(s));
    return game_.states.size() - 1;
  }
  Builder& arc(StateId v, std::size_t k, std::size_t l, StateId to, std::int64_t num, std::int64_t den, double r) {
    const Rational p = Rational::make(num, den);
    game_.states[v].cell(k, l).push_back(Transition{to, p.to_double(), p, r});
    return *this;
  }
  GameSpec build() const { return game_; }

 private:
  GameSpec game_;
};

/// One state, self-loops, rewards a_kl.
inline GameSpec matrix_as_game(const std::vector<std::vector<double>>& a) {
  Builder b;
  const StateId v = b.state("v", a.size(), a[0].size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t l = 0; l < a[k].size(); ++l) b.arc(v, k, l, v, 1, 1, a[k][l]);
  return b.build();
}

inline GameSpec two_cycle(double r0, double r1) {
  Builder b;
  b.state("u");
  b.state("w");
  b.arc(0, 0, 0, 1, 1, 1, r0).arc(1, 0, 0, 0, 1, 1, r1);
  return b.build();
}

inline GameSpec random_game(std::size_t n, std::size_t N, long long W, long long R, std::uint64_t seed) {
  GenParams p;
  p.n = n;
  p.N = N;
  p.W = W;
  p.R = R;
  return generate("random", p, seed);
}

inline std::vector<double> random_distribution(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(size);
  double sum = 0.0;
  for (double& e : p) sum += (e = u(rng) + 1e-3);
  for (double& e : p) e /= sum;
  return p;
}

inline StationaryProfile random_profile(const GameSpec& g, std::mt19937_64& rng) {
  StationaryProfile prof;
  for (const State& s : g.states) {
    prof.alpha.push_back(random_distribution(s.rows(), rng));
    prof.beta.push_back(random_distribution(s.cols(), rng));
  }
  return prof;
}

inline StationaryProfile random_pure_profile(const GameSpec& g, std::mt19937_64& rng) {
  std::vector<std::size_t> rows, cols;
  for (const State& s : g.states) {
    rows.push_back(rng() % s.rows());
    cols.push_back(rng() % s.cols());
  }
  return StationaryProfile::pure(g, rows, cols);
}

inline Eigen::MatrixXd random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -5,
                                     double hi = 5) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(rng);
  return a;
}

inline std::pair<double, double> range_of(const std::vector<double>& m) {
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  return {*lo, *hi};
}

/// Plain Pump on all of V: stop once T or B empties, otherwise lower P by delta.
struct PlainPumpResult {
  Potential x;
  std::uint64_t iterations = 0;
  bool collapsed = false;
};

inline PlainPumpResult plain_pump(const GameSpec& g, Potential x, std::uint64_t cap) {
  const auto m0 = local_value_vector(g, x);
  const auto [lo, hi] = range_of(m0);
  const StateSet all = StateSet::all(g.size());
  const double delta = (hi - lo) / 4.0;
  PlainPumpResult out;
  for (std::uint64_t tau = 0; tau <= cap; ++tau) {
    out.iterations = tau;
    const BandPartition band = partition(local_value_vector(g, x), all, lo, hi);
    if (band.top.empty() || band.bottom.empty()) {
      out.collapsed = true;
      break;
    }
    for (StateId v : band.pumped.members()) x[v] -= delta;
  }
  out.x = std::move(x);
  return out;
}

/// Repeated plain pumping until the m-range drops to `target` or a call fails to collapse.
struct RepeatedPumpingResult {
  Potential x;
  std::vector<double> ranges;
  bool reached = false;
};

inline RepeatedPumpingResult repeated_pumping(const GameSpec& g, double target, std::uint64_t cap, int rounds) {
  RepeatedPumpingResult out;
  out.x.assign(g.size(), 0.0);
  for (int h = 0; h < rounds; ++h) {
    const auto [lo, hi] = range_of(local_value_vector(g, out.x));
    out.ranges.push_back(hi - lo);
    if (hi - lo <= target) {
      out.reached = true;
      return out;
    }
    PlainPumpResult r = plain_pump(g, out.x, cap);
    if (!r.collapsed) return out;
    out.x = std::move(r.x);
  }
  return out;
}

}  // namespace testing
