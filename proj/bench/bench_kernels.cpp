// Serial vs OpenMP timings for the two parallel kernels.
// Usage: bench_kernels [n] [N] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "ergocert/io.hpp"
#include "ergocert/markov.hpp"
#include "ergocert/matrix_game.hpp"

using namespace ergocert;

template <class F>
double seconds(F&& f, int repeats) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 64;
  const std::size_t N = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 6;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 20;
  std::printf("threads=%d\n", omp_get_max_threads());

  GenParams p;
  p.n = n;
  p.N = N;
  p.W = 8;
  p.R = 8;
  const GameSpec game = generate("random", p, 42);
  Potential x(n);
  for (std::size_t v = 0; v < n; ++v) x[v] = static_cast<double>(v % 7) - 3.0;

  const double ts = seconds([&] { (void)local_values_serial(game, x); }, repeats);
  const double tp = seconds([&] { (void)local_values_parallel(game, x); }, repeats);
  std::printf("local_values     n=%zu N=%zu  serial %.6fs  parallel %.6fs  speedup %.2f\n", n, N, ts, tp, ts / tp);

  GenParams q;
  q.n = 4;
  q.N = 3;
  q.W = 4;
  q.R = 8;
  const GameSpec small = generate("random", q, 7);
  const int reps = std::max(1, repeats / 10);
  const double os = seconds([&] { (void)brute_force_game_bounds_serial(small, 1'000'000); }, reps);
  const double op = seconds([&] { (void)brute_force_game_bounds_parallel(small, 1'000'000); }, reps);
  std::printf("oracle_bounds    profiles=%llu  serial %.6fs  parallel %.6fs  speedup %.2f\n",
              static_cast<unsigned long long>(pure_profile_count(small)), os, op, os / op);
  return 0;
}
