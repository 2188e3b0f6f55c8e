// Serial vs OpenMP sweep timing on a fixed grid.
// usage: bench_sweep [repeats] [max_threads]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "ydecay/sweep.hpp"

using namespace ydecay;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  const int max_threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

  GridSpec g;
  g.n = {3, 4, 5, 6};
  g.m = {0.05, 0.1, 0.15, 0.2};
  g.beta = {1.0, 2.0, 3.0, 4.0};
  g.rho = {0.5, 1.0, 2.0};
  g.eta = {0.5, 1.0, 2.0};
  const std::vector<GridCell> cells = expand_grid(g);
  SweepOptions opts;

  std::vector<SweepRecord> ref;
  const double serial = best_of(repeats, [&] { ref = run_sweep_serial(cells, opts); });
  std::printf("cells %zu, repeats %d\n", cells.size(), repeats);
  std::printf("%-10s %10s %8s %s\n", "mode", "seconds", "speedup", "matches");
  std::printf("%-10s %10.4f %8.2f %s\n", "serial", serial, 1.0, "-");
  bool all_match = true;
  for (int t = 1; t <= max_threads; t *= 2) {
    std::vector<SweepRecord> par;
    const double s = best_of(repeats, [&] { par = run_sweep_parallel(cells, opts, t); });
    const bool same = par == ref;
    all_match = all_match && same;
    char label[32];
    std::snprintf(label, sizeof label, "omp x%d", t);
    std::printf("%-10s %10.4f %8.2f %s\n", label, s, serial / s, same ? "yes" : "NO");
  }
  return all_match ? 0 : 1;
}
