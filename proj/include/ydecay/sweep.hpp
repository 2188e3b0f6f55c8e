#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "ydecay/record.hpp"
#include "ydecay/solver.hpp"

namespace ydecay {

/// Value lists per parameter; the sweep runs over their Cartesian product.
struct GridSpec {
  std::vector<int> n;
  std::vector<double> m;
  std::vector<double> beta;
  std::vector<double> rho;
  std::vector<double> eta;
  IntegrateOptions integrate;
};

/// Flat "key = v1, v2, ..." text. Keys n, m, beta, rho, eta are required;
/// r_max, tol, r0 are optional scalars. '#' starts a comment.
/// Throws std::runtime_error naming the offending line.
GridSpec parse_grid(std::istream& is);

struct GridCell {
  std::size_t index;
  int n;
  double m;
  double beta;
  double rho;
  double eta;
};

/// Cartesian product in (n, m, beta, rho, eta) order, eta varying fastest.
std::vector<GridCell> expand_grid(const GridSpec& g);

struct SweepOptions {
  IntegrateOptions integrate;
  /// Record wall-clock runtime per cell (makes output non-reproducible).
  bool timing = false;
  /// Floor of the barrier slack; the slack used is max(bound_slack, 10 tol).
  double bound_slack = 1e-12;
};

/// Classify, and for theorem-regime cells integrate and verify. Never throws.
SweepRecord run_cell(const GridCell& cell, const SweepOptions& opts);

/// Reference implementation: one cell after another.
std::vector<SweepRecord> run_sweep_serial(std::span<const GridCell> cells, const SweepOptions& opts);

/// OpenMP worker pool of `jobs` threads; output order is the grid order.
std::vector<SweepRecord> run_sweep_parallel(std::span<const GridCell> cells,
                                            const SweepOptions& opts, int jobs);

/// Largest |ODE residual| and integral-identity residual on log-spaced radii in [lo, hi].
std::pair<double, double> max_residuals(const SolutionCurve& c, double lo, double hi,
                                        std::size_t points = 41);

}  // namespace ydecay
