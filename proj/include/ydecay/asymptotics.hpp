#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ydecay/solver.hpp"

namespace ydecay {

class LadderExceedsCurve : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

class CurveTooShort : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Aitken delta-squared transform of a sequence; element k uses x[k..k+2].
/// Where the three terms do not contract geometrically (|ratio| >= 1 or a
/// vanishing second difference) the newest raw term is passed through.
std::vector<double> aitken(std::span<const double> x);

/// Repeated Aitken passes (each shortens the sequence by two) down to at
/// least two terms; returns every pass, the raw sequence first.
std::vector<std::vector<double>> aitken_table(std::span<const double> x, std::size_t max_passes);

struct Extrapolation {
  double limit = 0.0;
  /// |newest extrapolant - previous extrapolant| in the deepest pass.
  double agreement = 0.0;
  /// max(agreement, |x - limit| over the last kResidualTail raw terms). Tails that
  /// oscillate in ln r fool a single Aitken pass, so the spread of the raw tail is kept.
  double residual = 0.0;
};

inline constexpr std::size_t kResidualTail = 4;

Extrapolation extrapolate(std::span<const double> x);

/// w(r) = r^2 v(r)^(1-m).
double decay_w(const SolutionCurve& c, double r);
/// r v'(r) / v(r).
double log_slope(const SolutionCurve& c, double r);

struct LadderOptions {
  double ratio = 2.0;
  std::size_t count = 12;
  /// Ladder top; defaults to the end of the curve.
  std::optional<double> top;
};

/// Radii top * ratio^-k for k = count-1 .. 0 (increasing).
std::vector<double> ladder_radii(const SolutionCurve& c, const LadderOptions& opts);

struct DecayEstimate {
  std::vector<std::pair<double, double>> w_samples;
  double w_limit = 0.0;
  double w_residual = 0.0;
  std::vector<std::pair<double, double>> logslope_samples;
  double logslope_limit = 0.0;
  double logslope_residual = 0.0;
  double ladder_ratio = 2.0;
  /// Successive extrapolants agree within 10x the integration tolerance.
  bool converged = false;
};

/// Samples w and r v'/v on a geometric ladder and extrapolates both limits.
/// Throws LadderExceedsCurve when the ladder top is beyond the curve.
DecayEstimate decay_estimate(const SolutionCurve& c, const LadderOptions& opts = {});

struct SubsequenceReport {
  double burn_in = 0.0;
  double band = 0.0;
  std::size_t samples = 0;
  double w_inf = 0.0;
  /// max |w(r) - w_inf| / w_inf for r >= burn_in.
  double max_deviation = 0.0;
  bool within_band = false;
  std::optional<double> w_1;
  /// Tail samples (last decade) within the band around w_1; only meaningful
  /// when w_1 and w_inf are separated by more than two bands.
  std::size_t w1_hits = 0;
  bool w1_excluded = true;
};

/// Every w sample beyond `burn_in` must sit near w_inf, and none in the tail near w_1.
SubsequenceReport subsequence_value_check(const SolutionCurve& c, double burn_in = 1e2,
                                          double band = 0.05);

struct RescalingReport {
  std::vector<double> lambdas;
  /// sup over r in [R, 10R] of |v_lambda(r) - v0(r)| / v0(r)
  std::vector<double> sup_errors;
  bool strictly_decreasing = false;
};

using RadialProfile = std::function<double(double)>;

/// Distance of the rescaled profiles lambda^(2/(1-m)) v(lambda r) to the singular solution.
RescalingReport rescaling_convergence(const ProblemParams& p, const RadialProfile& v,
                                      std::span<const double> lambdas, double R,
                                      std::size_t samples = 201);

/// Curve version; throws CurveTooShort unless the curve reaches 10 R max(lambda).
RescalingReport rescaling_convergence(const SolutionCurve& c, std::span<const double> lambdas,
                                      double R, std::size_t samples = 201);

}  // namespace ydecay
