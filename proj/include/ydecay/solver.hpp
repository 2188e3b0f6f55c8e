#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ydecay/model.hpp"

namespace ydecay {

/// Integration state: V = v^m and P = (v^m)' at radius r.
struct RadialState {
  double r;
  double V;
  double P;
};

struct RadialDerivative {
  double dV;  // dV/dr = P
  double dP;  // dP/dr
};

/// Thrown by rhs() when V <= 0.
class PositivityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Coefficient V2 of the even origin expansion V(r) = eta^m + V2 r^2 + O(r^4).
double series_v2(const ProblemParams& p);

/// State at r0 from the two-term origin expansion. Throws std::domain_error for r0 <= 0.
RadialState series_origin(const ProblemParams& p, double r0);

/// Right-hand side of the first-order system in (V, P).
/// Throws std::domain_error for r <= 0 and PositivityError for V <= 0.
RadialDerivative rhs(const ProblemParams& p, const RadialState& s);

/// Profile jet reconstructed from (V, P) with v'' from rhs().
ProfileJet jet_from_state(const ProblemParams& p, const RadialState& s);

enum class SolveStatus { ok, positivity_loss, step_size_underflow };

const char* to_string(SolveStatus s);

struct IntegrateOptions {
  double r_max = 1e6;
  double tol = 1e-10;
  double r0 = 1e-4;
  /// Integrate even when classify() says the decay theorem does not apply.
  bool allow_any_regime = false;
};

/// One accepted integrator step.
struct CurveNode {
  double r;
  double V;
  double P;
  double dP;  // dP/dr at (r, V, P)
};

/// Output of integrate(): accepted steps plus a cubic-Hermite evaluator.
///
/// Evaluation is defined on [0, r_end()]. Below r0 the origin expansion is used.
/// Segments left of r = 1 are interpolated in (r; V, P); segments right of it in
/// (ln r; ln V, r P / V), matching the variables the integrator used there.
class SolutionCurve {
public:
  const ProblemParams& params() const { return params_; }
  const IntegrateOptions& options() const { return opts_; }
  double tol() const { return opts_.tol; }
  SolveStatus status() const { return status_; }
  /// Largest radius reached with V > 0.
  double r_end() const { return nodes_.back().r; }
  double r0() const { return nodes_.front().r; }
  std::span<const CurveNode> nodes() const { return nodes_; }
  std::size_t rejected_steps() const { return rejected_; }

  bool in_range(double r) const { return r >= 0.0 && r <= r_end(); }

  /// Interpolated state. Throws std::out_of_range outside [0, r_end()].
  RadialState state(double r) const;
  ProfileJet jet(double r) const;
  double v(double r) const { return jet(r).v; }

  /// Integral of z^(n-1) v(z) over [0, r]: series on [0, r0], composite Simpson beyond.
  double radial_moment(double r) const;

private:
  friend SolutionCurve integrate(const ProblemParams&, const IntegrateOptions&);
  SolutionCurve(ProblemParams p, IntegrateOptions o) : params_(std::move(p)), opts_(o) {}

  void build_moments();
  double segment_moment(std::size_t i, double r_hi) const;
  std::size_t segment_index(double r) const;

  ProblemParams params_;
  IntegrateOptions opts_;
  SolveStatus status_ = SolveStatus::ok;
  std::vector<CurveNode> nodes_;
  std::vector<double> moments_;  // radial_moment at each node
  std::size_t rejected_ = 0;
};

/// Radius where the integrator changes from r to ln r.
inline constexpr double kLogSwitchRadius = 1.0;

/// Adaptive Dormand-Prince 5(4) integration from the origin expansion to r_max.
/// Throws std::invalid_argument on bad options or when the theorem regime is
/// required but not met. Positivity loss and step underflow are reported through
/// status() with the partial curve kept.
SolutionCurve integrate(const ProblemParams& p, const IntegrateOptions& opts = {});

/// Left side of the radial ODE at r from the curve, normalized by alpha v(r).
double ode_residual(const SolutionCurve& c, double r);

/// Relative mismatch of
///   -(n-1)/m (v^m)'(r) = beta r v(r) + (alpha - n beta) r^(1-n) int_0^r z^(n-1) v dz.
double integral_identity_residual(const SolutionCurve& c, double r);

struct BoundSide {
  bool applies = false;
  bool holds = true;
  /// Smallest relative margin (positive = bound satisfied) and where it occurs.
  double worst_margin = 0.0;
  double worst_r = 0.0;
  std::size_t violations = 0;
};

struct BoundReport {
  BoundSide lower;  // beta > 0 and alpha <= n beta
  BoundSide upper;  // alpha >= n beta > 0
};

/// Closed-form barrier profiles; both equal eta at r = 0.
double lower_barrier(const ProblemParams& p, double r);
double upper_barrier(const ProblemParams& p, double r);

/// Checks the barrier inequalities at every node, allowing `slack` relative violation.
BoundReport bound_check(const SolutionCurve& c, double slack = 1e-12,
                        const ClassifyOptions& opts = {});

}  // namespace ydecay
