#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "ydecay/solver.hpp"

namespace ydecay {

class TimeAtOrPastT : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// u(x, t) = (T - t)^alpha v(|x| (T - t)^beta), a solution of u_t = (n-1)/m Delta u^m
/// on t < T whenever v solves the profile equation with rho = 1.
class SelfSimilarSolution {
public:
  using JetFn = std::function<ProfileJet(double)>;

  /// Throws std::invalid_argument unless rho == 1 and alpha > 0.
  SelfSimilarSolution(const SolutionCurve& curve, double T);
  /// Closed-form or synthetic profile defined on [0, xi_max].
  SelfSimilarSolution(const ProblemParams& p, JetFn profile, double xi_max, double T);

  const ProblemParams& params() const { return params_; }
  double blow_down_time() const { return T_; }

  double evaluate_u(double x_norm, double t) const;

  /// (u_t - (n-1)/m Delta u^m) / (alpha v(xi)) with both sides from the chain rule.
  /// Equals -(T-t)^(alpha-1) times the profile residual at xi.
  double pde_residual(double x_norm, double t) const;

  /// Similarity variable x (T-t)^beta; throws when t >= T or outside the profile range.
  double similarity_variable(double x_norm, double t) const;

private:
  ProblemParams params_;
  JetFn profile_;
  double xi_max_;
  double T_;
};

}  // namespace ydecay
