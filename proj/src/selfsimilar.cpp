#include "ydecay/selfsimilar.hpp"

#include <cmath>

namespace ydecay {

namespace {

void require_family(const ProblemParams& p) {
  if (!approx_equal(p.rho(), 1.0, ClassifyOptions{}.rel_tol))
    throw std::invalid_argument("self-similar ansatz needs alpha = (2 beta + 1) / (1 - m)");
  if (!(p.alpha() > 0.0)) throw std::invalid_argument("self-similar ansatz needs alpha > 0");
}

}  // namespace

SelfSimilarSolution::SelfSimilarSolution(const SolutionCurve& curve, double T)
    : params_(curve.params()), xi_max_(curve.r_end()), T_(T) {
  require_family(params_);
  auto held = std::make_shared<const SolutionCurve>(curve);
  profile_ = [held](double xi) { return held->jet(xi); };
}

SelfSimilarSolution::SelfSimilarSolution(const ProblemParams& p, JetFn profile, double xi_max,
                                         double T)
    : params_(p), profile_(std::move(profile)), xi_max_(xi_max), T_(T) {
  require_family(params_);
}

double SelfSimilarSolution::similarity_variable(double x_norm, double t) const {
  if (!(t < T_)) throw TimeAtOrPastT("self-similar solution exists only for t < T");
  if (!(x_norm >= 0.0)) throw std::out_of_range("|x| must be non-negative");
  const double xi = x_norm * std::pow(T_ - t, params_.beta());
  if (xi > xi_max_) throw std::out_of_range("x (T-t)^beta lies beyond the profile range");
  return xi;
}

double SelfSimilarSolution::evaluate_u(double x_norm, double t) const {
  const double xi = similarity_variable(x_norm, t);
  return std::pow(T_ - t, params_.alpha()) * profile_(xi).v;
}

double SelfSimilarSolution::pde_residual(double x_norm, double t) const {
  const double xi = similarity_variable(x_norm, t);
  const ProblemParams& p = params_;
  const double tau = T_ - t;
  const double m = p.m();
  const double nm1 = p.n() - 1.0;
  const ProfileJet j = profile_(xi);

  const double u_t = -std::pow(tau, p.alpha() - 1.0) * (p.alpha() * j.v + p.beta() * xi * j.dv);

  const double vm1 = std::pow(j.v, m - 1.0);
  const double dvm = m * vm1 * j.dv;
  const double d2vm = m * vm1 * j.d2v + m * (m - 1.0) * vm1 / j.v * j.dv * j.dv;
  // radial Laplacian in xi; at the origin (n-1)/xi (v^m)' -> (n-1) (v^m)''
  const double lap_xi = xi > 0.0 ? d2vm + nm1 / xi * dvm : p.n() * d2vm;
  const double lap_x = std::pow(tau, p.alpha() * m + 2.0 * p.beta()) * lap_xi;

  return (u_t - nm1 / m * lap_x) / (p.alpha() * j.v);
}

}  // namespace ydecay
