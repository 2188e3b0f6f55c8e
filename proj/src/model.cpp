#include "ydecay/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ydecay {

namespace {

bool finite_all(double a, double b, double c, double d) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

double derive_alpha(int /*n*/, double m, double beta, double rho) {
  if (!(m < 1.0)) throw std::invalid_argument("alpha is undefined for m >= 1");
  return (2.0 * beta + rho) / (1.0 - m);
}

ProblemParams::ProblemParams(int n, double m, double beta, double rho, double eta)
    : n_(n), m_(m), beta_(beta), rho_(rho), eta_(eta), alpha_(0.0) {
  if (!finite_all(m, beta, rho, eta))
    throw std::invalid_argument("parameters must be finite");
  if (n < 1) throw std::invalid_argument("dimension n must be positive");
  if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("m must lie in (0, 1)");
  if (!(eta > 0.0)) throw std::invalid_argument("eta = v(0) must be positive");
  alpha_ = derive_alpha(n, m, beta, rho);
}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
  }
  return "?";
}

bool approx_equal(double a, double b, double rel_tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel_tol * scale;
}

double beta_threshold(const ProblemParams& p) {
  const double n = p.n();
  return p.m() * p.rho() / (n - 2.0 - p.m() * n);
}

RegimeTag classify(const ProblemParams& p, const ClassifyOptions& opts) {
  RegimeTag tag;
  const double n = p.n();
  const double nbeta = n * p.beta();

  if (approx_equal(p.alpha(), nbeta, opts.rel_tol))
    tag.alpha_vs_nbeta = Ordering::equal;
  else
    tag.alpha_vs_nbeta = p.alpha() < nbeta ? Ordering::less : Ordering::greater;

  tag.yamabe_case = p.n() >= 3 && approx_equal(p.m(), (n - 2.0) / (n + 2.0), opts.rel_tol);
  tag.explicit_case = tag.alpha_vs_nbeta == Ordering::equal &&
                      approx_equal(p.rho(), 1.0, opts.rel_tol) && p.n() >= 3 &&
                      n - 2.0 - n * p.m() > 0.0;

  if (p.beta() <= 0.0)
    tag.advisory = "beta <= 0: a global solution is not guaranteed to exist";

  if (p.n() < 3) {
    tag.reason = "dimension must satisfy n >= 3";
  } else if (!(p.m() < (n - 2.0) / n)) {
    tag.reason = "m must satisfy 0 < m < (n-2)/n = " + fmt_num((n - 2.0) / n);
  } else if (!(p.rho() > 0.0)) {
    tag.reason = "rho must be positive (shrinking regime)";
  } else if (!(p.beta() > beta_threshold(p))) {
    tag.reason = "beta must exceed m rho / (n - 2 - m n) = " + fmt_num(beta_threshold(p));
  } else {
    tag.theorem_applies = true;
  }
  return tag;
}

double w_infinity(const ProblemParams& p) {
  const double n = p.n();
  const double m = p.m();
  const double denom = (1.0 - m) * (p.alpha() * (1.0 - m) - 2.0 * p.beta());
  if (!(denom > 0.0))
    throw std::domain_error("w_infinity: alpha(1-m) - 2 beta must be positive");
  return 2.0 * (n - 1.0) * (n * (1.0 - m) - 2.0) / denom;
}

double w_one(const ProblemParams& p) {
  if (!(p.beta() > 0.0)) throw std::domain_error("w_one is defined only for beta > 0");
  return 2.0 * (p.n() - 1.0) / ((1.0 - p.m()) * p.beta());
}

ClosedFormConstants closed_form_constants(const ProblemParams& p) {
  ClosedFormConstants c{w_infinity(p), std::nullopt};
  if (p.beta() > 0.0) c.w_1 = w_one(p);
  return c;
}

double singular_solution_v0(const ProblemParams& p, double x_norm) {
  if (!(x_norm > 0.0)) throw std::domain_error("singular solution needs |x| > 0");
  return std::pow(w_infinity(p) / (x_norm * x_norm), 1.0 / (1.0 - p.m()));
}

ProfileJet singular_solution_jet(const ProblemParams& p, double r) {
  const double v = singular_solution_v0(p, r);
  const double k = 1.0 / (1.0 - p.m());
  return {v, -2.0 * k / r * v, 2.0 * k * (2.0 * k + 1.0) / (r * r) * v};
}

namespace {

double explicit_numerator(const ProblemParams& p, const ClassifyOptions& opts) {
  if (!classify(p, opts).explicit_case)
    throw std::domain_error("closed-form solution needs alpha == n beta and rho == 1");
  const double n = p.n();
  const double m = p.m();
  return 2.0 * (n - 1.0) * (n - 2.0 - n * m) / (1.0 - m);
}

}  // namespace

double explicit_solution(const ProblemParams& p, double lambda, double r,
                         const ClassifyOptions& opts) {
  return explicit_solution_jet(p, lambda, r, opts).v;
}

ProfileJet explicit_solution_jet(const ProblemParams& p, double lambda, double r,
                                 const ClassifyOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  const double c = explicit_numerator(p, opts);
  const double k = 1.0 / (1.0 - p.m());
  const double q = lambda * lambda + r * r;
  const double v = std::pow(c / q, k);
  const double g = -2.0 * k * r / q;  // v'/v
  const double dg = -2.0 * k * (lambda * lambda - r * r) / (q * q);
  return {v, g * v, (g * g + dg) * v};
}

double explicit_lambda_for_eta(const ProblemParams& p) {
  const double c = explicit_numerator(p, {});
  return std::sqrt(c * std::pow(p.eta(), p.m() - 1.0));
}

ProblemParams rescale(const ProblemParams& p, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("rescale: lambda must be positive");
  return p.with_eta(std::pow(lambda, 2.0 / (1.0 - p.m())) * p.eta());
}

double ode_lhs(const ProblemParams& p, double r, const ProfileJet& jet) {
  const double m = p.m();
  const double nm1 = p.n() - 1.0;
  const double vm1 = std::pow(jet.v, m - 1.0);
  const double dvm = m * vm1 * jet.dv;
  const double d2vm = m * vm1 * jet.d2v + m * (m - 1.0) * vm1 / jet.v * jet.dv * jet.dv;
  return nm1 / m * (d2vm + nm1 / r * dvm) + p.alpha() * jet.v + p.beta() * r * jet.dv;
}

double ode_residual(const ProblemParams& p, double r, const ProfileJet& jet) {
  const double lhs = ode_lhs(p, r, jet);
  double scale = std::abs(p.alpha() * jet.v);
  if (scale == 0.0) {
    // alpha = 0: fall back to the magnitude of the diffusion term
    const double m = p.m();
    scale = (p.n() - 1.0) / m * std::abs(m * std::pow(jet.v, m - 1.0) * jet.d2v) +
            std::abs(p.beta() * r * jet.dv);
    if (scale == 0.0) return lhs;
  }
  return lhs / scale;
}

}  // namespace ydecay
