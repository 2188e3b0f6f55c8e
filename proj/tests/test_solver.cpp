#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ydecay/solver.hpp"

using namespace ydecay;
using doctest::Approx;

namespace {

const ProblemParams kExplicit(3, 0.2, 2.5, 1.0, 1.0);
const ProblemParams kYamabe3(3, 0.2, 1.0, 1.0, 1.0);
const ProblemParams kFour(4, 0.25, 2.0, 1.0, 1.0);

double explicit_sup_error(double tol, double r_hi = 1e3) {
  IntegrateOptions o;
  o.tol = tol;
  o.r_max = r_hi;
  const SolutionCurve c = integrate(kExplicit, o);
  double sup = 0;
  for (double r = 1e-4; r <= r_hi; r *= 1.031) {
    const double exact = std::pow(2.0 / (2.0 + r * r), 1.25);
    sup = std::max(sup, oracle::rel(c.v(r), exact));
  }
  for (const CurveNode& nd : c.nodes()) {
    const double exact = std::pow(2.0 / (2.0 + nd.r * nd.r), 1.25);
    sup = std::max(sup, oracle::rel(std::pow(nd.V, 5.0), exact));
  }
  return sup;
}

}  // namespace

TEST_CASE("origin series") {
  CHECK(series_v2(kYamabe3) == Approx(-0.0625).epsilon(1e-14));
  // independent: -m alpha eta / (2 n (n-1))
  const double v2 = -0.25 * (20.0 / 3) * 1.0 / 24;
  CHECK(series_v2(kFour) == Approx(v2).epsilon(1e-14));
  for (double r0 : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const RadialState s = series_origin(kYamabe3, r0);
    CHECK(s.r == r0);
    CHECK(s.P / r0 == Approx(2 * series_v2(kYamabe3)).epsilon(1e-12));
    CHECK(s.V == Approx(1.0 - 0.0625 * r0 * r0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(series_origin(kYamabe3, 0.0), std::domain_error);
  CHECK_THROWS_AS(series_origin(kYamabe3, -1e-4), std::domain_error);
}

TEST_CASE("series residual is O(r0^2)") {
  // Left side of the ODE with every derivative taken from the truncated series.
  const ProblemParams& p = kFour;
  const int n = p.n();
  const double m = p.m();
  auto lhs = [&](double r) {
    const RadialState s = series_origin(p, r);
    const double Vpp = 2 * series_v2(p);
    const double v = std::pow(s.V, 1 / m);
    const double dv = s.P * std::pow(s.V, 1 / m - 1) / m;
    return ((n - 1) / m * (Vpp + (n - 1) / r * s.P) + p.alpha() * v + p.beta() * r * dv) /
           (p.alpha() * v);
  };
  const double a = std::abs(lhs(1e-2));
  const double b = std::abs(lhs(1e-3));
  CHECK(a < 1e-3);
  CHECK(b < a / 50);
}

TEST_CASE("rhs") {
  // singular solution: dP/dr against the analytic second derivative of v0^m
  const ProblemParams& p = kYamabe3;
  const double k = 1 / (1 - p.m());
  const double C = std::pow(2.0, k);
  const double q = 2 * k * p.m();
  for (double r : {0.5, 2.0, 37.0}) {
    const double V = std::pow(C, p.m()) * std::pow(r, -q);
    const double P = -q * V / r;
    const double Vpp = q * (q + 1) * V / (r * r);
    const RadialDerivative d = rhs(p, {r, V, P});
    CHECK(d.dV == P);
    CHECK(oracle::rel(d.dP, Vpp) < 1e-10);
  }
  // alpha = beta = 0 reduces to the radial Laplacian
  const ProblemParams z(3, 0.2, 0.0, 0.0, 1.0);
  const RadialDerivative d = rhs(z, {2.0, 0.7, -0.3});
  CHECK(d.dP == Approx(-(2.0 / 2.0) * -0.3).epsilon(1e-15));
  // explicit solution at r = 2: V = 2^(1/4) (2 + r^2)^(-1/4) differentiated by hand
  const double r = 2.0;
  const double c = std::pow(2.0, 0.25);
  const double V = c * std::pow(2 + r * r, -0.25);
  const double P = -0.5 * r * c * std::pow(2 + r * r, -1.25);
  const double Vpp = c * std::pow(2 + r * r, -2.25) * (-(2 + r * r) / 2 + 1.25 * r * r);
  const RadialDerivative de = rhs(kExplicit, {r, V, P});
  CHECK(oracle::rel(de.dP, Vpp) < 1e-12);
  CHECK(std::abs(ode_residual(kExplicit, r, jet_from_state(kExplicit, {r, V, P}))) <= 1e-10);

  CHECK_THROWS_AS(rhs(p, {0.0, 1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(rhs(p, {1.0, 0.0, 0.0}), PositivityError);
  CHECK_THROWS_AS(rhs(p, {1.0, -1.0, 0.0}), PositivityError);
}

TEST_CASE("integrate: explicit case within 100 tol") {
  CHECK(explicit_sup_error(1e-10) <= 100 * 1e-10);
  CHECK(explicit_sup_error(1e-8) <= 100 * 1e-8);
}

TEST_CASE("integrate: error falls with tolerance") {
  const double e1 = explicit_sup_error(1e-6);
  const double e2 = explicit_sup_error(1e-8);
  const double e3 = explicit_sup_error(1e-10);
  CHECK(e2 < e1 / 10);
  CHECK(e3 < e2 / 10);
}

TEST_CASE("integrate: curve shape") {
  const SolutionCurve c = integrate(kFour);
  CHECK(c.status() == SolveStatus::ok);
  CHECK(c.r0() == 1e-4);
  CHECK(c.r_end() >= 1e6);
  double prev = 0;
  for (const CurveNode& nd : c.nodes()) {
    CHECK(nd.r > prev);
    CHECK(nd.V > 0);
    prev = nd.r;
  }
  CHECK(c.v(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(c.v(2e6), std::out_of_range);
  CHECK_THROWS_AS(c.v(-1.0), std::out_of_range);
}

TEST_CASE("integrate: option validation") {
  IntegrateOptions o;
  o.tol = 1e-2;
  CHECK_THROWS_AS(integrate(kFour, o), std::invalid_argument);
  o.tol = 1e-13;
  CHECK_THROWS_AS(integrate(kFour, o), std::invalid_argument);
  o = {};
  o.r_max = 1e-5;
  CHECK_THROWS_AS(integrate(kFour, o), std::invalid_argument);
  o = {};
  o.r0 = 0;
  CHECK_THROWS_AS(integrate(kFour, o), std::invalid_argument);
  const ProblemParams bad(3, 0.3, 3.0, 2.0, 1.0);
  CHECK_THROWS_WITH_AS(integrate(bad), doctest::Contains("beta must exceed"),
                       std::invalid_argument);
}

TEST_CASE("integrate: positivity loss outside the theorem regime keeps the partial curve") {
  IntegrateOptions o;
  o.allow_any_regime = true;
  const SolutionCurve c = integrate(ProblemParams(3, 0.3, 3.0, 2.0, 1.0), o);
  CHECK(c.status() == SolveStatus::positivity_loss);
  CHECK(c.r_end() > 10);
  CHECK(c.r_end() < 1e6);
  CHECK(c.nodes().back().V > 0);
}

TEST_CASE("integrate: rescaled parameters give the rescaled curve") {
  const SolutionCurve base = integrate(kFour);
  for (double lam : {2.0, 10.0}) {
    IntegrateOptions o;
    o.r_max = 1e6 / lam;
    const SolutionCurve c = integrate(rescale(kFour, lam), o);
    const double e = 2 / (1 - kFour.m());
    for (double r = 1e-3; r <= 1e5 / lam; r *= 1.37) {
      const double expect = std::pow(lam, e) * base.v(lam * r);
      CHECK(oracle::rel(c.v(r), expect) <= 100 * 1e-10);
    }
  }
}

TEST_CASE("residuals on curves") {
  const SolutionCurve e = integrate(kExplicit);
  CHECK(std::abs(integral_identity_residual(e, 10.0)) <= 1e-6);
  CHECK(std::abs(integral_identity_residual(e, e.r0())) <= 1e-6);
  for (const ProblemParams& p : {kYamabe3, kFour, ProblemParams(5, 3.0 / 7, 1.0, 1.0, 2.0)}) {
    const SolutionCurve c = integrate(p);
    for (double r = 1.0; r <= 1e4; r *= 1.9) {
      CHECK(std::abs(ode_residual(c, r)) <= 1e-8);
      CHECK(std::abs(integral_identity_residual(c, r)) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(ode_residual(e, 2e6), std::out_of_range);
  CHECK_THROWS_AS(integral_identity_residual(e, 2e6), std::out_of_range);
}

TEST_CASE("integral identity reduces to a local relation at alpha = n beta") {
  // -(n-1)/m (v^m)' = beta r v, checked from the closed form directly
  const SolutionCurve c = integrate(kExplicit);
  for (double r : {0.3, 3.0, 300.0}) {
    const RadialState s = c.state(r);
    const double lhs = -(3 - 1) / 0.2 * s.P;
    const double rhs_ = 2.5 * r * std::pow(2.0 / (2.0 + r * r), 1.25);
    CHECK(oracle::rel(lhs, rhs_) < 1e-7);
  }
}

TEST_CASE("barriers") {
  for (const ProblemParams& p : {kExplicit, kFour, kYamabe3}) {
    CHECK(lower_barrier(p, 0.0) == Approx(p.eta()).epsilon(1e-15));
    CHECK(upper_barrier(p, 0.0) == Approx(p.eta()).epsilon(1e-15));
  }
  // at alpha = n beta both barriers are the explicit solution itself
  for (double r : {0.5, 5.0, 500.0}) {
    const double ex = std::pow(2.0 / (2.0 + r * r), 1.25);
    CHECK(oracle::rel(lower_barrier(kExplicit, r), ex) < 1e-13);
    CHECK(oracle::rel(upper_barrier(kExplicit, r), ex) < 1e-13);
  }
}

TEST_CASE("bound_check") {
  {
    const BoundReport b = bound_check(integrate(kYamabe3));
    CHECK_FALSE(b.lower.applies);
    CHECK(b.upper.applies);
    CHECK(b.upper.holds);
    CHECK(b.upper.violations == 0);
  }
  {
    const BoundReport b = bound_check(integrate(kFour));
    CHECK(b.lower.applies);
    CHECK(b.lower.holds);
    CHECK_FALSE(b.upper.applies);
  }
  {
    IntegrateOptions o;
    o.tol = 1e-12;
    const BoundReport b = bound_check(integrate(kExplicit, o), 1e-12);
    CHECK(b.lower.applies);
    CHECK(b.upper.applies);
    CHECK(b.lower.holds);
    CHECK(b.upper.holds);
  }
  {
    // an artificially large slack never turns a pass into a fail
    const BoundReport b = bound_check(integrate(kFour), 1e-3);
    CHECK(b.lower.holds);
  }
}

TEST_CASE("positivity across a random theorem-regime sample") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  while (done < 40) {
    const int n = 3 + static_cast<int>(u(rng) * 5);
    const double m = (n - 2.0) / n * (0.05 + 0.9 * u(rng));
    const double rho = 0.2 + 2 * u(rng);
    const ProblemParams p0(n, m, 0.0, rho, 1.0);
    const double beta = beta_threshold(p0) * (1.05 + 3 * u(rng)) + 0.01;
    const ProblemParams p(n, m, beta, rho, std::exp(2 * u(rng) - 1));
    if (!classify(p).theorem_applies) continue;
    const SolutionCurve c = integrate(p);
    CHECK(c.status() == SolveStatus::ok);
    CHECK(c.r_end() >= 1e6);
    ++done;
  }
}
