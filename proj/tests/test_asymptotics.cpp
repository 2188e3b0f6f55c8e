#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ydecay/asymptotics.hpp"

using namespace ydecay;
using doctest::Approx;

namespace {
const ProblemParams kExplicit(3, 0.2, 2.5, 1.0, 1.0);
const ProblemParams kYamabe3(3, 0.2, 1.0, 1.0, 1.0);
const ProblemParams kFour(4, 0.25, 2.0, 1.0, 1.0);
}  // namespace

TEST_CASE("aitken is exact on geometric sequences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double limit = -5 + 10 * u(rng);
    const double c = -3 + 6 * u(rng);
    const double q = 0.05 + 0.9 * u(rng) * (u(rng) < 0.3 ? -1 : 1);
    std::vector<double> x;
    double t = c;
    for (int k = 0; k < 8; ++k, t *= q) x.push_back(limit + t);
    const std::vector<double> a = aitken(x);
    REQUIRE(a.size() == 6);
    for (double y : a) CHECK(std::abs(y - limit) <= 1e-12 * std::max(1.0, std::abs(c) + std::abs(limit)));
  }
}

TEST_CASE("aitken recovers w_inf + c r^-q on a doubling ladder") {
  for (double q : {0.5, 1.0, 2.0, 3.0}) {
    std::vector<double> x;
    for (int k = 0; k < 12; ++k) x.push_back(8.0 + 3.0 * std::pow(std::pow(2.0, k) * 1e3, -q));
    CHECK(extrapolate(x).limit == Approx(8.0).epsilon(1e-13));
  }
}

TEST_CASE("aitken falls back on non-contracting or flat input") {
  const std::vector<double> grow{1, 2, 4, 8};
  const std::vector<double> a = aitken(grow);
  CHECK(a == std::vector<double>{4, 8});
  const std::vector<double> flat{2, 2, 2};
  CHECK(aitken(flat) == std::vector<double>{2});
  CHECK(aitken(std::vector<double>{1, 2}).empty());
  const auto table = aitken_table(std::vector<double>(10, 1.0), 5);
  CHECK(table.size() == 5);
  CHECK(table.back().size() == 2);
}

TEST_CASE("decay_estimate examples") {
  SUBCASE("explicit case") {
    const DecayEstimate d = decay_estimate(integrate(kExplicit));
    CHECK(d.w_limit == Approx(2.0).epsilon(1e-4));
    CHECK(d.converged);
    CHECK(std::abs(d.w_samples.back().second - d.w_limit) <= d.w_residual);
  }
  SUBCASE("n = 4") {
    const DecayEstimate d = decay_estimate(integrate(kFour));
    CHECK(oracle::rel(d.w_limit, 8.0) <= 1e-2);
  }
  SUBCASE("Yamabe n = 3 log slope") {
    const DecayEstimate d = decay_estimate(integrate(kYamabe3));
    CHECK(oracle::rel(d.logslope_limit, -2.5) <= 1e-2);
  }
}

TEST_CASE("decay_estimate invariants") {
  for (const ProblemParams& p : {kExplicit, kYamabe3, kFour, ProblemParams(5, 3.0 / 7, 1.0, 1.0, 2.0)}) {
    const SolutionCurve c = integrate(p);
    const DecayEstimate d = decay_estimate(c);
    REQUIRE(d.w_samples.size() == 12);
    CHECK(d.ladder_ratio == 2.0);
    for (std::size_t k = 0; k < d.w_samples.size(); ++k) {
      const auto [r, w] = d.w_samples[k];
      CHECK(w > 0);
      CHECK(oracle::rel(w, r * r * std::pow(c.v(r), 1 - p.m())) < 1e-12);
      if (k > 0) CHECK(r == Approx(2 * d.w_samples[k - 1].first).epsilon(1e-14));
    }
    CHECK(d.w_samples.back().first == c.r_end());
    if (d.converged) CHECK(std::abs(d.w_samples.back().second - d.w_limit) <= d.w_residual);
  }
}

TEST_CASE("decay_estimate ladder errors") {
  const SolutionCurve c = integrate(kFour);
  LadderOptions o;
  o.top = 2e6;
  CHECK_THROWS_AS(decay_estimate(c, o), LadderExceedsCurve);
  o.top = 1e-2;
  CHECK_THROWS_AS(decay_estimate(c, o), LadderExceedsCurve);
  o = {};
  o.ratio = 1.0;
  CHECK_THROWS_AS(decay_estimate(c, o), std::invalid_argument);

  IntegrateOptions io;
  io.allow_any_regime = true;
  const SolutionCurve broken = integrate(ProblemParams(3, 0.3, 3.0, 2.0, 1.0), io);
  CHECK_THROWS_AS(decay_estimate(broken), LadderExceedsCurve);
}

TEST_CASE("w_limit is invariant under rescaling") {
  const DecayEstimate base = decay_estimate(integrate(kFour));
  for (double lam : {2.0, 10.0}) {
    const DecayEstimate d = decay_estimate(integrate(rescale(kFour, lam)));
    CHECK(std::abs(d.w_limit - base.w_limit) <= base.w_residual + d.w_residual + 1e-9);
  }
}

TEST_CASE("w' identity ties w and the log slope together") {
  // w'(r) = (2 w / r)(1 + (1-m)/2 r v'/v), w' by central differences
  for (const ProblemParams& p : {kYamabe3, kFour}) {
    const SolutionCurve c = integrate(p);
    for (double r = 2.0; r < 1e5; r *= 3.3) {
      const double h = 1e-5 * r;
      const double dw = (decay_w(c, r + h) - decay_w(c, r - h)) / (2 * h);
      const double w = decay_w(c, r);
      const double ident = 2 * w / r * (1 + 0.5 * (1 - p.m()) * log_slope(c, r));
      CHECK(std::abs(dw - ident) <= 1e-5 * (std::abs(ident) + w / r));
    }
  }
}

TEST_CASE("subsequence_value_check") {
  SUBCASE("n = 4 after 1e3") {
    const SubsequenceReport s = subsequence_value_check(integrate(kFour), 1e3, 0.05);
    CHECK(s.within_band);
    CHECK(s.samples > 10);
    CHECK(s.w1_excluded);
    CHECK(s.w_1);
    CHECK(*s.w_1 == Approx(4.0));
  }
  SUBCASE("explicit case after 1e2") {
    const SubsequenceReport s = subsequence_value_check(integrate(kExplicit), 1e2, 0.05);
    CHECK(s.within_band);
  }
  SUBCASE("no cluster at w_1 in the tail") {
    for (const ProblemParams& p : {kYamabe3, ProblemParams(5, 3.0 / 7, 1.0, 1.0, 1.0)}) {
      const SubsequenceReport s = subsequence_value_check(integrate(p));
      CHECK(s.w1_hits == 0);
      CHECK(s.w1_excluded);
    }
  }
}

TEST_CASE("rescaling_convergence") {
  SUBCASE("numerical curve, ladder 10..1e3") {
    const std::vector<double> lams{10, 100, 1000};
    const RescalingReport r = rescaling_convergence(integrate(kFour), lams, 1.0);
    CHECK(r.strictly_decreasing);
    CHECK(r.sup_errors.back() < 0.5 * r.sup_errors.front());
  }
  SUBCASE("singular solution is a fixed point") {
    const std::vector<double> lams{1.0, 3.0};
    const RescalingReport r = rescaling_convergence(
        kYamabe3, [](double x) { return singular_solution_v0(kYamabe3, x); }, lams, 1.0);
    CHECK(r.sup_errors[0] <= 1e-14);
    CHECK(r.sup_errors[1] <= 1e-13);
  }
  SUBCASE("explicit case against its tail formula") {
    // v_lambda / v0 = (r^2 / (r^2 + 2/lambda^2))^(5/4); the sup sits at r = R
    const std::vector<double> lams{3.0, 10.0, 30.0};
    const double R = 1.0;
    const RescalingReport r = rescaling_convergence(
        kExplicit, [](double x) { return std::pow(2.0 / (2.0 + x * x), 1.25); }, lams, R);
    for (std::size_t i = 0; i < lams.size(); ++i) {
      const double expect = 1 - std::pow(1 + 2 / (lams[i] * lams[i] * R * R), -1.25);
      CHECK(std::abs(r.sup_errors[i] - expect) <= 1e-3 * expect);
    }
    CHECK(r.strictly_decreasing);
  }
  SUBCASE("errors") {
    IntegrateOptions o;
    o.r_max = 1e3;
    const std::vector<double> lams{10, 1000};
    CHECK_THROWS_AS(rescaling_convergence(integrate(kFour, o), lams, 1.0), CurveTooShort);
    const std::vector<double> bad{-1.0};
    CHECK_THROWS_AS(rescaling_convergence(kFour, [](double) { return 1.0; }, bad, 1.0),
                    std::invalid_argument);
  }
}
