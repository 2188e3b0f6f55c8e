#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ydecay/verify.hpp"

using namespace ydecay;

namespace {

const CheckRow& row(const VerifyReport& r, const std::string& key) {
  auto it = std::find_if(r.rows.begin(), r.rows.end(), [&](const CheckRow& c) { return c.key == key; });
  REQUIRE(it != r.rows.end());
  return *it;
}

}  // namespace

TEST_CASE("Yamabe instance passes every row") {
  const VerifyReport r = verify_instance(ProblemParams(3, 0.2, 1.0, 1.0, 1.0), {});
  CHECK(r.all_pass);
  CHECK(r.rows.size() == 10);
  CHECK(row(r, "curvature_limits").verdict == Verdict::pass);
  CHECK(row(r, "vm_divergence").verdict == Verdict::pass);
  CHECK(row(r, "upper_bound").verdict == Verdict::pass);
  CHECK(row(r, "lower_bound").verdict == Verdict::not_applicable);
  std::ostringstream os;
  print_report(os, r);
  CHECK(os.str().find("all applicable checks pass") != std::string::npos);
}

TEST_CASE("non-Yamabe instance marks curvature as n/a and still passes") {
  const VerifyReport r = verify_instance(ProblemParams(4, 0.25, 2.0, 1.0, 1.0), {});
  CHECK(r.all_pass);
  CHECK(row(r, "curvature_limits").verdict == Verdict::not_applicable);
  CHECK(row(r, "vm_divergence").verdict == Verdict::not_applicable);
}

TEST_CASE("beta below rho/2 fails the regime row") {
  const VerifyReport r = verify_instance(ProblemParams(3, 0.2, 0.1, 1.0, 1.0), {});
  CHECK_FALSE(r.all_pass);
  CHECK(row(r, "regime").verdict == Verdict::fail);
  CHECK(row(r, "decay_rate").verdict == Verdict::skipped);
  CHECK_FALSE(r.integrated);
}

TEST_CASE("strict multiplier tightens thresholds") {
  VerifyOptions o;
  o.strict = 1e-6;
  const VerifyReport r = verify_instance(ProblemParams(3, 0.2, 1.0, 1.0, 1.0), o);
  CHECK_FALSE(r.all_pass);
  CHECK(row(r, "decay_rate").verdict == Verdict::fail);
}

TEST_CASE("seed controls the spot checks") {
  VerifyOptions a, b;
  a.seed = 1;
  b.seed = 1;
  const ProblemParams p(5, 3.0 / 7, 1.0, 1.0, 1.0);
  CHECK(row(verify_instance(p, a), "ode_residual").detail ==
        row(verify_instance(p, b), "ode_residual").detail);
  b.seed = 2;
  CHECK(row(verify_instance(p, a), "integral_identity").detail !=
        row(verify_instance(p, b), "integral_identity").detail);
}

TEST_CASE("positivity loss skips the remaining checks") {
  VerifyOptions o;
  o.integrate.allow_any_regime = true;
  const VerifyReport r = verify_instance(ProblemParams(3, 0.3, 3.0, 2.0, 1.0), o);
  CHECK(r.status == SolveStatus::positivity_loss);
  CHECK_FALSE(r.all_pass);
  CHECK(row(r, "decay_rate").verdict == Verdict::skipped);
}
