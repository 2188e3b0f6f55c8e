#include "ydecay/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "ydecay/asymptotics.hpp"
#include "ydecay/geometry.hpp"

namespace ydecay {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "n/a";
    case Verdict::skipped: return "skipped";
  }
  return "?";
}

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Verdict verdict(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

CheckRow row(std::string key, std::string claim, Verdict v = Verdict::skipped,
             std::string detail = "") {
  return {std::move(key), std::move(claim), v, std::move(detail)};
}

CheckRow bound_row(const char* key, const char* claim, const BoundSide& s, double slack) {
  if (!s.applies) return row(key, claim, Verdict::not_applicable);
  std::string d = "worst margin " + sci(s.worst_margin) + " at r=" + sci(s.worst_r) +
                  ", slack " + sci(slack);
  if (s.violations) d += ", " + std::to_string(s.violations) + " violations";
  return row(key, claim, verdict(s.holds), d);
}

CheckRow monotonicity_row(const SolutionCurve& c) {
  const ProblemParams& p = c.params();
  const char* claim = "v' < 0 and v + (beta/alpha) r v' > 0";
  if (!(p.beta() != 0.0 && p.alpha() > 0.0 && p.m() * p.alpha() / p.beta() <= p.n() - 2))
    return row("monotonicity", claim, Verdict::not_applicable, "needs m alpha / beta <= n - 2");
  std::size_t bad_slope = 0;
  std::size_t bad_combo = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const CurveNode& node : c.nodes()) {
    const ProfileJet j = jet_from_state(p, {node.r, node.V, node.P});
    if (!(j.dv < 0.0)) ++bad_slope;
    const double combo = (j.v + p.beta() / p.alpha() * node.r * j.dv) / j.v;
    if (!(combo > 0.0)) ++bad_combo;
    worst = std::min(worst, combo);
  }
  std::string d = std::to_string(c.nodes().size()) + " samples, min (v + (beta/alpha) r v')/v = " +
                  sci(worst);
  if (bad_slope) d += ", v' >= 0 at " + std::to_string(bad_slope);
  if (bad_combo) d += ", combination <= 0 at " + std::to_string(bad_combo);
  return row("monotonicity", claim, verdict(bad_slope == 0 && bad_combo == 0), d);
}

CheckRow divergence_row(const SolutionCurve& c, Ordering ord) {
  const ProblemParams& p = c.params();
  const char* claim = "r^(n-2) v^m strictly increasing over decades 1e2..1e6";
  if (ord != Ordering::greater)
    return row("vm_divergence", claim, Verdict::not_applicable, "needs alpha > n beta");
  std::vector<double> vals;
  for (int k = 2; k <= 6; ++k) {
    const double r = std::pow(10.0, k);
    if (r > c.r_end()) break;
    vals.push_back(std::pow(r, p.n() - 2) * c.state(r).V);
  }
  if (vals.size() < 5)
    return row("vm_divergence", claim, Verdict::fail, "curve ends at r=" + sci(c.r_end()));
  bool inc = true;
  for (std::size_t i = 1; i < vals.size(); ++i) inc = inc && vals[i] > vals[i - 1];
  return row("vm_divergence", claim, verdict(inc),
             "values " + sci(vals.front()) + " .. " + sci(vals.back()));
}

CheckRow curvature_row(const SolutionCurve& c, const RegimeTag& tag, double strict) {
  const char* claim = "R -> rho, K0 -> 0, K1 -> rho/((n-1)(n-2))";
  if (!tag.yamabe_case)
    return row("curvature_limits", claim, Verdict::not_applicable, "needs m = (n-2)/(n+2)");
  if (c.r_end() < VerifyThresholds::k0_radius)
    return row("curvature_limits", claim, Verdict::fail, "curve ends before r=1e5");
  const CurvatureLimits cl = curvature_limits(c);
  const double k0 = std::abs(sectional_curvatures(c, VerifyThresholds::k0_radius).first);
  const double rel = VerifyThresholds::curvature_rel * strict;
  const bool ok = cl.R_deviation <= rel && cl.K1_deviation <= rel &&
                  k0 <= VerifyThresholds::k0_abs * strict;
  return row("curvature_limits", claim, verdict(ok),
             "R dev " + sci(cl.R_deviation) + ", |K0(1e5)| " + sci(k0) + ", K1 dev " +
                 sci(cl.K1_deviation));
}

}  // namespace

VerifyReport verify_instance(const ProblemParams& p, const VerifyOptions& opts) {
  VerifyReport rep;
  const RegimeTag tag = classify(p);
  const double strict = opts.strict;

  rep.rows.push_back(row("regime", "parameters satisfy the decay-theorem hypotheses",
                         verdict(tag.theorem_applies),
                         tag.theorem_applies ? "alpha " + std::string(to_string(tag.alpha_vs_nbeta)) +
                                                   " n beta"
                                             : tag.reason));
  static const char* later[][2] = {
      {"decay_rate", "r^2 v^(1-m) -> w_infinity"},
      {"log_slope", "r v'/v -> -2/(1-m)"},
      {"lower_bound", "v above the lower barrier when alpha <= n beta"},
      {"upper_bound", "v below the upper barrier when alpha >= n beta"},
      {"monotonicity", "v' < 0 and v + (beta/alpha) r v' > 0"},
      {"vm_divergence", "r^(n-2) v^m strictly increasing over decades 1e2..1e6"},
      {"curvature_limits", "R -> rho, K0 -> 0, K1 -> rho/((n-1)(n-2))"},
      {"ode_residual", "radial ODE residual <= 1e-6 on [1, 1e4]"},
      {"integral_identity", "integral identity residual <= 1e-6 on [1, 1e4]"},
  };
  auto skip_rest = [&](const std::string& why) {
    for (const auto& k : later) rep.rows.push_back(row(k[0], k[1], Verdict::skipped, why));
  };

  if (!tag.theorem_applies && !opts.integrate.allow_any_regime) {
    skip_rest("regime check failed");
    return rep;
  }
  IntegrateOptions io = opts.integrate;
  io.allow_any_regime = true;
  const SolutionCurve c = integrate(p, io);
  rep.integrated = true;
  rep.status = c.status();
  if (c.status() != SolveStatus::ok) {
    skip_rest(std::string(to_string(c.status())) + " at r=" + sci(c.r_end()));
    return rep;
  }

  const DecayEstimate d = decay_estimate(c);
  const double winf = w_infinity(p);
  const double wdev = std::abs(d.w_limit - winf) / winf;
  rep.rows.push_back(row(later[0][0], later[0][1],
                         verdict(wdev <= VerifyThresholds::decay_rel * strict),
                         "w_limit " + sci(d.w_limit) + ", w_infinity " + sci(winf) + ", rel dev " +
                             sci(wdev)));
  const double slope = -2.0 / (1.0 - p.m());
  const double sdev = std::abs(d.logslope_limit - slope) / std::abs(slope);
  rep.rows.push_back(row(later[1][0], later[1][1],
                         verdict(sdev <= VerifyThresholds::log_slope_rel * strict),
                         "limit " + sci(d.logslope_limit) + ", target " + sci(slope) +
                             ", rel dev " + sci(sdev)));

  const double slack = std::max(VerifyThresholds::bound_slack, 10.0 * io.tol) * strict;
  const BoundReport b = bound_check(c, slack);
  rep.rows.push_back(bound_row(later[2][0], later[2][1], b.lower, slack));
  rep.rows.push_back(bound_row(later[3][0], later[3][1], b.upper, slack));
  rep.rows.push_back(monotonicity_row(c));
  rep.rows.push_back(divergence_row(c, tag.alpha_vs_nbeta));
  rep.rows.push_back(curvature_row(c, tag, strict));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double hi = std::min(1e4, c.r_end());
  double ode = 0.0;
  double ident = 0.0;
  for (std::size_t i = 0; i < opts.spot_checks; ++i) {
    const double r = std::pow(hi, unit(rng));
    ode = std::max(ode, std::abs(ode_residual(c, r)));
    ident = std::max(ident, std::abs(integral_identity_residual(c, r)));
  }
  const double lim = VerifyThresholds::residual * strict;
  const std::string n_pts = std::to_string(opts.spot_checks) + " seeded points, max ";
  rep.rows.push_back(row(later[7][0], later[7][1], verdict(ode <= lim), n_pts + sci(ode)));
  rep.rows.push_back(row(later[8][0], later[8][1], verdict(ident <= lim), n_pts + sci(ident)));

  rep.all_pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const CheckRow& r) {
    return r.verdict == Verdict::pass || r.verdict == Verdict::not_applicable;
  });
  return rep;
}

void print_report(std::ostream& os, const VerifyReport& rep) {
  std::size_t kw = 5;
  for (const CheckRow& r : rep.rows) kw = std::max(kw, r.key.size());
  os << std::left << std::setw(static_cast<int>(kw)) << "check" << "  " << std::setw(7)
     << "verdict" << "  detail\n";
  for (const CheckRow& r : rep.rows) {
    os << std::setw(static_cast<int>(kw)) << r.key << "  " << std::setw(7) << to_string(r.verdict)
       << "  " << r.claim;
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << '\n';
  }
  os << (rep.all_pass ? "all applicable checks pass\n" : "some checks failed\n");
  os << std::right;
}

}  // namespace ydecay
