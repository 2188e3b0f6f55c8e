#include "ydecay/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ydecay {

std::vector<double> aitken(std::span<const double> x) {
  std::vector<double> out;
  if (x.size() < 3) return out;
  out.reserve(x.size() - 2);
  for (std::size_t k = 0; k + 2 < x.size(); ++k) {
    const double d0 = x[k + 1] - x[k];
    const double d1 = x[k + 2] - x[k + 1];
    const double dd = d1 - d0;
    const double scale = std::max({std::abs(x[k]), std::abs(x[k + 1]), std::abs(x[k + 2])});
    const bool flat = std::abs(dd) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
    if (flat || d0 == 0.0 || std::abs(d1 / d0) >= 1.0) {
      out.push_back(x[k + 2]);
    } else {
      out.push_back(x[k + 2] - d1 * d1 / dd);
    }
  }
  return out;
}

std::vector<std::vector<double>> aitken_table(std::span<const double> x, std::size_t max_passes) {
  std::vector<std::vector<double>> table;
  table.emplace_back(x.begin(), x.end());
  for (std::size_t pass = 0; pass < max_passes && table.back().size() >= 4; ++pass)
    table.push_back(aitken(table.back()));
  return table;
}

Extrapolation extrapolate(std::span<const double> x) {
  Extrapolation e;
  if (x.empty()) return e;
  const auto table = aitken_table(x, 1);
  const std::vector<double>& a = table.back();
  e.limit = a.back();
  e.agreement = a.size() >= 2 ? std::abs(a.back() - a[a.size() - 2]) : 0.0;
  e.residual = e.agreement;
  const std::size_t tail = std::min<std::size_t>(x.size(), kResidualTail);
  for (std::size_t i = x.size() - tail; i < x.size(); ++i)
    e.residual = std::max(e.residual, std::abs(x[i] - e.limit));
  return e;
}

double decay_w(const SolutionCurve& c, double r) {
  const double m = c.params().m();
  // r^2 v^(1-m) = r^2 V^(1/m - 1), evaluated through the log to keep tails accurate
  const RadialState s = c.state(r);
  return r * r * std::exp((1.0 / m - 1.0) * std::log(s.V));
}

double log_slope(const SolutionCurve& c, double r) {
  const RadialState s = c.state(r);
  return r * s.P / (c.params().m() * s.V);
}

std::vector<double> ladder_radii(const SolutionCurve& c, const LadderOptions& opts) {
  if (!(opts.ratio > 1.0) || opts.count < 3)
    throw std::invalid_argument("ladder needs ratio > 1 and at least 3 rungs");
  const double top = opts.top.value_or(c.r_end());
  if (top > c.r_end() * (1.0 + 1e-12) || c.status() != SolveStatus::ok)
    throw LadderExceedsCurve("ladder top lies beyond the integrated curve");
  std::vector<double> r(opts.count);
  for (std::size_t k = 0; k < opts.count; ++k)
    r[opts.count - 1 - k] = top * std::pow(opts.ratio, -static_cast<double>(k));
  r.back() = std::min(top, c.r_end());
  if (r.front() < c.r0()) throw LadderExceedsCurve("ladder bottom lies below the launch radius");
  return r;
}

DecayEstimate decay_estimate(const SolutionCurve& c, const LadderOptions& opts) {
  const std::vector<double> radii = ladder_radii(c, opts);
  DecayEstimate d;
  d.ladder_ratio = opts.ratio;
  std::vector<double> w, ls;
  for (double r : radii) {
    w.push_back(decay_w(c, r));
    ls.push_back(log_slope(c, r));
    d.w_samples.emplace_back(r, w.back());
    d.logslope_samples.emplace_back(r, ls.back());
  }
  const Extrapolation ew = extrapolate(w);
  const Extrapolation el = extrapolate(ls);
  d.w_limit = ew.limit;
  d.w_residual = ew.residual;
  d.logslope_limit = el.limit;
  d.logslope_residual = el.residual;
  const double gate = 10.0 * c.tol();
  d.converged = ew.agreement <= gate * std::max(1.0, std::abs(ew.limit)) &&
                el.agreement <= gate * std::max(1.0, std::abs(el.limit));
  return d;
}

SubsequenceReport subsequence_value_check(const SolutionCurve& c, double burn_in, double band) {
  const ProblemParams& p = c.params();
  SubsequenceReport rep;
  rep.burn_in = burn_in;
  rep.band = band;
  rep.w_inf = w_infinity(p);
  if (p.beta() > 0.0) rep.w_1 = w_one(p);
  const double tail_start = c.r_end() / 10.0;
  const bool separable = rep.w_1 && std::abs(*rep.w_1 - rep.w_inf) > 2.0 * band * rep.w_inf;
  for (const CurveNode& nd : c.nodes()) {
    if (nd.r < burn_in) continue;
    const double w = decay_w(c, nd.r);
    ++rep.samples;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(w - rep.w_inf) / rep.w_inf);
    if (separable && nd.r >= tail_start && std::abs(w - *rep.w_1) <= band * *rep.w_1)
      ++rep.w1_hits;
  }
  rep.within_band = rep.samples > 0 && rep.max_deviation <= band;
  rep.w1_excluded = rep.w1_hits == 0;
  return rep;
}

RescalingReport rescaling_convergence(const ProblemParams& p, const RadialProfile& v,
                                      std::span<const double> lambdas, double R,
                                      std::size_t samples) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  if (samples < 2) throw std::invalid_argument("need at least two sample radii");
  RescalingReport rep;
  const double k = 2.0 / (1.0 - p.m());
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double scale = std::pow(lam, k);
    double sup = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double r = R * std::pow(10.0, static_cast<double>(i) / static_cast<double>(samples - 1));
      const double v0 = singular_solution_v0(p, r);
      sup = std::max(sup, std::abs(scale * v(lam * r) - v0) / v0);
    }
    rep.lambdas.push_back(lam);
    rep.sup_errors.push_back(sup);
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.sup_errors.size(); ++i)
    rep.strictly_decreasing = rep.strictly_decreasing && rep.sup_errors[i] < rep.sup_errors[i - 1];
  return rep;
}

RescalingReport rescaling_convergence(const SolutionCurve& c, std::span<const double> lambdas,
                                      double R, std::size_t samples) {
  double lam_max = 0.0;
  for (double l : lambdas) lam_max = std::max(lam_max, l);
  if (10.0 * R * lam_max > c.r_end() * (1.0 + 1e-12))
    throw CurveTooShort("curve does not reach 10 R max(lambda)");
  return rescaling_convergence(
      c.params(), [&c](double r) { return c.v(std::min(r, c.r_end())); }, lambdas, R, samples);
}

}  // namespace ydecay
