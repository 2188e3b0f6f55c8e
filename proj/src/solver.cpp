#include "ydecay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ydecay/dopri5.hpp"

namespace ydecay {

namespace {

// Above this |r P / V| the profile reaches V = 0 within one step of resolution.
constexpr double kSlopeCap = 1e8;
constexpr double kMaxStepLinear = 0.05;
constexpr double kMaxStepLog = 0.25;
// Target change of ln(integrand) per Simpson subinterval.
constexpr double kSimpsonLogStep = 0.02;

double hermite(double t, double h, double y0, double d0, double y1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

// dP/dr without argument checks; V > 0 and r > 0 assumed.
double dP_dr(const ProblemParams& p, double r, double V, double P) {
  const double m = p.m();
  const double nm1 = p.n() - 1.0;
  const double vpow = std::pow(V, 1.0 / m - 1.0);  // v / V
  return -nm1 / r * P - m / nm1 * (p.alpha() * vpow * V + p.beta() * r / m * vpow * P);
}

// Log-phase variables of a node: (s, y = ln V, z = r P / V, dz/ds).
struct LogNode {
  double s, y, z, zs;
};

LogNode to_log(const CurveNode& nd) {
  const double z = nd.r * nd.P / nd.V;
  return {std::log(nd.r), std::log(nd.V), z, z + nd.r * nd.r * nd.dP / nd.V - z * z};
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ok: return "ok";
    case SolveStatus::positivity_loss: return "positivity_loss";
    case SolveStatus::step_size_underflow: return "step_size_underflow";
  }
  return "?";
}

double series_v2(const ProblemParams& p) {
  const double n = p.n();
  return -p.m() * p.alpha() * p.eta() / (2.0 * n * (n - 1.0));
}

RadialState series_origin(const ProblemParams& p, double r0) {
  if (!(r0 > 0.0)) throw std::domain_error("series launch radius must be positive");
  const double v2 = series_v2(p);
  return {r0, std::pow(p.eta(), p.m()) + v2 * r0 * r0, 2.0 * v2 * r0};
}

RadialDerivative rhs(const ProblemParams& p, const RadialState& s) {
  if (!(s.r > 0.0)) throw std::domain_error("rhs: radius must be positive");
  if (!(s.V > 0.0)) throw PositivityError("rhs: v^m is not positive");
  return {s.P, dP_dr(p, s.r, s.V, s.P)};
}

ProfileJet jet_from_state(const ProblemParams& p, const RadialState& s) {
  const double k = 1.0 / p.m();
  const double dP = rhs(p, s).dP;
  const double v = std::pow(s.V, k);
  const double vr = v / s.V;  // V^(1/m - 1)
  return {v, k * vr * s.P, k * vr * dP + k * (k - 1.0) * vr / s.V * s.P * s.P};
}

SolutionCurve integrate(const ProblemParams& p, const IntegrateOptions& opts) {
  if (!(opts.r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (!(opts.r_max > opts.r0)) throw std::invalid_argument("r_max must exceed r0");
  if (!(opts.tol >= 1e-12 && opts.tol <= 1e-3))
    throw std::invalid_argument("tol must lie in [1e-12, 1e-3]");
  if (!opts.allow_any_regime) {
    const RegimeTag tag = classify(p);
    if (!tag.theorem_applies) throw std::invalid_argument(tag.reason);
  }

  SolutionCurve curve(p, opts);
  const double tol = opts.tol;
  const double m = p.m();
  const double n = p.n();
  const double nm1 = n - 1.0;

  const RadialState s0 = series_origin(p, opts.r0);
  if (!(s0.V > 0.0)) {
    curve.status_ = SolveStatus::positivity_loss;
    curve.nodes_.push_back({s0.r, std::pow(p.eta(), m), 0.0, 2.0 * series_v2(p)});
    curve.build_moments();
    return curve;
  }

  ode::Stats stats;
  const double r_lin_end = std::min(opts.r_max, kLogSwitchRadius);

  // Phase 1: (V, P) against r.
  {
    // tolerances on V = v^m scaled by m so that tol bounds the relative error of v
    const double vscale = std::pow(p.eta(), m);
    const double tv = tol * m;
    ode::Tolerance<2> t{{0.0, tv * vscale}, {tv, tv}};
    ode::StepLimits lim{opts.r0, kMaxStepLinear, 200000};
    auto f = [&](double r, const ode::Vec<2>& y, ode::Vec<2>& dy) {
      if (!(y[0] > 0.0)) return false;
      dy[0] = y[1];
      dy[1] = dP_dr(p, r, y[0], y[1]);
      return std::isfinite(dy[1]);
    };
    auto obs = [&](double r, const ode::Vec<2>& y, const ode::Vec<2>& dy) {
      curve.nodes_.push_back({r, y[0], y[1], dy[1]});
      return true;
    };
    const auto out = ode::integrate<2>(f, opts.r0, r_lin_end, ode::Vec<2>{s0.V, s0.P}, t, lim,
                                       obs, &stats);
    if (out == ode::Outcome::rhs_failure)
      curve.status_ = SolveStatus::positivity_loss;
    else if (out == ode::Outcome::step_underflow)
      curve.status_ = SolveStatus::step_size_underflow;
  }

  // Phase 2: (ln V, r P / V) against s = ln r; power-law tails become linear.
  if (curve.status_ == SolveStatus::ok && opts.r_max > kLogSwitchRadius) {
    const CurveNode start = curve.nodes_.back();
    const double s_end = std::log(opts.r_max);
    const double c = m / nm1;
    const double beta_over_m = p.beta() / m;
    const double vexp = 1.0 / m - 1.0;
    // ln v = (ln V) / m: an absolute error of tol m in ln V is a relative error tol in v
    ode::Tolerance<2> t{{tol * m, tol * m}, {0.0, tol * m}};
    ode::StepLimits lim{kMaxStepLog * 0.1, kMaxStepLog, 200000};
    auto f = [&](double s, const ode::Vec<2>& y, ode::Vec<2>& dy) {
      const double z = y[1];
      if (!std::isfinite(y[0]) || !std::isfinite(z) || z < -kSlopeCap) return false;
      const double w = std::exp(2.0 * s + vexp * y[0]);  // r^2 v^(1-m)
      dy[0] = z;
      dy[1] = (2.0 - n) * z - z * z - c * w * (p.alpha() + beta_over_m * z);
      return std::isfinite(dy[1]);
    };
    bool first = true;
    bool lost = false;
    auto obs = [&](double s, const ode::Vec<2>& y, const ode::Vec<2>&) {
      if (first) {  // node at r = 1 already stored by phase 1
        first = false;
        return true;
      }
      if (y[1] < -kSlopeCap) {
        lost = true;
        return false;
      }
      const double r = s >= s_end ? opts.r_max : std::exp(s);
      const double V = std::exp(y[0]);
      const double P = y[1] * V / r;
      curve.nodes_.push_back({r, V, P, dP_dr(p, r, V, P)});
      return true;
    };
    const double y0 = std::log(start.V);
    const double z0 = start.r * start.P / start.V;
    const auto out =
        ode::integrate<2>(f, std::log(start.r), s_end, ode::Vec<2>{y0, z0}, t, lim, obs, &stats);
    if (lost || out == ode::Outcome::rhs_failure)
      curve.status_ = SolveStatus::positivity_loss;
    else if (out == ode::Outcome::step_underflow)
      curve.status_ = SolveStatus::step_size_underflow;
  }

  curve.rejected_ = stats.rejected;
  curve.build_moments();
  return curve;
}

std::size_t SolutionCurve::segment_index(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                             [](double x, const CurveNode& nd) { return x < nd.r; });
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, nodes_.size() - 2);
}

RadialState SolutionCurve::state(double r) const {
  if (!in_range(r)) throw std::out_of_range("radius outside the integrated range");
  if (r < nodes_.front().r || nodes_.size() < 2) {
    const double v2 = series_v2(params_);
    return {r, std::pow(params_.eta(), params_.m()) + v2 * r * r, 2.0 * v2 * r};
  }
  const std::size_t i = segment_index(r);
  const CurveNode& a = nodes_[i];
  const CurveNode& b = nodes_[i + 1];
  if (a.r < kLogSwitchRadius) {
    const double h = b.r - a.r;
    const double t = (r - a.r) / h;
    return {r, hermite(t, h, a.V, a.P, b.V, b.P), hermite(t, h, a.P, a.dP, b.P, b.dP)};
  }
  const LogNode la = to_log(a);
  const LogNode lb = to_log(b);
  const double h = lb.s - la.s;
  const double t = (std::log(r) - la.s) / h;
  const double V = std::exp(hermite(t, h, la.y, la.z, lb.y, lb.z));
  const double z = hermite(t, h, la.z, la.zs, lb.z, lb.zs);
  return {r, V, z * V / r};
}

ProfileJet SolutionCurve::jet(double r) const {
  const RadialState s = state(r);
  if (r < nodes_.front().r || r == 0.0) {
    const double k = 1.0 / params_.m();
    const double v = std::pow(s.V, k);
    const double vr = v / s.V;
    const double dP = 2.0 * series_v2(params_);
    return {v, k * vr * s.P, k * vr * dP + k * (k - 1.0) * vr / s.V * s.P * s.P};
  }
  return jet_from_state(params_, s);
}

double SolutionCurve::segment_moment(std::size_t i, double r_hi) const {
  const CurveNode& a = nodes_[i];
  const double n = params_.n();
  if (r_hi <= a.r) return 0.0;
  const bool log_phase = a.r >= kLogSwitchRadius;
  // Integrand in the segment's own variable: r^(n-1) v dr or r^n v ds.
  auto g_at = [&](double r) { return std::pow(r, log_phase ? n : n - 1.0) * v(r); };
  // exp(log(r)) can overshoot r_end by an ulp
  auto g = [&](double x) { return g_at(log_phase ? std::min(std::exp(x), r_hi) : x); };
  const double x0 = log_phase ? std::log(a.r) : a.r;
  const double x1 = log_phase ? std::log(r_hi) : r_hi;
  const double g0 = g_at(a.r);
  const double g1 = g_at(r_hi);
  const double spread = std::abs(std::log(g1 / g0));
  auto sub = static_cast<std::size_t>(std::ceil(spread / kSimpsonLogStep));
  sub = std::clamp<std::size_t>(sub + (sub & 1u), 4, 1024);
  const double h = (x1 - x0) / static_cast<double>(sub);
  double acc = g0 + g1;
  for (std::size_t k = 1; k < sub; ++k) acc += (k & 1u ? 4.0 : 2.0) * g(x0 + h * static_cast<double>(k));
  return acc * h / 3.0;
}

void SolutionCurve::build_moments() {
  const double n = params_.n();
  const double m = params_.m();
  const double eta = params_.eta();
  const double r0 = nodes_.front().r;
  // int_0^r0 z^(n-1) (eta + (1/m) eta^(1-m) V2 z^2) dz
  const double head = eta * std::pow(r0, n) / n +
                      std::pow(eta, 1.0 - m) / m * series_v2(params_) * std::pow(r0, n + 2.0) /
                          (n + 2.0);
  moments_.assign(nodes_.size(), head);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    moments_[i + 1] = moments_[i] + segment_moment(i, nodes_[i + 1].r);
}

double SolutionCurve::radial_moment(double r) const {
  if (!in_range(r)) throw std::out_of_range("radius outside the integrated range");
  const double n = params_.n();
  if (r <= nodes_.front().r || nodes_.size() < 2) {
    const double m = params_.m();
    const double eta = params_.eta();
    return eta * std::pow(r, n) / n +
           std::pow(eta, 1.0 - m) / m * series_v2(params_) * std::pow(r, n + 2.0) / (n + 2.0);
  }
  const std::size_t i = segment_index(r);
  return moments_[i] + segment_moment(i, r);
}

double ode_residual(const SolutionCurve& c, double r) {
  if (!c.in_range(r) || r <= 0.0) throw std::out_of_range("radius outside the integrated range");
  return ode_residual(c.params(), r, c.jet(r));
}

double integral_identity_residual(const SolutionCurve& c, double r) {
  if (!c.in_range(r) || r <= 0.0) throw std::out_of_range("radius outside the integrated range");
  const ProblemParams& p = c.params();
  const double n = p.n();
  const RadialState s = c.state(r);
  const double v = std::pow(s.V, 1.0 / p.m());
  const double lhs = -(n - 1.0) / p.m() * s.P;
  const double rhs_val =
      p.beta() * r * v + (p.alpha() - n * p.beta()) / std::pow(r, n - 1.0) * c.radial_moment(r);
  const double scale = std::max(std::abs(lhs), std::abs(rhs_val));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs_val) / scale;
}

double lower_barrier(const ProblemParams& p, double r) {
  const double m = p.m();
  return std::pow(std::pow(p.eta(), m - 1.0) + (1.0 - m) * p.beta() / (2.0 * (p.n() - 1.0)) * r * r,
                  -1.0 / (1.0 - m));
}

double upper_barrier(const ProblemParams& p, double r) {
  const double m = p.m();
  const double n = p.n();
  return std::pow(std::pow(p.eta(), m - 1.0) + p.alpha() * (1.0 - m) / (2.0 * n * (n - 1.0)) * r * r,
                  -1.0 / (1.0 - m));
}

BoundReport bound_check(const SolutionCurve& c, double slack, const ClassifyOptions& opts) {
  const ProblemParams& p = c.params();
  const RegimeTag tag = classify(p, opts);
  BoundReport rep;
  rep.lower.applies = p.beta() > 0.0 && tag.alpha_vs_nbeta != Ordering::greater;
  rep.upper.applies = p.beta() > 0.0 && tag.alpha_vs_nbeta != Ordering::less;
  rep.lower.worst_margin = rep.upper.worst_margin = std::numeric_limits<double>::infinity();

  auto visit = [&](BoundSide& side, double margin, double r) {
    if (margin < side.worst_margin) {
      side.worst_margin = margin;
      side.worst_r = r;
    }
    if (margin < -slack) {
      side.holds = false;
      ++side.violations;
    }
  };
  for (const CurveNode& nd : c.nodes()) {
    const double v = std::pow(nd.V, 1.0 / p.m());
    if (rep.lower.applies) {
      const double L = lower_barrier(p, nd.r);
      visit(rep.lower, (v - L) / L, nd.r);
    }
    if (rep.upper.applies) {
      const double U = upper_barrier(p, nd.r);
      visit(rep.upper, (U - v) / U, nd.r);
    }
  }
  if (!rep.lower.applies) rep.lower.worst_margin = 0.0;
  if (!rep.upper.applies) rep.upper.worst_margin = 0.0;
  return rep;
}

}  // namespace ydecay
