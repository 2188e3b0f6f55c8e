#include "ydecay/geometry.hpp"

#include <cmath>

namespace ydecay {

namespace {

void require_yamabe(const ProblemParams& p) {
  if (!classify(p).yamabe_case)
    throw NotYamabeCase("curvature formulas need m = (n-2)/(n+2)");
}

}  // namespace

WarpedFrame warped_frame(double m, double r, const ProfileJet& jet) {
  if (!(r > 0.0)) throw std::domain_error("warped frame needs r > 0");
  const double c = 0.5 * (1.0 - m);
  const double g = jet.dv / jet.v;  // v'/v
  const double phi = std::pow(jet.v, c);
  const double dl = g + r * jet.d2v / jet.v - r * g * g;  // d/dr (r v'/v)
  return {r * phi, 1.0 + c * r * g, c * dl / phi};
}

std::pair<double, double> sectional_curvatures(double m, double r, const ProfileJet& jet) {
  const WarpedFrame w = warped_frame(m, r, jet);
  return {-w.f_tt / w.f, (1.0 - w.f_t * w.f_t) / (w.f * w.f)};
}

double warped_scalar_curvature(int n, double m, double r, const ProfileJet& jet) {
  const auto [k0, k1] = sectional_curvatures(m, r, jet);
  return (n - 1.0) * (2.0 * k0 + (n - 2.0) * k1);
}

double scalar_curvature(const ProblemParams& p, double r, const ProfileJet& jet) {
  require_yamabe(p);
  const double ls = r == 0.0 ? 0.0 : r * jet.dv / jet.v;
  return (1.0 - p.m()) * (p.alpha() + p.beta() * ls);
}

double scalar_curvature(const SolutionCurve& c, double r) {
  return scalar_curvature(c.params(), r, c.jet(r));
}

std::pair<double, double> sectional_curvatures(const SolutionCurve& c, double r) {
  require_yamabe(c.params());
  return sectional_curvatures(c.params().m(), r, c.jet(r));
}

GeometrySample geometry_sample(const SolutionCurve& c, double r) {
  require_yamabe(c.params());
  const ProfileJet jet = c.jet(r);
  const auto [k0, k1] = sectional_curvatures(c.params().m(), r, jet);
  return {r, scalar_curvature(c.params(), r, jet), k0, k1};
}

CurvatureLimits curvature_limits(const SolutionCurve& c, const LadderOptions& opts) {
  const ProblemParams& p = c.params();
  const RegimeTag tag = classify(p);
  if (!tag.yamabe_case) throw NotYamabeCase("curvature limits need m = (n-2)/(n+2)");
  if (!tag.theorem_applies) throw std::domain_error("curvature limits need beta > rho / 2 > 0");

  CurvatureLimits out;
  std::vector<double> R, K0, K1;
  for (double r : ladder_radii(c, opts)) {
    out.samples.push_back(geometry_sample(c, r));
    R.push_back(out.samples.back().R);
    K0.push_back(out.samples.back().K0);
    K1.push_back(out.samples.back().K1);
  }
  out.R_limit = extrapolate(R).limit;
  out.K0_limit = extrapolate(K0).limit;
  out.K1_limit = extrapolate(K1).limit;
  const double n = p.n();
  const double k1_target = p.rho() / ((n - 1.0) * (n - 2.0));
  out.R_deviation = std::abs(out.R_limit - p.rho()) / p.rho();
  out.K0_deviation = std::abs(out.K0_limit);
  out.K1_deviation = std::abs(out.K1_limit - k1_target) / k1_target;
  return out;
}

}  // namespace ydecay
