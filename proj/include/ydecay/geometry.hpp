#pragma once

// Curvature of the conformal metric g = v^(4/(n+2)) dx^2 in the Yamabe exponent
// m = (n-2)/(n+2), where the conformal factor is v^(1-m).
//
// The metric is put in warped-product form g = dt^2 + f(t)^2 dOmega^2 with
// f = r v^((1-m)/2) and dt = v^((1-m)/2) dr. Then
//   K0 = -f_tt / f            (planes containing the radial direction)
//   K1 = (1 - f_t^2) / f^2    (planes tangent to the spheres)
//   R  = (n-1) (2 K0 + (n-2) K1).
// These formulas are a reconstruction; they are checked against the round
// sphere and flat space before use.

#include <stdexcept>
#include <vector>

#include "ydecay/asymptotics.hpp"

namespace ydecay {

class NotYamabeCase : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct GeometrySample {
  double r;
  double R;   // scalar curvature, soliton formula
  double K0;
  double K1;
};

struct WarpedFrame {
  double f;     // r v^((1-m)/2)
  double f_t;   // 1 + ((1-m)/2) r v'/v
  double f_tt;
};

/// Warped-product data of v^(1-m) dx^2 from a jet; valid for any 0 < m < 1.
WarpedFrame warped_frame(double m, double r, const ProfileJet& jet);

/// Sectional curvatures (K0, K1) of v^(1-m) dx^2 from a jet.
std::pair<double, double> sectional_curvatures(double m, double r, const ProfileJet& jet);

/// R = (n-1)(-2 f_tt/f + (n-2)(1 - f_t^2)/f^2).
double warped_scalar_curvature(int n, double m, double r, const ProfileJet& jet);

/// (1-m)(alpha + beta r v'/v). Throws NotYamabeCase unless m = (n-2)/(n+2).
double scalar_curvature(const ProblemParams& p, double r, const ProfileJet& jet);
double scalar_curvature(const SolutionCurve& c, double r);

std::pair<double, double> sectional_curvatures(const SolutionCurve& c, double r);

GeometrySample geometry_sample(const SolutionCurve& c, double r);

struct CurvatureLimits {
  std::vector<GeometrySample> samples;  // along the ladder
  double R_limit = 0.0;
  double K0_limit = 0.0;
  double K1_limit = 0.0;
  double R_deviation = 0.0;   // |R - rho| / rho
  double K0_deviation = 0.0;  // |K0|
  double K1_deviation = 0.0;  // relative to rho / ((n-1)(n-2))
};

/// Extrapolated curvature limits along the ladder. Requires the Yamabe exponent
/// and the decay-theorem regime.
CurvatureLimits curvature_limits(const SolutionCurve& c, const LadderOptions& opts = {});

}  // namespace ydecay
