#pragma once

#include <optional>
#include <string>

namespace ydecay {

/// Parameters of the radial problem
///   (n-1)/m ((v^m)'' + (n-1)/r (v^m)') + alpha v + beta r v' = 0,  v(0) = eta, v'(0) = 0,
/// with alpha = (2 beta + rho) / (1 - m) always derived, never stored.
///
/// Construction only enforces what is needed for the quantities to be defined
/// (finite values, 0 < m < 1, eta > 0, n >= 1). Whether the decay theorem
/// applies is decided by classify().
class ProblemParams {
public:
  /// Throws std::invalid_argument when the tuple cannot even be represented.
  ProblemParams(int n, double m, double beta, double rho, double eta);

  int n() const { return n_; }
  double m() const { return m_; }
  double beta() const { return beta_; }
  double rho() const { return rho_; }
  double eta() const { return eta_; }
  double alpha() const { return alpha_; }

  ProblemParams with_eta(double eta) const { return {n_, m_, beta_, rho_, eta}; }

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

private:
  int n_;
  double m_;
  double beta_;
  double rho_;
  double eta_;
  double alpha_;
};

/// (2 beta + rho) / (1 - m). Throws std::invalid_argument for m >= 1.
double derive_alpha(int n, double m, double beta, double rho);

enum class Ordering { less, equal, greater };

const char* to_string(Ordering o);

struct ClassifyOptions {
  /// Relative tolerance used for the measure-zero equalities
  /// (alpha == n beta, m == (n-2)/(n+2), rho == 1).
  double rel_tol = 1e-12;
};

struct RegimeTag {
  bool theorem_applies = false;
  Ordering alpha_vs_nbeta = Ordering::equal;
  bool yamabe_case = false;
  bool explicit_case = false;
  /// Empty when theorem_applies; otherwise names the first violated constraint.
  std::string reason;
  /// Set when beta <= 0: a global solution may not exist at all.
  std::optional<std::string> advisory;
};

/// Never throws; every failure is reported in the returned tag.
RegimeTag classify(const ProblemParams& p, const ClassifyOptions& opts = {});

/// Lower threshold m rho / (n - 2 - m n) that beta must exceed.
double beta_threshold(const ProblemParams& p);

bool approx_equal(double a, double b, double rel_tol);

/// Limit of r^2 v^(1-m):  2(n-1)(n(1-m)-2) / ((1-m)(alpha(1-m) - 2 beta)).
/// Throws std::domain_error if the denominator is not positive.
double w_infinity(const ProblemParams& p);

/// 2(n-1) / ((1-m) beta); throws std::domain_error for beta <= 0.
double w_one(const ProblemParams& p);

struct ClosedFormConstants {
  double w_inf;
  std::optional<double> w_1;
};

ClosedFormConstants closed_form_constants(const ProblemParams& p);

/// Value, first and second radial derivative of a profile at one radius.
struct ProfileJet {
  double v;
  double dv;
  double d2v;
};

/// Singular power-law solution (w_inf / |x|^2)^(1/(1-m)) on the punctured space.
double singular_solution_v0(const ProblemParams& p, double x_norm);
ProfileJet singular_solution_jet(const ProblemParams& p, double r);

/// Closed-form solution (2(n-1)(n-2-nm) / ((1-m)(lambda^2 + r^2)))^(1/(1-m)),
/// valid only when alpha == n beta and rho == 1. Throws std::domain_error otherwise.
double explicit_solution(const ProblemParams& p, double lambda, double r,
                         const ClassifyOptions& opts = {});
ProfileJet explicit_solution_jet(const ProblemParams& p, double lambda, double r,
                                 const ClassifyOptions& opts = {});

/// lambda such that explicit_solution(p, lambda, 0) == p.eta().
double explicit_lambda_for_eta(const ProblemParams& p);

/// Scaling v_lambda(x) = lambda^(2/(1-m)) v(lambda x): only eta changes.
ProblemParams rescale(const ProblemParams& p, double lambda);

/// Left side of the radial ODE for a profile jet at radius r, divided by alpha v.
double ode_residual(const ProblemParams& p, double r, const ProfileJet& jet);

/// Same residual without normalization.
double ode_lhs(const ProblemParams& p, double r, const ProfileJet& jet);

}  // namespace ydecay
