#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace splitvar {

using ScalarMap = std::function<double(double)>;

/// Scalar N-function A : [0, inf) -> [0, inf) together with its Delta_2
/// data (A(2t) <= k A(t) for t >= t0) and a growth exponent p with
/// c t^p <= A(t) for large t.
struct NFunctionSpec {
  std::string id;
  ScalarMap eval;
  ScalarMap deriv;
  double delta2_k = 2.0;
  double delta2_t0 = 1.0;
  double growth_p = 1.0;
};

/// Linear-growth part f1 of a split density.
///
/// Growth: a1|t| - a2 <= f1(t) <= a3|t| + a4.
/// Ellipticity: c (1+|t|)^(-mu) <= f1''(t) <= C (1+|t|)^gamma.
/// `recession_plus` / `recession_minus` hold f1^inf(+1) and f1^inf(-1).
struct Density1Spec {
  std::string id;
  ScalarMap eval;
  ScalarMap deriv;
  ScalarMap second_deriv;
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double mu = 0;
  double gamma = 0;
  double recession_plus = 0;
  double recession_minus = 0;
  // False for densities with flat second derivative regions (Hencky).
  bool strictly_convex = true;
};

/// Superlinear part f2 of a split density, optionally of the form A(|t|).
struct Density2Spec {
  std::string id;
  ScalarMap eval;
  ScalarMap deriv;
  ScalarMap second_deriv;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  double p = 2;
  double mu_hat = 0;
  double c3 = 2;
  std::optional<NFunctionSpec> nfunction;
};

/// Controls for numeric conjugates: search half-width and whether a
/// maximizer on the search boundary is an error.
struct ConjugateOptions {
  double t_max = 1e6;
  bool strict = false;
};

/// f(xi) = f1(xi1) + f2(xi2) and f*(s) = f1*(s1) + f2*(s2).
///
/// Conjugates are evaluated by concave 1D search. f1* is +inf outside the
/// open slope interval (-f1^inf(-1), f1^inf(+1)); that case raises a
/// ConjugateError with kind "ConjugateRange".
class DensityPair {
public:
  DensityPair(Density1Spec f1, Density2Spec f2, ConjugateOptions options = {});

  const Density1Spec& f1() const noexcept { return f1_; }
  const Density2Spec& f2() const noexcept { return f2_; }
  const ConjugateOptions& options() const noexcept { return options_; }

  double f(double xi1, double xi2) const { return f1_.eval(xi1) + f2_.eval(xi2); }
  double conjugate_f1(double s) const;
  double conjugate_f2(double s) const;
  double f_conj(double s1, double s2) const { return conjugate_f1(s1) + conjugate_f2(s2); }

  /// Default regularization exponent: the f2 growth exponent for power
  /// densities (at least 2), and 2 for general N-functions.
  double default_p_reg() const;

private:
  Density1Spec f1_;
  Density2Spec f2_;
  ConjugateOptions options_;
};

// Builders ------------------------------------------------------------------

/// Phi_nu(t) = (nu-1) int_0^t int_0^s (1+r)^(-nu) dr ds, extended evenly.
Density1Spec make_phi_nu(double nu);

/// Hencky-type density: nu s^2 for |s| <= k/(sqrt(2) nu), sqrt(2) k |s| -
/// k^2/(2 nu) beyond. Linear growth; only usable as f1.
Density1Spec make_hencky(double k, double nu);

/// The two branch formulas of the Hencky density and their switch point.
struct HenckyBranches {
  double threshold;
  ScalarMap quadratic;
  ScalarMap linear;
  ScalarMap quadratic_deriv;
  ScalarMap linear_deriv;
};
HenckyBranches hencky_branches(double k, double nu);

/// sqrt(eps^2 + t^2) - eps, a smoothed modulus.
Density1Spec make_abs_smooth(double eps);

/// c |t|^p / p with attached N-function A(t) = c t^p / p.
Density2Spec make_power(double p, double c = 1.0);

/// A(t) = t ln(1 + t), applied to |t|.
Density2Spec make_tlog();

NFunctionSpec power_nfunction(double p, double c = 1.0);
NFunctionSpec tlog_nfunction();

/// String ids: "phi_nu:<nu>", "hencky:<k>:<nu>", "abs_smooth:<eps>" for f1;
/// "power:<p>[:<c>]", "nfun_tlog" for f2 and N-functions.
Density1Spec parse_density1(const std::string& id);
Density2Spec parse_density2(const std::string& id);
NFunctionSpec parse_nfunction(const std::string& id);

// Validation ----------------------------------------------------------------

struct Validation {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

struct EllipticityFit {
  double c_lower = 0;
  double c_upper = 0;
  bool holds = false;
};

/// Sample points used for envelope fits: 0 and 199 log-spaced points on
/// [1e-4, 1e4].
std::vector<double> ellipticity_samples();

/// Fits c1, C1 with c1 (1+|t|)^-mu <= f1'' <= C1 (1+|t|)^gamma.
EllipticityFit fit_ellipticity(const Density1Spec& f1);
/// Fits c2, C2 with c2 (1+|t|)^(p-2) <= f2'' <= C2 (1+|t|)^(p-2).
EllipticityFit fit_ellipticity(const Density2Spec& f2);

Validation validate(const NFunctionSpec& a);
Validation validate(const Density1Spec& f1);
Validation validate(const Density2Spec& f2);

} // namespace splitvar
