#pragma once

#include <span>
#include <vector>

#include "splitvar/densities.hpp"

namespace splitvar {

struct ConjugateResult {
  double value = 0;
  double argmax = 0;
  // Maximizer within 1e-6 * (hi - lo) of an end of the search interval.
  bool at_boundary = false;
  int iterations = 0;
};

/// max over t in [lo, hi] of s t - g(t) by golden-section search on the
/// concave objective. Throws ConjugateError("NonConcave") when sampled
/// values contradict concavity, and ConjugateError("ConjugateBoundary")
/// for a boundary maximizer when `strict` is set.
ConjugateResult conjugate_on(const ScalarMap& g, double s, double lo, double hi,
                             bool strict = false);

/// Legendre transform on the half line: max over t in [0, t_max] of
/// s t - g(t), for s >= 0.
ConjugateResult conjugate_scalar(const ScalarMap& g, double s, double t_max = 1e6,
                                 bool strict = false);

/// |A(t) + A*(A'(t)) - t A'(t)|.
double young_residual(const NFunctionSpec& a, double t, double t_max = 1e6);

struct Dual4Fit {
  double c_fit = 0;
  bool holds = false;
};

/// Smallest c with A*(A'(t)) <= c (A(t) + 1) over the samples. `holds`
/// requires the fit to change by at most 5% when the sample set is
/// refined by midpoints.
Dual4Fit check_condition_dual4(const NFunctionSpec& a, std::span<const double> samples);

/// lim_{R -> inf} f(R s) / R for s = +-1, estimated at R = 1e4, 1e6, 1e8
/// and extrapolated with Aitken's delta-squared process. Throws
/// NonLinearGrowth when the estimates do not contract.
double recession(const ScalarMap& f, int sign);

/// Dense table of g* on [0, s_max] with monotone cubic (Fritsch-Carlson)
/// interpolation. Built once, read-only afterwards.
class TabulatedConjugate {
public:
  TabulatedConjugate(const ScalarMap& g, double s_max, int nodes, double t_max = 1e6);

  double operator()(double s) const;
  double s_max() const noexcept { return s_max_; }
  const std::vector<double>& nodes() const noexcept { return s_; }
  const std::vector<double>& values() const noexcept { return v_; }

private:
  double s_max_;
  std::vector<double> s_;
  std::vector<double> v_;
  std::vector<double> m_;
};

} // namespace splitvar
