#pragma once

#include <span>
#include <vector>

#include "splitvar/densities.hpp"
#include "splitvar/grid.hpp"

namespace splitvar {

/// tau = (f1'(d1 u), f2'(d2 u)); x_delta = p (1 + |d1 u|^2)^((p-2)/2) d1 u;
/// sigma_delta = tau + delta (x_delta, 0), the gradient of the regularized
/// density.
struct StressFields {
  CellField2 sigma_delta;
  CellField2 tau;
  std::vector<double> x_delta;
};

StressFields stress(const GridFunction& u, const DensityPair& d, double delta, double p_reg);

/// l(v, tau) = sum h1 h2 [tau . grad v - f1*(tau1) - f2*(tau2)].
double lagrangian(const GridFunction& v, const CellField2& tau, const DensityPair& d);

struct RValue {
  double r_value = 0;
  bool certified = false;
  double div_residual_max = 0;

  /// Bound on |l(v, tau) - r_value| for an admissible v: the residual
  /// max-norm times sum |v - ref| over interior nodes.
  double error_bound(const GridFunction& v, const GridFunction& ref) const;
};

/// Dual functional evaluated through l(u0_field, tau). When the discrete
/// divergence of tau vanishes (max-norm <= div_tol) the value does not
/// depend on the admissible field; otherwise `certified` is false and the
/// true infimum may be -inf.
RValue eval_R(const CellField2& tau, const DensityPair& d, const GridFunction& u0_field,
              double div_tol);

struct DualReport {
  double j_value = 0;
  double r_value = 0;
  double gap_absolute = 0;
  double gap_relative = 0;
  double div_residual_max = 0;
  double extremality_max_violation = 0;
  double delta_stress_norm = 0;
  bool certified = false;
};

DualReport duality_gap(const GridFunction& u, const CellField2& tau, const DensityPair& d,
                       const GridFunction& u0_field, double div_tol);

/// Full report for a regularized iterate. R is evaluated at sigma_delta
/// (r_value = -inf when sigma_delta leaves the domain of f1*), extremality
/// at tau, plus the L^(p/(p-1)) norm of delta X_delta.
DualReport dual_report(const GridFunction& u, const DensityPair& d, double delta, double p_reg,
                       const GridFunction& u0_field, double div_tol);

/// Per-cell |f(grad u) + f*(sigma) - sigma . grad u| / (1 + |sigma . grad u|).
std::vector<double> extremality_violations(const GridFunction& u, const CellField2& sigma,
                                           const DensityPair& d);
double extremality_check(const GridFunction& u, const CellField2& sigma, const DensityPair& d);

/// (sum h1 h2 |delta x|^q)^(1/q) with q = p/(p-1).
double delta_stress_norm(const Grid& grid, std::span<const double> x_delta, double delta,
                         double p_reg);

} // namespace splitvar
