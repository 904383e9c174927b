#include "splitvar/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splitvar/energy.hpp"
#include "splitvar/errors.hpp"
#include "splitvar/parallel.hpp"

namespace splitvar {

StressFields stress(const GridFunction& u, const DensityPair& d, double delta, double p_reg) {
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  StressFields out{CellField2(g), CellField2(g), std::vector<double>(g.cell_count())};
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const double a1 = grad.comp1[c];
      const double a2 = grad.comp2[c];
      const double t1 = d.f1().deriv(a1);
      const double t2 = d.f2().deriv(a2);
      const double x = p_reg * std::pow(1.0 + a1 * a1, 0.5 * (p_reg - 2.0)) * a1;
      out.tau.comp1[c] = t1;
      out.tau.comp2[c] = t2;
      out.x_delta[c] = x;
      out.sigma_delta.comp1[c] = t1 + delta * x;
      out.sigma_delta.comp2[c] = t2;
    }
  });
  return out;
}

double lagrangian(const GridFunction& v, const CellField2& tau, const DensityPair& d) {
  const Grid& g = v.grid;
  if (tau.grid != g) {
    throw ContractViolation("lagrangian: field and stress live on different grids");
  }
  const CellField2 grad = gradient(v);
  const double area = g.cell_area();
  std::vector<double> terms(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const double s1 = tau.comp1[c];
      const double s2 = tau.comp2[c];
      terms[c] = area * (s1 * grad.comp1[c] + s2 * grad.comp2[c] - d.conjugate_f1(s1) -
                         d.conjugate_f2(s2));
    }
  });
  return pairwise_sum(terms);
}

double RValue::error_bound(const GridFunction& v, const GridFunction& ref) const {
  const Grid& g = v.grid;
  std::vector<double> diff;
  diff.reserve(g.node_count());
  for (int j = 1; j < g.n2(); ++j) {
    for (int i = 1; i < g.n1(); ++i) {
      diff.push_back(std::abs(v.at(i, j) - ref.at(i, j)));
    }
  }
  return div_residual_max * pairwise_sum(diff);
}

RValue eval_R(const CellField2& tau, const DensityPair& d, const GridFunction& u0_field,
              double div_tol) {
  if (!(div_tol >= 0)) {
    throw DomainError("div_tol must be nonnegative");
  }
  RValue out;
  out.div_residual_max = interior_max_abs(divergence_residual(tau));
  out.certified = out.div_residual_max <= div_tol;
  out.r_value = lagrangian(u0_field, tau, d);
  return out;
}

DualReport duality_gap(const GridFunction& u, const CellField2& tau, const DensityPair& d,
                       const GridFunction& u0_field, double div_tol) {
  DualReport rep;
  rep.j_value = eval_J(u, d).j_total;
  const RValue r = eval_R(tau, d, u0_field, div_tol);
  rep.r_value = r.r_value;
  rep.certified = r.certified;
  rep.div_residual_max = r.div_residual_max;
  rep.gap_absolute = rep.j_value - rep.r_value;
  rep.gap_relative = rep.gap_absolute / (1.0 + std::abs(rep.j_value));
  rep.extremality_max_violation = extremality_check(u, tau, d);
  return rep;
}

DualReport dual_report(const GridFunction& u, const DensityPair& d, double delta, double p_reg,
                       const GridFunction& u0_field, double div_tol) {
  const StressFields sf = stress(u, d, delta, p_reg);
  DualReport rep;
  rep.j_value = eval_J(u, d).j_total;
  // sigma_delta is the field the Euler equation makes divergence free. For
  // large delta its first component can leave the slope interval, where f1*
  // is +inf and R[sigma_delta] = -inf.
  rep.div_residual_max = interior_max_abs(divergence_residual(sf.sigma_delta));
  rep.certified = div_tol >= 0 && rep.div_residual_max <= div_tol;
  try {
    rep.r_value = lagrangian(u0_field, sf.sigma_delta, d);
  } catch (const ConjugateError& e) {
    if (e.kind() != "ConjugateRange") {
      throw;
    }
    rep.r_value = -std::numeric_limits<double>::infinity();
  }
  rep.gap_absolute = rep.j_value - rep.r_value;
  rep.gap_relative = rep.gap_absolute / (1.0 + std::abs(rep.j_value));
  // The unregularized tau is the field extremal for f itself.
  rep.extremality_max_violation = extremality_check(u, sf.tau, d);
  rep.delta_stress_norm = delta_stress_norm(u.grid, sf.x_delta, delta, p_reg);
  return rep;
}

std::vector<double> extremality_violations(const GridFunction& u, const CellField2& sigma,
                                           const DensityPair& d) {
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  std::vector<double> out(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const double a1 = grad.comp1[c];
      const double a2 = grad.comp2[c];
      const double s1 = sigma.comp1[c];
      const double s2 = sigma.comp2[c];
      const double pair = s1 * a1 + s2 * a2;
      out[c] = std::abs(d.f(a1, a2) + d.f_conj(s1, s2) - pair) / (1.0 + std::abs(pair));
    }
  });
  return out;
}

double extremality_check(const GridFunction& u, const CellField2& sigma, const DensityPair& d) {
  const std::vector<double> v = extremality_violations(u, sigma, d);
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double delta_stress_norm(const Grid& grid, std::span<const double> x_delta, double delta,
                         double p_reg) {
  if (x_delta.size() != grid.cell_count()) {
    throw ContractViolation("delta_stress_norm: field size does not match the grid");
  }
  if (!(p_reg > 1)) {
    throw DomainError("p_reg must exceed 1");
  }
  const double q = p_reg / (p_reg - 1.0);
  std::vector<double> terms(x_delta.size());
  for (std::size_t c = 0; c < x_delta.size(); ++c) {
    terms[c] = grid.cell_area() * std::pow(std::abs(delta * x_delta[c]), q);
  }
  return std::pow(pairwise_sum(terms), 1.0 / q);
}

} // namespace splitvar
