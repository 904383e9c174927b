#include "splitvar/energy.hpp"

#include <cmath>
#include <string>

#include "splitvar/errors.hpp"
#include "splitvar/parallel.hpp"

namespace splitvar {

namespace {

double checked_sum(const std::vector<double>& terms, const char* what) {
  const double s = pairwise_sum(terms);
  if (!std::isfinite(s)) {
    throw OverflowError(std::string("non-finite cell value in ") + what);
  }
  return s;
}

} // namespace

double recession_value(const Density1Spec& f1, double s) {
  if (s > 0) {
    return f1.recession_plus * s;
  }
  if (s < 0) {
    return f1.recession_minus * -s;
  }
  return 0.0;
}

EnergyBreakdown eval_J(const GridFunction& u, const DensityPair& d) {
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  const double area = g.cell_area();
  std::vector<double> t1(g.cell_count());
  std::vector<double> t2(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      t1[c] = area * d.f1().eval(grad.comp1[c]);
      t2[c] = area * d.f2().eval(grad.comp2[c]);
    }
  });
  EnergyBreakdown out;
  out.j_f1 = checked_sum(t1, "J (f1 part)");
  out.j_f2 = checked_sum(t2, "J (f2 part)");
  out.e_part = out.j_f2;
  out.j_total = out.j_f1 + out.j_f2;
  return out;
}

EnergyBreakdown eval_J_delta(const GridFunction& u, const DensityPair& d, double delta,
                             double p) {
  if (!(delta > 0 && delta < 1)) {
    throw DomainError("eval_J_delta requires 0 < delta < 1");
  }
  EnergyBreakdown out = eval_J(u, d);
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  const double area = g.cell_area();
  std::vector<double> t(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const double a = grad.comp1[c];
      t[c] = area * std::pow(1.0 + a * a, 0.5 * p);
    }
  });
  out.delta_term = delta * checked_sum(t, "J_delta (regularization)");
  out.j_total = out.j_f1 + out.j_f2 + out.delta_term;
  return out;
}

double eval_E(const Grid& grid, std::span<const double> v, const Density2Spec& f2) {
  if (v.size() != grid.cell_count()) {
    throw InvariantError("eval_E: one value per cell expected");
  }
  std::vector<double> t(v.size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    t[c] = grid.cell_area() * f2.eval(v[c]);
  }
  return checked_sum(t, "E");
}

EnergyBreakdown eval_K(const BVCandidate& w, const DensityPair& d, const BoundaryMap& u0) {
  validate(w, u0);
  const Grid& g = w.smooth_part.grid;
  EnergyBreakdown out = eval_J(w.smooth_part, d);

  std::vector<double> singular;
  for (const auto& s : w.jumps) {
    singular.push_back(recession_value(d.f1(), s.height) * (s.j_end - s.j_begin) * g.h2());
  }
  out.k_singular = pairwise_sum(singular);

  std::vector<double> boundary;
  for (int j = 0; j <= g.n2(); ++j) {
    const double weight = (j == 0 || j == g.n2()) ? 0.5 * g.h2() : g.h2();
    // Outer normal component: -1 on x1 = -1, +1 on x1 = +1.
    const double left = u0(-1.0, g.x2(j)) - w.trace_left[j];
    const double right = u0(1.0, g.x2(j)) - w.trace_right[j];
    boundary.push_back(weight * recession_value(d.f1(), -left));
    boundary.push_back(weight * recession_value(d.f1(), right));
  }
  out.k_boundary = pairwise_sum(boundary);
  return out;
}

double luxemburg_norm(const Grid& grid, std::span<const double> v, const NFunctionSpec& a) {
  if (v.size() != grid.cell_count()) {
    throw InvariantError("luxemburg_norm: one value per cell expected");
  }
  bool all_zero = true;
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw DomainError("luxemburg_norm: non-finite input");
    }
    all_zero = all_zero && x == 0.0;
  }
  if (all_zero) {
    return 0.0;
  }
  std::vector<double> t(v.size());
  const auto excess = [&](double l) {
    for (std::size_t c = 0; c < v.size(); ++c) {
      t[c] = grid.cell_area() * a.eval(std::abs(v[c]) / l);
    }
    return pairwise_sum(t) - 1.0;
  };
  double lo = 1e-12;
  double hi = 1e12;
  if (excess(hi) > 0) {
    throw Error("LuxemburgUnbounded", "modular exceeds 1 at l = 1e12");
  }
  if (excess(lo) <= 0) {
    return lo;
  }
  while (hi - lo > 1e-10 * hi) {
    // Geometric midpoint while the bracket spans decades.
    const double mid = (hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (excess(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

} // namespace splitvar
