#include "splitvar/grid.hpp"

#include <algorithm>
#include <cmath>

#include "splitvar/errors.hpp"

namespace splitvar {

Grid::Grid(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 2 || n2 < 2) {
    throw DomainError("grid needs at least 2 cells per axis");
  }
}

GridFunction::GridFunction(const Grid& g, double fill)
    : grid(g), values(g.node_count(), fill), boundary_mask(g.node_count(), 0) {}

CellField2::CellField2(const Grid& g)
    : grid(g), comp1(g.cell_count(), 0.0), comp2(g.cell_count(), 0.0) {}

CellField2 gradient(const GridFunction& u) {
  const Grid& g = u.grid;
  if (u.values.size() != g.node_count()) {
    throw InvariantError("grid function shape does not match its grid");
  }
  CellField2 out(g);
  const double s1 = 0.5 / g.h1();
  const double s2 = 0.5 / g.h2();
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      const double u00 = u.at(i, j);
      const double u10 = u.at(i + 1, j);
      const double u01 = u.at(i, j + 1);
      const double u11 = u.at(i + 1, j + 1);
      const std::size_t c = g.cell(i, j);
      out.comp1[c] = ((u10 - u00) + (u11 - u01)) * s1;
      out.comp2[c] = ((u01 - u00) + (u11 - u10)) * s2;
    }
  }
  return out;
}

GridFunction divergence_residual(const CellField2& tau) {
  const Grid& g = tau.grid;
  if (tau.comp1.size() != g.cell_count() || tau.comp2.size() != g.cell_count()) {
    throw InvariantError("cell field shape does not match its grid");
  }
  GridFunction r(g);
  const double w1 = 0.5 * g.h2();  // h1 h2 / (2 h1)
  const double w2 = 0.5 * g.h1();
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      const std::size_t c = g.cell(i, j);
      const double a = w1 * tau.comp1[c];
      const double b = w2 * tau.comp2[c];
      r.at(i, j) += -a - b;
      r.at(i + 1, j) += a - b;
      r.at(i, j + 1) += -a + b;
      r.at(i + 1, j + 1) += a + b;
    }
  }
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      if (g.on_boundary(i, j)) {
        r.at(i, j) = 0.0;
      }
    }
  }
  return r;
}

GridFunction apply_dirichlet(const GridFunction& u, const BoundaryMap& u0) {
  GridFunction out = u;
  const Grid& g = u.grid;
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      if (g.on_boundary(i, j)) {
        out.at(i, j) = u0(g.x1(i), g.x2(j));
        out.boundary_mask[g.node(i, j)] = 1;
      }
    }
  }
  return out;
}

GridFunction boundary_interpolant(const Grid& g, const BoundaryMap& u0) {
  GridFunction b = apply_dirichlet(GridFunction(g), u0);
  const int n1 = g.n1();
  const int n2 = g.n2();
  const double c00 = b.at(0, 0);
  const double c10 = b.at(n1, 0);
  const double c01 = b.at(0, n2);
  const double c11 = b.at(n1, n2);
  GridFunction out = b;
  for (int j = 1; j < n2; ++j) {
    const double t = static_cast<double>(j) / n2;
    for (int i = 1; i < n1; ++i) {
      const double s = static_cast<double>(i) / n1;
      const double side = (1 - s) * b.at(0, j) + s * b.at(n1, j);
      const double cap = (1 - t) * b.at(i, 0) + t * b.at(i, n2);
      const double corner =
          (1 - s) * (1 - t) * c00 + s * (1 - t) * c10 + (1 - s) * t * c01 + s * t * c11;
      out.at(i, j) = side + cap - corner;
    }
  }
  return out;
}

double interior_max_abs(const GridFunction& r) {
  const Grid& g = r.grid;
  double m = 0.0;
  for (int j = 1; j < g.n2(); ++j) {
    for (int i = 1; i < g.n1(); ++i) {
      m = std::max(m, std::abs(r.at(i, j)));
    }
  }
  return m;
}

double boundary_lipschitz(const Grid& g, const BoundaryMap& u0) {
  double m = 0.0;
  for (int i = 0; i < g.n1(); ++i) {
    for (int j : {0, g.n2()}) {
      const double d = u0(g.x1(i + 1), g.x2(j)) - u0(g.x1(i), g.x2(j));
      m = std::max(m, std::abs(d) / g.h1());
    }
  }
  for (int j = 0; j < g.n2(); ++j) {
    for (int i : {0, g.n1()}) {
      const double d = u0(g.x1(i), g.x2(j + 1)) - u0(g.x1(i), g.x2(j));
      m = std::max(m, std::abs(d) / g.h2());
    }
  }
  return m;
}

} // namespace splitvar
