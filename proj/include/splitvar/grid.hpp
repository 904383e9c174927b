#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace splitvar {

/// Uniform rectangle grid over (-1, 1)^2 with n1 x n2 cells. Only the cell
/// counts are stored; spacings are 2/n1 and 2/n2.
class Grid {
public:
  Grid(int n1, int n2);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  double h1() const noexcept { return 2.0 / n1_; }
  double h2() const noexcept { return 2.0 / n2_; }
  double cell_area() const noexcept { return h1() * h2(); }

  double x1(int i) const noexcept { return -1.0 + 2.0 * i / n1_; }
  double x2(int j) const noexcept { return -1.0 + 2.0 * j / n2_; }
  double cell_x1(int i) const noexcept { return -1.0 + (2.0 * i + 1.0) / n1_; }
  double cell_x2(int j) const noexcept { return -1.0 + (2.0 * j + 1.0) / n2_; }

  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(n1_ + 1) * static_cast<std::size_t>(n2_ + 1);
  }
  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_);
  }
  // Row-major: x2 index selects the row.
  std::size_t node(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * (n1_ + 1) + i;
  }
  std::size_t cell(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * n1_ + i;
  }
  bool on_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == n1_ || j == n2_;
  }

  bool operator==(const Grid& o) const noexcept { return n1_ == o.n1_ && n2_ == o.n2_; }
  bool operator!=(const Grid& o) const noexcept { return !(*this == o); }

private:
  int n1_;
  int n2_;
};

using BoundaryMap = std::function<double(double x1, double x2)>;

/// Nodal scalar field with a Dirichlet lock mask.
struct GridFunction {
  Grid grid;
  std::vector<double> values;
  std::vector<unsigned char> boundary_mask;

  explicit GridFunction(const Grid& g, double fill = 0.0);

  double& at(int i, int j) { return values[grid.node(i, j)]; }
  double at(int i, int j) const { return values[grid.node(i, j)]; }
  bool locked(int i, int j) const { return boundary_mask[grid.node(i, j)] != 0; }
};

/// Two cell-centred components (one value per cell each).
struct CellField2 {
  Grid grid;
  std::vector<double> comp1;
  std::vector<double> comp2;

  explicit CellField2(const Grid& g);
};

/// Cell-centred gradient: forward differences averaged over the two cell
/// edges in the other direction. Exact on affine data.
CellField2 gradient(const GridFunction& u);

/// Adjoint of `gradient` scaled by the cell area, restricted to interior
/// nodes: <gradient(phi), tau> h1 h2 = <phi, r> for interior phi.
/// Boundary entries of the result are zero.
GridFunction divergence_residual(const CellField2& tau);

/// Sets boundary nodes to u0 and records them in the mask.
GridFunction apply_dirichlet(const GridFunction& u, const BoundaryMap& u0);

/// Transfinite (Coons) interpolation of the boundary values of `u0`; exact
/// for affine boundary data.
GridFunction boundary_interpolant(const Grid& grid, const BoundaryMap& u0);

/// Max over interior nodes of |values|.
double interior_max_abs(const GridFunction& r);

// Serialization -------------------------------------------------------------

/// CSV with header "x1,x2,value", one row per node in storage order.
void write_csv(std::ostream& os, const GridFunction& u);
GridFunction read_csv(std::istream& is);

/// Binary "VSGF": 4-byte magic, n1 and n2 as little-endian uint32, then
/// (n1+1)(n2+1) little-endian float64 values in row-major order.
void write_vsgf(std::ostream& os, const GridFunction& u);
GridFunction read_vsgf(std::istream& is);

void save_vsgf(const std::string& path, const GridFunction& u);
GridFunction load_vsgf(const std::string& path);

/// Boundary data from a table of (x1, x2, value) rows covering every boundary
/// node of `grid`. The result is a lookup that snaps to the nearest node.
BoundaryMap boundary_from_table(const Grid& grid, std::istream& csv);

/// Largest |difference quotient| between adjacent boundary nodes.
double boundary_lipschitz(const Grid& grid, const BoundaryMap& u0);

} // namespace splitvar
