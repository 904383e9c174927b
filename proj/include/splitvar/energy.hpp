#pragma once

#include <span>
#include <vector>

#include "splitvar/densities.hpp"
#include "splitvar/grid.hpp"

namespace splitvar {

/// Energy contributions. For J and J_delta the singular and boundary terms
/// are zero; for K, `e_part` equals `j_f2` and `k_total()` is the relaxed
/// value. For J_delta, `j_total` includes `delta_term`.
struct EnergyBreakdown {
  double j_total = 0;
  double j_f1 = 0;
  double j_f2 = 0;
  double k_singular = 0;
  double k_boundary = 0;
  double e_part = 0;
  double delta_term = 0;

  double k_total() const { return j_f1 + k_singular + k_boundary + e_part; }
};

/// Jump of height `height` across the vertical grid line x1 = grid.x1(line)
/// on the cells j_begin <= j < j_end.
struct JumpSegment {
  int line = 0;
  int j_begin = 0;
  int j_end = 0;
  double height = 0;
};

/// BV-type candidate: a nodal absolutely continuous part plus jumps on
/// vertical grid lines. The represented field is
///   w(x) = smooth_part(x) + sum over lines left of x1 of the jump height.
/// `trace_left` / `trace_right` hold the inner traces on x1 = -1 / x1 = +1
/// at the boundary nodes (n2 + 1 values each).
struct BVCandidate {
  GridFunction smooth_part;
  std::vector<JumpSegment> jumps;
  std::vector<double> trace_left;
  std::vector<double> trace_right;

  /// Candidate with traces read off the field itself.
  static BVCandidate from_field(const GridFunction& smooth, std::vector<JumpSegment> jumps = {});

  /// Total jump height across `line` (zero when the line carries no jump).
  double line_height(int line) const;
  /// Sum of jump heights on lines with index < i.
  double jump_offset(int i) const;
};

/// Throws InvariantError unless jumps lie on interior lines, add up to an
/// x2-independent height per line, traces have the right size and the
/// top/bottom values match u0 away from jump lines.
void validate(const BVCandidate& w, const BoundaryMap& u0);

/// Positive 1-homogeneous recession value f1^inf(s).
double recession_value(const Density1Spec& f1, double s);

EnergyBreakdown eval_J(const GridFunction& u, const DensityPair& d);

/// J plus delta * sum h1 h2 (1 + |d1 u|^2)^(p/2); the added term is
/// reported in `delta_term`.
EnergyBreakdown eval_J_delta(const GridFunction& u, const DensityPair& d, double delta,
                             double p);

/// sum over cells of h1 h2 f2(v).
double eval_E(const Grid& grid, std::span<const double> v, const Density2Spec& f2);

EnergyBreakdown eval_K(const BVCandidate& w, const DensityPair& d, const BoundaryMap& u0);

/// inf { l > 0 : sum over cells of h1 h2 A(|v| / l) <= 1 }, by bisection
/// on l in [1e-12, 1e12] to relative width 1e-10.
double luxemburg_norm(const Grid& grid, std::span<const double> v, const NFunctionSpec& a);

} // namespace splitvar
