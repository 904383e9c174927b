#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitvar/densities.hpp"
#include "splitvar/energy.hpp"
#include "splitvar/solve.hpp"

namespace splitvar {

// Integrability sweep --------------------------------------------------------

/// "chi" rows integrate (1 + |d2 u|^2)^(e/2); "kappa" rows integrate
/// (1 + |d1 u|^2)^(e/2). Both over the inset region.
struct SweepRow {
  double delta = 0;
  std::string kind;
  double exponent = 0;
  double integral = 0;
};

struct SweepFlag {
  std::string kind;
  double exponent = 0;
  // Relative change between the two smallest delta levels.
  double last_change = 0;
  bool bounded = false;
};

struct SweepTable {
  double interior_margin = 0;
  std::vector<SweepRow> rows;
  std::vector<SweepFlag> flags;

  bool all_bounded() const;
  /// Integral for (delta index into the history, kind, exponent index).
  const SweepRow& row(std::size_t level, const std::string& kind, double exponent) const;
};

/// The inset region keeps cells whose centres satisfy |x_i| <= 1 - 2 margin,
/// i.e. each side of the square loses the fraction `margin` at both ends.
/// Requires at least three stored levels and margin in (0, 0.5).
SweepTable integrability_sweep(const SolveReport& report, const std::vector<double>& chis,
                               const std::vector<double>& kappas, double margin);

void write_csv(std::ostream& os, const SweepTable& t);

// Approximation experiment ---------------------------------------------------

struct ApproxRow {
  double width = 0;
  double l1_distance = 0;
  double area = 0;
  double f2_energy = 0;
  double j_value = 0;
};

struct ApproxTable {
  std::vector<ApproxRow> rows;
  // Values the rows should approach: K[w], the area of w including its
  // singular and boundary parts, and the f2 energy of the smooth part.
  double k_value = 0;
  double area_limit = 0;
  double f2_limit = 0;
  // |J[w_eps] - K[w]| for the last (smallest) width.
  double terminal_deviation = 0;
};

/// Smooths every jump of `w` by a triweight kernel of half-width eps in x1
/// and lets the smoothed field reach u0 through a linear layer of width eps
/// wherever a lateral trace detaches. Integrals use the cell midpoint in x2
/// and, in x1, the cell gradient away from the smoothing zones and composite
/// Gauss-Legendre panels inside them. Widths must decrease and stay below
/// the distance from every jump line to the lateral boundary.
ApproxTable approximation_experiment(const BVCandidate& w, const DensityPair& d,
                                     const BoundaryMap& u0, const std::vector<double>& widths);

void write_csv(std::ostream& os, const ApproxTable& t);

// Relaxation gap --------------------------------------------------------------

/// Candidate equal to `u` as a field, but with a jump of `height` on `line`
/// whose effect on the nodal values is cancelled by a one-cell ramp in the
/// smooth part.
BVCandidate gratuitous_jump(const GridFunction& u, int line, double height);

struct RelaxationGap {
  double gap = 0;
  double j_solver = 0;
  std::vector<double> k_values;
};

/// min over candidates of K minus the final J of a continuation run with
/// `cfg`. Throws ConfigError for an empty list and ContractViolation when
/// the gap is below -1e-3 (1 + |J|).
RelaxationGap relaxation_gap(const std::vector<BVCandidate>& candidates, const SolveConfig& cfg);
/// Same, against an already computed minimizer.
RelaxationGap relaxation_gap(const std::vector<BVCandidate>& candidates, const SolveConfig& cfg,
                             const GridFunction& minimizer);

} // namespace splitvar
