#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitvar/densities.hpp"
#include "splitvar/grid.hpp"

namespace splitvar {

/// Geometric schedule 1e-1, 1e-2, ..., 1e-6.
std::vector<double> default_delta_schedule();

struct SolveConfig {
  SolveConfig(Grid grid, DensityPair densities, BoundaryMap u0);

  Grid grid;
  DensityPair densities;
  BoundaryMap u0;
  std::vector<double> delta_schedule;
  double p_reg;
  double tol_grad = 1e-8;
  int max_iter = 200;
  std::uint64_t seed = 0;
  // Keep u_delta for every schedule entry (needed by integrability sweeps).
  bool store_history = false;
};

/// Throws ConfigError on a non-decreasing schedule, entries outside (0, 1),
/// nonpositive tolerance, p_reg < 2 or max_iter < 1.
void validate(const SolveConfig& cfg);

struct DeltaRecord {
  double delta = 0;
  double j_value = 0;
  double j_delta_value = 0;
  double delta_term = 0;
  double euler_residual_max = 0;
  int iterations = 0;
  int newton_steps = 0;
  bool converged = false;
  // "converged", "IterationCapExceeded" or "Stagnated".
  std::string status;
};

struct MinimizeResult {
  GridFunction u;
  DeltaRecord record;
  // J_delta after each accepted step, starting with the initial iterate.
  std::vector<double> energy_trace;
};

/// Damped Newton for the discrete J_delta with Dirichlet data cfg.u0.
/// Newton directions come from preconditioned CG on the assembled Hessian
/// (relative tolerance 1e-8); when CG fails a diagonally scaled steepest
/// descent direction is used. Armijo backtracking (factor 0.5, slope 1e-4).
/// Without a warm start the iteration begins at the boundary interpolant.
MinimizeResult minimize_J_delta(const SolveConfig& cfg, double delta,
                                const std::optional<GridFunction>& warm_start = std::nullopt);

struct SolveReport {
  std::vector<DeltaRecord> records;
  GridFunction u_final;
  CellField2 stress_final;
  std::vector<GridFunction> history;
  // J[u_delta] nonincreasing along the schedule (slack 1e-10 relative).
  bool j_monotone = true;
  // delta_term[k+1] <= delta_term[k] * (delta[k+1]/delta[k]) * 1.1.
  bool delta_term_ratio_ok = true;
  bool all_converged = true;
};

/// Warm-started sweep over cfg.delta_schedule.
SolveReport continuation(const SolveConfig& cfg,
                         const std::optional<GridFunction>& initial = std::nullopt);

struct MultiStartResult {
  double max_gradient_discrepancy = 0;
  std::vector<SolveReport> reports;
};

/// Continuation from random interior values (uniform in [-1, 1]), one run
/// per seed. The discrepancy is the max over cells inset by 10% of each
/// side of the 2-norm gradient difference, over all pairs of runs.
MultiStartResult multi_start(const SolveConfig& cfg, const std::vector<std::uint64_t>& seeds);
/// Seeds cfg.seed, cfg.seed + 1, ..., cfg.seed + n_starts - 1.
MultiStartResult multi_start(const SolveConfig& cfg, int n_starts);

/// Uniform random interior values in [-1, 1] with Dirichlet data applied.
GridFunction random_start(const Grid& grid, const BoundaryMap& u0, std::uint64_t seed);

} // namespace splitvar
