#include "splitvar/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "splitvar/duality.hpp"
#include "splitvar/energy.hpp"
#include "splitvar/errors.hpp"
#include "splitvar/parallel.hpp"

namespace splitvar {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

constexpr double kArmijo = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr double kMinStep = 1e-12;
constexpr double kCgTol = 1e-8;

// Interior node numbering for the unknown vector.
class Unknowns {
public:
  explicit Unknowns(const Grid& g) : g_(g) {}

  int count() const { return (g_.n1() - 1) * (g_.n2() - 1); }
  int index(int i, int j) const {
    if (g_.on_boundary(i, j)) {
      return -1;
    }
    return (j - 1) * (g_.n1() - 1) + (i - 1);
  }

  Vec gather(const GridFunction& u) const {
    Vec x(count());
    for (int j = 1; j < g_.n2(); ++j) {
      for (int i = 1; i < g_.n1(); ++i) {
        x[index(i, j)] = u.at(i, j);
      }
    }
    return x;
  }

  void scatter(const Vec& x, GridFunction& u) const {
    for (int j = 1; j < g_.n2(); ++j) {
      for (int i = 1; i < g_.n1(); ++i) {
        u.at(i, j) = x[index(i, j)];
      }
    }
  }

private:
  Grid g_;
};

// Regularized scalar pieces of f_delta.
struct Regularized {
  const DensityPair& d;
  double delta;
  double p;

  double reg(double t) const { return delta * std::pow(1.0 + t * t, 0.5 * p); }
  double reg_second(double t) const {
    const double w = 1.0 + t * t;
    return delta * p * std::pow(w, 0.5 * p - 2.0) * (1.0 + (p - 1.0) * t * t);
  }
};

double energy(const GridFunction& u, const Regularized& r) {
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  std::vector<double> terms(g.cell_count());
  const double area = g.cell_area();
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const double a1 = grad.comp1[c];
      const double a2 = grad.comp2[c];
      terms[c] = area * (r.d.f1().eval(a1) + r.reg(a1) + r.d.f2().eval(a2));
    }
  });
  const double s = pairwise_sum(terms);
  if (!std::isfinite(s)) {
    throw OverflowError("J_delta is not finite");
  }
  return s;
}

Vec energy_gradient(const GridFunction& u, const Regularized& r, const Unknowns& idx) {
  const StressFields sf = stress(u, r.d, r.delta, r.p);
  return idx.gather(divergence_residual(sf.sigma_delta));
}

SpMat hessian(const GridFunction& u, const Regularized& r, const Unknowns& idx) {
  const Grid& g = u.grid;
  const CellField2 grad = gradient(u);
  const double area = g.cell_area();
  const double s1 = 0.5 / g.h1();
  const double s2 = 0.5 / g.h2();
  const double a1[4] = {-s1, s1, -s1, s1};
  const double a2[4] = {-s2, -s2, s2, s2};

  std::vector<double> k1(g.cell_count());
  std::vector<double> k2(g.cell_count());
  parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      k1[c] = r.d.f1().second_deriv(grad.comp1[c]) + r.reg_second(grad.comp1[c]);
      k2[c] = r.d.f2().second_deriv(grad.comp2[c]);
    }
  });

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.cell_count() * 16);
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      const std::size_t c = g.cell(i, j);
      if (k1[c] < -1e-10 || k2[c] < -1e-10 || !std::isfinite(k1[c]) || !std::isfinite(k2[c])) {
        std::ostringstream os;
        os << "negative or non-finite curvature in cell (" << i << ", " << j << "): " << k1[c]
           << ", " << k2[c];
        throw NonConvexDetected(os.str());
      }
      const int nodes[4] = {idx.index(i, j), idx.index(i + 1, j), idx.index(i, j + 1),
                            idx.index(i + 1, j + 1)};
      for (int a = 0; a < 4; ++a) {
        if (nodes[a] < 0) {
          continue;
        }
        for (int b = 0; b < 4; ++b) {
          if (nodes[b] < 0) {
            continue;
          }
          const double v = area * (k1[c] * a1[a] * a1[b] + k2[c] * a2[a] * a2[b]);
          trip.emplace_back(nodes[a], nodes[b], v);
        }
      }
    }
  }
  SpMat h(idx.count(), idx.count());
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Vec scaled_descent(const SpMat& h, const Vec& grad) {
  Vec d(grad.size());
  const Vec diag = h.diagonal();
  for (Eigen::Index k = 0; k < grad.size(); ++k) {
    d[k] = diag[k] > 0 ? -grad[k] / diag[k] : -grad[k];
  }
  return d;
}

GridFunction start_field(const SolveConfig& cfg, const std::optional<GridFunction>& warm) {
  if (!warm) {
    return boundary_interpolant(cfg.grid, cfg.u0);
  }
  if (warm->grid != cfg.grid) {
    throw ConfigError("warm start lives on a different grid");
  }
  GridFunction u = apply_dirichlet(*warm, cfg.u0);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.boundary_mask[k] &&
        std::abs(u.values[k] - warm->values[k]) > 1e-9 * (1.0 + std::abs(u.values[k]))) {
      throw InvariantError("warm start is not consistent with the Dirichlet data");
    }
  }
  return u;
}

} // namespace

std::vector<double> default_delta_schedule() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

SolveConfig::SolveConfig(Grid g, DensityPair d, BoundaryMap boundary)
    : grid(g),
      densities(std::move(d)),
      u0(std::move(boundary)),
      delta_schedule(default_delta_schedule()),
      p_reg(densities.default_p_reg()) {}

void validate(const SolveConfig& cfg) {
  if (cfg.delta_schedule.empty()) {
    throw ConfigError("delta schedule is empty");
  }
  for (std::size_t k = 0; k < cfg.delta_schedule.size(); ++k) {
    const double d = cfg.delta_schedule[k];
    if (!(d > 0 && d < 1)) {
      throw ConfigError("delta schedule entries must lie in (0, 1)");
    }
    if (k > 0 && !(d < cfg.delta_schedule[k - 1])) {
      throw ConfigError("delta schedule must be strictly decreasing");
    }
  }
  if (!(cfg.tol_grad > 0)) {
    throw ConfigError("tol_grad must be positive");
  }
  if (!(cfg.p_reg >= 2)) {
    throw ConfigError("p_reg must be at least 2");
  }
  if (cfg.max_iter < 1) {
    throw ConfigError("max_iter must be positive");
  }
  if (!cfg.u0) {
    throw ConfigError("boundary data missing");
  }
}

MinimizeResult minimize_J_delta(const SolveConfig& cfg, double delta,
                                const std::optional<GridFunction>& warm_start) {
  if (!(delta > 0 && delta < 1)) {
    throw DomainError("delta must lie in (0, 1)");
  }
  const Regularized reg{cfg.densities, delta, cfg.p_reg};
  const Unknowns idx(cfg.grid);

  GridFunction u = start_field(cfg, warm_start);
  MinimizeResult out{u, {}, {}};
  out.record.delta = delta;

  double e = energy(u, reg);
  Vec grad = energy_gradient(u, reg, idx);
  double rmax = max_abs(grad);
  out.energy_trace.push_back(e);

  int it = 0;
  out.record.status = "IterationCapExceeded";
  for (; it < cfg.max_iter; ++it) {
    if (rmax <= cfg.tol_grad) {
      out.record.status = "converged";
      break;
    }
    const SpMat h = hessian(u, reg, idx);

    Vec dir;
    bool newton = false;
    {
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                               Eigen::IncompleteCholesky<double>>
          cg;
      cg.setTolerance(kCgTol);
      cg.setMaxIterations(std::max<Eigen::Index>(200, 4 * idx.count()));
      cg.compute(h);
      if (cg.info() == Eigen::Success) {
        dir = cg.solve(-grad);
        newton = cg.info() == Eigen::Success && dir.allFinite();
      }
    }
    if (newton) {
      const double curvature = dir.dot(h * dir);
      if (curvature < -1e-10 * dir.squaredNorm()) {
        throw NonConvexDetected("Hessian-vector product shows negative curvature");
      }
    }
    if (!newton || !(grad.dot(dir) < 0)) {
      dir = scaled_descent(h, grad);
      newton = false;
    }
    const double slope = grad.dot(dir);

    const Vec x = idx.gather(u);
    GridFunction trial = u;
    double step = 1.0;
    bool accepted = false;
    double e_new = e;
    Vec grad_new;
    while (step >= kMinStep) {
      idx.scatter(x + step * dir, trial);
      e_new = energy(trial, reg);
      if (e_new <= e + kArmijo * step * slope) {
        accepted = true;
        grad_new = energy_gradient(trial, reg, idx);
        break;
      }
      // Near the minimizer the Armijo decrease drops below the rounding
      // level of J; accept steps that keep J flat and shrink the residual.
      if (e_new <= e + 1e-14 * (1.0 + std::abs(e))) {
        grad_new = energy_gradient(trial, reg, idx);
        if (max_abs(grad_new) < rmax) {
          accepted = true;
          break;
        }
      }
      step *= kBacktrack;
    }
    if (!accepted) {
      out.record.status = "Stagnated";
      break;
    }
    u = trial;
    e = e_new;
    grad = grad_new;
    rmax = max_abs(grad);
    out.energy_trace.push_back(e);
    if (newton) {
      ++out.record.newton_steps;
    }
  }
  if (out.record.status == "IterationCapExceeded" && rmax <= cfg.tol_grad) {
    out.record.status = "converged";
  }

  out.u = u;
  out.record.iterations = it;
  out.record.euler_residual_max = rmax;
  out.record.converged = out.record.status == "converged";
  const EnergyBreakdown jd = eval_J_delta(u, cfg.densities, delta, cfg.p_reg);
  out.record.j_value = jd.j_f1 + jd.j_f2;
  out.record.j_delta_value = jd.j_total;
  out.record.delta_term = jd.delta_term;
  return out;
}

SolveReport continuation(const SolveConfig& cfg, const std::optional<GridFunction>& initial) {
  validate(cfg);
  SolveReport report{{}, GridFunction(cfg.grid), CellField2(cfg.grid), {}};
  std::optional<GridFunction> current = initial;
  for (double delta : cfg.delta_schedule) {
    MinimizeResult step = [&] {
      try {
        return minimize_J_delta(cfg, delta, current);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "at delta = " << delta << ": " << e.what();
        throw Error(e.kind(), os.str());
      }
    }();
    report.records.push_back(step.record);
    report.all_converged = report.all_converged && step.record.converged;
    if (cfg.store_history) {
      report.history.push_back(step.u);
    }
    current = std::move(step.u);
  }
  report.u_final = *current;
  report.stress_final =
      stress(report.u_final, cfg.densities, cfg.delta_schedule.back(), cfg.p_reg).sigma_delta;

  for (std::size_t k = 1; k < report.records.size(); ++k) {
    const auto& prev = report.records[k - 1];
    const auto& cur = report.records[k];
    if (cur.j_value > prev.j_value + 1e-10 * (1.0 + std::abs(prev.j_value))) {
      report.j_monotone = false;
    }
    if (cur.delta_term > prev.delta_term * (cur.delta / prev.delta) * 1.1) {
      report.delta_term_ratio_ok = false;
    }
  }
  return report;
}

GridFunction random_start(const Grid& grid, const BoundaryMap& u0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridFunction u(grid);
  for (double& v : u.values) {
    v = dist(rng);
  }
  return apply_dirichlet(u, u0);
}

MultiStartResult multi_start(const SolveConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 2) {
    throw ConfigError("multi_start needs at least two starts");
  }
  MultiStartResult out;
  std::vector<CellField2> grads;
  for (std::uint64_t seed : seeds) {
    out.reports.push_back(continuation(cfg, random_start(cfg.grid, cfg.u0, seed)));
    grads.push_back(gradient(out.reports.back().u_final));
  }
  const Grid& g = cfg.grid;
  const double limit = 1.0 - 2.0 * 0.1;
  for (std::size_t a = 0; a < grads.size(); ++a) {
    for (std::size_t b = a + 1; b < grads.size(); ++b) {
      for (int j = 0; j < g.n2(); ++j) {
        if (std::abs(g.cell_x2(j)) > limit) {
          continue;
        }
        for (int i = 0; i < g.n1(); ++i) {
          if (std::abs(g.cell_x1(i)) > limit) {
            continue;
          }
          const std::size_t c = g.cell(i, j);
          const double d1 = grads[a].comp1[c] - grads[b].comp1[c];
          const double d2 = grads[a].comp2[c] - grads[b].comp2[c];
          out.max_gradient_discrepancy = std::max(out.max_gradient_discrepancy, std::hypot(d1, d2));
        }
      }
    }
  }
  return out;
}

MultiStartResult multi_start(const SolveConfig& cfg, int n_starts) {
  if (n_starts < 2) {
    throw ConfigError("multi_start needs at least two starts");
  }
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < n_starts; ++k) {
    seeds.push_back(cfg.seed + static_cast<std::uint64_t>(k));
  }
  return multi_start(cfg, seeds);
}

} // namespace splitvar
