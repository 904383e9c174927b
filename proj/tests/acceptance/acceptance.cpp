// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from tests/oracles.hpp or closed forms.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "splitvar/conjugate.hpp"
#include "splitvar/diagnostics.hpp"
#include "splitvar/duality.hpp"
#include "splitvar/predict.hpp"
#include "splitvar/solve.hpp"

using namespace splitvar;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// The criterion-4 problem: 32 x 32, u0 = 2 x1 - x2, Phi_1.5 and t^2.
SolveConfig affine_problem() {
  return SolveConfig(Grid(32, 32), DensityPair(make_phi_nu(1.5), make_power(2.0, 2.0)),
                     [](double x1, double x2) { return 2.0 * x1 - x2; });
}

Verdict fenchel_kit() {
  const auto t0 = Clock::now();
  double young = 0.0;
  double conj = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const NFunctionSpec a = power_nfunction(p);
    for (int k = 0; k < 100; ++k) {
      const double t = 50.0 * k / 99.0;
      const double scale = t * a.deriv(t);
      young = std::max(young, young_residual(a, t) / std::max(scale, 1e-300));
      if (t == 0.0) {
        young = std::max(young, young_residual(a, t));
      }
      const double s = a.deriv(t);
      const double exact = oracle::power_conjugate(p, s);
      const double got = conjugate_scalar(a.eval, s).value;
      conj = std::max(conj, exact == 0.0 ? std::abs(got) : std::abs(got - exact) / exact);
    }
  }
  const double secs = seconds_since(t0);
  return {young <= 1e-8 && conj <= 1e-6 && secs < 1.0,
          "young " + num(young) + ", conjugate " + num(conj) + ", " + num(secs) + " s"};
}

Verdict phi_family() {
  double fd = 0.0;
  double rec = 0.0;
  bool zero = true;
  for (double nu : {1.2, 1.5, 1.9}) {
    const Density1Spec f = make_phi_nu(nu);
    for (int k = 0; k <= 1000; ++k) {
      const double t = 100.0 * k / 1000.0;
      const double exact = oracle::phi_second(nu, t);
      fd = std::max(fd, std::abs(f.second_deriv(t) - exact) / exact);
      fd = std::max(fd, std::abs(oracle::central_second(f.eval, t) - exact) / exact);
    }
    rec = std::max({rec, std::abs(recession(f.eval, 1) - 1.0), std::abs(recession(f.eval, -1) - 1.0)});
    zero = zero && f.eval(0.0) == 0.0;
  }
  return {fd <= 1e-6 && rec <= 1e-4 && zero,
          "second derivative " + num(fd) + ", recession " + num(rec) +
              ", Phi(0) == 0 " + (zero ? "yes" : "no")};
}

Verdict hencky() {
  const HenckyBranches b = hencky_branches(1.0, 1.0);
  const double s0 = 1.0 / std::sqrt(2.0);
  const double jump = std::abs(b.quadratic(s0) - b.linear(s0));
  const double slope = std::abs(b.quadratic_deriv(s0) - b.linear_deriv(s0));
  const double value = std::max(std::abs(b.quadratic(s0) - 0.5), std::abs(b.linear(s0) - 0.5));
  const double where = std::abs(b.threshold - s0);
  const bool ok = jump <= 1e-12 && slope <= 1e-12 && value <= 1e-12 && where <= 1e-12;
  return {ok, "value gap " + num(jump) + ", slope gap " + num(slope) + ", |v - 0.5| " + num(value)};
}

struct AffineRun {
  SolveReport report;
  double seconds = 0;
};

AffineRun run_affine() {
  SolveConfig cfg = affine_problem();
  cfg.store_history = true;
  const auto t0 = Clock::now();
  AffineRun r{continuation(cfg, random_start(cfg.grid, cfg.u0, 7)), 0};
  r.seconds = seconds_since(t0);
  return r;
}

Verdict affine_oracle(const AffineRun& run) {
  const SolveReport& r = run.report;
  const Grid& g = r.u_final.grid;
  double err = 0.0;
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      err = std::max(err, std::abs(r.u_final.at(i, j) - (2.0 * g.x1(i) - g.x2(j))));
    }
  }
  const double j_exact = 4.0 * (oracle::phi(1.5, 2.0) + 1.0);
  const double j_err = std::abs(r.records.back().j_value - j_exact);
  const double euler = r.records.back().euler_residual_max;
  const bool ok = err <= 1e-6 && j_err <= 1e-8 && euler <= 1e-8 && run.seconds < 10.0;
  return {ok, "nodal error " + num(err) + ", |J - J*| " + num(j_err) + ", Euler residual " +
                  num(euler) + ", " + num(run.seconds) + " s (random start)"};
}

Verdict duality(const AffineRun& run) {
  const SolveConfig cfg = affine_problem();
  const GridFunction u0_field = boundary_interpolant(cfg.grid, cfg.u0);
  double worst_gap = INFINITY;
  std::vector<DualReport> reps;
  bool certified = true;
  for (std::size_t k = 0; k < run.report.history.size(); ++k) {
    const DualReport d = dual_report(run.report.history[k], cfg.densities,
                                     run.report.records[k].delta, cfg.p_reg, u0_field,
                                     10.0 * cfg.tol_grad);
    worst_gap = std::min(worst_gap, d.gap_absolute);
    certified = certified && d.certified;
    reps.push_back(d);
  }
  const double rel = std::abs(reps.back().gap_relative);
  const double ext = reps.back().extremality_max_violation;
  const double ratio = reps.back().delta_stress_norm / reps.front().delta_stress_norm;
  const bool ok = worst_gap >= -1e-9 && rel <= 1e-3 && ext <= 1e-6 && ratio <= 1e-3 && certified;
  return {ok, "min gap " + num(worst_gap) + ", final rel gap " + num(rel) + ", extremality " +
                  num(ext) + ", stress-norm ratio " + num(ratio) +
                  (certified ? ", certified" : ", NOT certified")};
}

Verdict bookkeeping(const AffineRun& run) {
  const auto& rec = run.report.records;
  bool decreasing = true;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    decreasing = decreasing && rec[k].delta_term < rec[k - 1].delta_term;
  }
  const double ratio = rec.back().delta_term / rec.front().delta_term;
  return {decreasing && ratio <= 1e-4,
          std::string(decreasing ? "decreasing" : "NOT decreasing") + ", final/initial " +
              num(ratio)};
}

Verdict sweep() {
  const auto t0 = Clock::now();
  SolveConfig cfg(Grid(64, 64), DensityPair(make_phi_nu(1.5), make_power(2.0, 2.0)),
                  [](double x1, double x2) { return 2.0 * x1 - x2 + 0.5 * x1 * x2; });
  cfg.store_history = true;
  const SolveReport r = continuation(cfg);
  const double p = cfg.densities.f2().p;
  const SweepTable t = integrability_sweep(r, {p + 1, p + 2, p + 4}, {4.0, 8.0}, 0.1);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (const auto& f : t.flags) {
    worst = std::max(worst, f.last_change);
  }
  const bool ok = t.all_bounded() && r.all_converged && secs < 120.0;
  return {ok, std::to_string(t.flags.size()) + " exponents, " +
                  (t.all_bounded() ? "all BOUNDED" : "some GROWING") + ", worst change " +
                  num(worst) + (r.all_converged ? "" : ", solver not converged") + ", " +
                  num(secs) + " s"};
}

Verdict relaxation() {
  const Grid g(32, 32);
  const DensityPair d(make_phi_nu(1.5), make_power(2.0, 2.0));
  const BoundaryMap step = [](double x1, double) { return x1 > 0 ? 1.0 : 0.0; };
  const int line = g.n1() / 2;
  const BVCandidate w =
      BVCandidate::from_field(GridFunction(g), {JumpSegment{line, 0, g.n2(), 1.0}});
  const EnergyBreakdown k = eval_K(w, d, step);
  const ApproxTable t = approximation_experiment(
      w, d, step, {0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8});
  const double rel = t.terminal_deviation / k.k_total();
  const bool ok = k.k_singular == 2.0 && k.k_total() == 2.0 && rel <= 0.01;
  return {ok, "k_singular " + num(k.k_singular) + ", terminal |J - K|/K " + num(rel) +
                  " at width " + num(t.rows.back().width)};
}

Verdict uniqueness() {
  const SolveConfig cfg = affine_problem();
  const MultiStartResult m = multi_start(cfg, 5);
  bool converged = true;
  for (const auto& r : m.reports) {
    converged = converged && r.all_converged;
  }
  return {m.max_gradient_discrepancy <= 1e-5 && converged,
          "max discrepancy " + num(m.max_gradient_discrepancy) + " over 5 starts"};
}

Verdict predictor() {
  const IntegrabilityPrediction a = predict_integrability(3.0, 0.7);
  const IntegrabilityPrediction b = predict_integrability(3.0, 0.8);
  bool unbounded = true;
  for (double p : {2.0, 3.0, 5.0}) {
    const IntegrabilityPrediction z = predict_integrability(p, 0.0);
    unbounded = unbounded && std::isinf(z.chi) && z.feasible;
  }
  const bool ok = a.feasible && a.which_case == IntegrabilityCase::GammaSmall && a.chi > 4.0 &&
                  !b.feasible && b.which_case != IntegrabilityCase::GammaSmall && unbounded;
  return {ok, "chi(3, 0.7) " + num(a.chi) + ", (3, 0.8) " +
                  (b.feasible ? "feasible" : "infeasible") + ", gamma = 0 unbounded " +
                  (unbounded ? "yes" : "no")};
}

template <class F>
Verdict guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("threw: ") + e.what()};
  }
}

} // namespace

int main() {
  int failed = 0;
  const auto report = [&](int id, const char* name, const Verdict& v) {
    std::printf("[%s] %2d %-28s %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  };

  report(1, "Fenchel kit", guarded(fenchel_kit));
  report(2, "Phi_nu family", guarded(phi_family));
  report(3, "Hencky density", guarded(hencky));

  std::optional<AffineRun> run;
  try {
    run = run_affine();
  } catch (const std::exception& e) {
    const Verdict v{false, std::string("threw: ") + e.what()};
    report(4, "affine oracle", v);
    report(5, "duality", v);
    report(6, "regularization bookkeeping", v);
  }
  if (run) {
    report(4, "affine oracle", guarded([&] { return affine_oracle(*run); }));
    report(5, "duality", guarded([&] { return duality(*run); }));
    report(6, "regularization bookkeeping", guarded([&] { return bookkeeping(*run); }));
  }
  report(7, "integrability sweep", guarded(sweep));
  report(8, "relaxation equality", guarded(relaxation));
  report(9, "uniqueness probe", guarded(uniqueness));
  report(10, "integrability predictor", guarded(predictor));

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
