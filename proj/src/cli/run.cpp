#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "splitvar/cli.hpp"
#include "splitvar/conjugate.hpp"
#include "splitvar/diagnostics.hpp"
#include "splitvar/duality.hpp"
#include "splitvar/errors.hpp"
#include "splitvar/parallel.hpp"
#include "splitvar/predict.hpp"
#include "splitvar/report.hpp"

namespace splitvar::cli {

namespace {

namespace fs = std::filesystem;

// Result of one command: the JSON report plus soft findings that --strict
// turns into failures.
struct Outcome {
  Json report;
  std::vector<std::string> warnings;
  int code = kOk;
};

struct Problem {
  Grid grid;
  DensityPair densities;
  BoundaryMap u0;
};

Problem make_problem(const ExperimentConfig& c, const RunOptions& o) {
  Grid grid(c.n1, c.n2);
  ConjugateOptions copt;
  copt.strict = o.strict;
  DensityPair d(parse_density1(c.f1), parse_density2(c.f2), copt);
  return {grid, std::move(d), parse_boundary(c.u0, grid)};
}

SolveConfig make_solve(const ExperimentConfig& c, const Problem& p) {
  SolveConfig s(p.grid, p.densities, p.u0);
  if (!c.delta_schedule.empty()) {
    s.delta_schedule = c.delta_schedule;
  }
  if (c.p_reg) {
    s.p_reg = *c.p_reg;
  }
  s.tol_grad = c.tol_grad;
  s.max_iter = c.max_iter;
  s.seed = c.seed;
  validate(s);
  return s;
}

std::ofstream open_out(const ExperimentConfig& c, const std::string& name) {
  const fs::path path = fs::path(c.output_dir) / name;
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  return os;
}

Json problem_json(const ExperimentConfig& c, const Problem& p) {
  return Json{{"grid", {{"n1", c.n1}, {"n2", c.n2}}},
              {"f1", c.f1},
              {"f2", c.f2},
              {"u0", c.u0},
              {"u0_lipschitz", boundary_lipschitz(p.grid, p.u0)}};
}

void check_solve(const SolveReport& r, Outcome& out) {
  if (!r.delta_term_ratio_ok) {
    out.warnings.push_back("regularization term does not shrink with delta");
  }
  if (!r.j_monotone) {
    throw ContractViolation("J increases along the delta schedule");
  }
  if (!r.all_converged) {
    throw SolverError("at least one delta level stopped with status " +
                      r.records.back().status);
  }
}

Outcome cmd_solve(const ExperimentConfig& c, const RunOptions& o) {
  const Problem p = make_problem(c, o);
  const SolveConfig s = make_solve(c, p);
  const SolveReport r = continuation(s);
  Outcome out;
  out.report = problem_json(c, p);
  out.report["solve"] = to_json(r);
  out.report["energy"] = to_json(eval_J(r.u_final, p.densities));
  out.report["euler_residual_final"] = r.records.back().euler_residual_max;
  auto csv = open_out(c, "records.csv");
  write_records_csv(csv, r.records);
  save_vsgf((fs::path(c.output_dir) / "u_final.vsgf").string(), r.u_final);
  check_solve(r, out);
  return out;
}

Outcome cmd_dual(const ExperimentConfig& c, const RunOptions& o) {
  const Problem p = make_problem(c, o);
  SolveConfig s = make_solve(c, p);
  s.store_history = true;
  const SolveReport r = continuation(s);
  const GridFunction u0_field = boundary_interpolant(p.grid, p.u0);

  Outcome out;
  out.report = problem_json(c, p);
  out.report["solve"] = to_json(r);
  Json levels = Json::array();
  auto csv = open_out(c, "dual.csv");
  csv << "delta,j,r,gap_abs,gap_rel,div_residual,extremality,delta_stress_norm,certified\n"
      << std::setprecision(17);
  bool weak_ok = true;
  for (std::size_t k = 0; k < r.history.size(); ++k) {
    const double delta = r.records[k].delta;
    const DualReport d = dual_report(r.history[k], p.densities, delta, s.p_reg, u0_field, c.div_tol);
    Json lj = to_json(d);
    lj["delta"] = delta;
    levels.push_back(lj);
    csv << delta << ',' << d.j_value << ',' << d.r_value << ',' << d.gap_absolute << ','
        << d.gap_relative << ',' << d.div_residual_max << ',' << d.extremality_max_violation
        << ',' << d.delta_stress_norm << ',' << (d.certified ? 1 : 0) << '\n';
    if (!d.certified) {
      out.warnings.push_back("stress at delta " + std::to_string(delta) + " is not certified");
    } else if (d.gap_absolute < -1e-9 * (1.0 + std::abs(d.j_value))) {
      weak_ok = false;
    }
  }
  out.report["dual"] = levels;
  out.report["weak_duality"] = weak_ok;
  save_vsgf((fs::path(c.output_dir) / "u_final.vsgf").string(), r.u_final);
  if (!weak_ok) {
    throw ContractViolation("negative duality gap beyond tolerance");
  }
  check_solve(r, out);
  return out;
}

Outcome cmd_sweep(const ExperimentConfig& c, const RunOptions& o) {
  const Problem p = make_problem(c, o);
  SolveConfig s = make_solve(c, p);
  s.store_history = true;
  const SolveReport r = continuation(s);
  std::vector<double> chis = c.chis;
  if (chis.empty() && c.kappas.empty()) {
    const double q = p.densities.f2().p;
    chis = {q + 1.0, q + 2.0, q + 4.0};
  }
  const SweepTable t = integrability_sweep(r, chis, c.kappas, c.margin);
  Outcome out;
  out.report = problem_json(c, p);
  out.report["solve"] = to_json(r);
  out.report["sweep"] = to_json(t);
  const auto& f1 = p.densities.f1();
  std::optional<double> mu;
  if (std::isfinite(f1.mu)) {
    mu = f1.mu;
  }
  out.report["prediction"] =
      to_json(predict_integrability(p.densities.f2().p, f1.gamma, mu));
  auto csv = open_out(c, "sweep.csv");
  write_csv(csv, t);
  for (const auto& f : t.flags) {
    if (!f.bounded) {
      out.warnings.push_back(f.kind + " = " + std::to_string(f.exponent) + " flagged GROWING");
    }
  }
  check_solve(r, out);
  return out;
}

Outcome cmd_approx(const ExperimentConfig& c, const RunOptions& o) {
  const Problem p = make_problem(c, o);
  const int line = c.jump_line.value_or(c.n1 / 2);
  const GridFunction base = boundary_interpolant(p.grid, p.u0);
  const BVCandidate w = gratuitous_jump(base, line, c.jump_height);
  std::vector<double> widths = c.widths;
  if (widths.empty()) {
    const double room = 1.0 - std::abs(p.grid.x1(line));
    for (double e : {0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      if (e < room) {
        widths.push_back(e);
      }
    }
  }
  const ApproxTable t = approximation_experiment(w, p.densities, p.u0, widths);
  Outcome out;
  out.report = problem_json(c, p);
  out.report["candidate"] = Json{{"jump_line", line}, {"jump_height", c.jump_height}};
  out.report["k_breakdown"] = to_json(eval_K(w, p.densities, p.u0));
  out.report["approximation"] = to_json(t);
  auto csv = open_out(c, "approx.csv");
  write_csv(csv, t);
  return out;
}

Outcome cmd_conjugate_table(const ExperimentConfig& c, const RunOptions&) {
  const NFunctionSpec a = parse_nfunction(c.table.nfunction);
  if (!(c.table.s_max > 0) || c.table.nodes < 2) {
    throw ConfigError("conjugate table needs s_max > 0 and at least two nodes");
  }
  const TabulatedConjugate table(a.eval, c.table.s_max, c.table.nodes);
  auto csv = open_out(c, "conjugate_table.csv");
  csv << "s,conjugate\n" << std::setprecision(17);
  for (std::size_t k = 0; k < table.nodes().size(); ++k) {
    csv << table.nodes()[k] << ',' << table.values()[k] << '\n';
  }
  std::vector<double> samples;
  for (int k = 0; k < 100; ++k) {
    samples.push_back(50.0 * k / 99.0);
  }
  double young = 0.0;
  for (double t : samples) {
    young = std::max(young, young_residual(a, t) / (1.0 + t * a.deriv(t)));
  }
  const Dual4Fit fit = check_condition_dual4(a, samples);
  const Validation v = validate(a);
  Outcome out;
  out.report = Json{{"nfunction", a.id},
                    {"s_max", c.table.s_max},
                    {"nodes", c.table.nodes},
                    {"young_residual_max_rel", young},
                    {"dual4_c_fit", fit.c_fit},
                    {"dual4_holds", fit.holds},
                    {"valid", v.ok},
                    {"failures", v.failures}};
  for (const auto& f : v.failures) {
    out.warnings.push_back(f);
  }
  return out;
}

Outcome cmd_relax(const ExperimentConfig& c, const RunOptions& o) {
  const Problem p = make_problem(c, o);
  const SolveConfig s = make_solve(c, p);
  const SolveReport r = continuation(s);
  const int line = c.jump_line.value_or(c.n1 / 2);
  const std::vector<BVCandidate> cands = {BVCandidate::from_field(r.u_final),
                                          gratuitous_jump(r.u_final, line, c.jump_height)};
  const RelaxationGap g = relaxation_gap(cands, s, r.u_final);
  Outcome out;
  out.report = problem_json(c, p);
  out.report["solve"] = to_json(r);
  out.report["j_solver"] = g.j_solver;
  out.report["k_values"] = g.k_values;
  out.report["gap"] = g.gap;
  check_solve(r, out);
  return out;
}

int exit_code_for(const std::string& kind) {
  static const std::set<std::string> validation = {"ConfigError", "DomainError",
                                                   "InvariantError", "ConjugateRange"};
  if (validation.count(kind)) {
    return kValidation;
  }
  if (kind == "ContractViolation") {
    return kContract;
  }
  return kSolverFailure;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                  int code) {
  err << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

} // namespace

int run(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
        std::ostream& err) {
  try {
    if (opts.threads < 1) {
      throw ConfigError("--threads must be at least 1");
    }
    set_thread_count(opts.threads);
    if (cfg.command == "predict") {
      const auto pred = predict_integrability(cfg.predict.p, cfg.predict.gamma, cfg.predict.mu);
      out << to_json(pred).dump(2) << '\n';
      return kOk;
    }
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) {
      throw ConfigError("cannot create output directory '" + cfg.output_dir + "'");
    }

    Outcome result;
    if (cfg.command == "solve") {
      result = cmd_solve(cfg, opts);
    } else if (cfg.command == "dual-report") {
      result = cmd_dual(cfg, opts);
    } else if (cfg.command == "sweep") {
      result = cmd_sweep(cfg, opts);
    } else if (cfg.command == "approx-demo") {
      result = cmd_approx(cfg, opts);
    } else if (cfg.command == "conjugate-table") {
      result = cmd_conjugate_table(cfg, opts);
    } else if (cfg.command == "relax-gap") {
      result = cmd_relax(cfg, opts);
    } else {
      throw ConfigError("unknown command '" + cfg.command + "'");
    }
    Json report{{"command", cfg.command}, {"seed", cfg.seed}, {"threads", opts.threads}};
    report.update(result.report);
    report["warnings"] = result.warnings;
    auto os = open_out(cfg, "report.json");
    os << report.dump(2) << '\n';
    out << "wrote " << (fs::path(cfg.output_dir) / "report.json").string() << '\n';
    if (opts.strict && !result.warnings.empty()) {
      report_error(err, "StrictWarning", result.warnings.front(), kContract);
      return kContract;
    }
    return result.code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(err, e.kind(), e.what(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "ConfigError", e.what(), kValidation);
    return kValidation;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what(), kSolverFailure);
    return kSolverFailure;
  }
}

int run_file(const std::string& path, const RunOptions& opts, std::ostream& out,
             std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what(), kValidation);
    return kValidation;
  }
  return run(cfg, opts, out, err);
}

} // namespace splitvar::cli
