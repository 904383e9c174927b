#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitvar/grid.hpp"

namespace splitvar::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kSolverFailure = 3, kContract = 4 };

struct PredictArgs {
  double p = 2;
  double gamma = 0;
  std::optional<double> mu;
};

struct ConjugateTableArgs {
  std::string nfunction = "power:2";
  double s_max = 10;
  int nodes = 101;
};

/// Parsed experiment file. Grid-free commands (predict, conjugate-table)
/// ignore the solver fields.
struct ExperimentConfig {
  std::string command;
  int n1 = 32;
  int n2 = 32;
  std::string f1 = "phi_nu:1.5";
  std::string f2 = "power:2:2";
  std::string u0 = "affine:2:-1";
  std::vector<double> delta_schedule;
  std::optional<double> p_reg;
  double tol_grad = 1e-8;
  double div_tol = 1e-7;
  int max_iter = 200;
  std::uint64_t seed = 0;
  std::string output_dir = ".";

  // sweep
  std::vector<double> chis;
  std::vector<double> kappas;
  double margin = 0.1;
  // approx-demo and relax-gap
  std::optional<int> jump_line;
  double jump_height = 1.0;
  std::vector<double> widths;

  PredictArgs predict;
  ConjugateTableArgs table;
};

/// Throws ConfigError on unknown commands, wrong types or missing keys.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Boundary data from "affine:<a>:<b>" (a x1 + b x2) or
/// "custom-table:<path>" (CSV rows x1,x2,value on every boundary node).
BoundaryMap parse_boundary(const std::string& id, const Grid& grid);

struct RunOptions {
  int threads = 1;
  // Escalate warnings (uncertified duals, GROWING flags, boundary
  // maximizers in conjugate searches) to exit code 4.
  bool strict = false;
};

/// Executes one command. Machine-readable errors go to `err` as a single
/// JSON object; `out` receives command output (predict) and a summary.
int run(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out,
        std::ostream& err);
/// Loads the file and runs it; malformed files map to exit code 2.
int run_file(const std::string& path, const RunOptions& opts, std::ostream& out,
             std::ostream& err);

} // namespace splitvar::cli
