#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "splitvar/cli.hpp"
#include "splitvar/grid.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "splitvar_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, nlohmann::json cfg) {
  cfg["output_dir"] = (dir / "out").string();
  const fs::path path = dir / "config.json";
  std::ofstream(path) << cfg.dump(2);
  return path;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const fs::path& config, const std::string& extra = "") {
  const fs::path dir = config.parent_path();
  const std::string cmd = std::string(SPLITVAR_CLI_PATH) + " --config " + config.string() + " " +
                          extra + " > " + (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return {WEXITSTATUS(status), slurp(dir / "stdout.txt"), slurp(dir / "stderr.txt")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("predict prints JSON") {
  const fs::path dir = scratch("predict");
  const Run r = run_cli(write_config(dir, {{"command", "predict"}, {"p", 3}, {"gamma", 0.7}}));
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("feasible") == true);
  CHECK(j.at("chi").get<double>() > 4.0);
  CHECK(j.at("case") == "gamma-small");

  const Run zero = run_cli(write_config(dir, {{"command", "predict"}, {"p", 2}, {"gamma", 0}}));
  const auto z = nlohmann::json::parse(zero.out);
  CHECK(z.at("chi").is_null());
  CHECK(z.at("chi_unbounded") == true);
}

TEST_CASE("solve with affine data") {
  const fs::path dir = scratch("solve");
  const nlohmann::json cfg = {{"command", "solve"},
                              {"grid", {{"n1", 16}, {"n2", 16}}},
                              {"f1", "phi_nu:1.5"},
                              {"f2", "power:2:2"},
                              {"u0", "affine:2:-1"},
                              {"tolerances", {{"tol_grad", 1e-9}}},
                              {"seed", 4}};
  const Run r = run_cli(write_config(dir, cfg));
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep.at("euler_residual_final").get<double>() <= 1e-9);
  CHECK(rep.at("solve").at("records").size() == 6);
  CHECK(rep.at("energy").contains("k_singular"));

  const std::string csv = slurp(dir / "out" / "records.csv");
  CHECK(csv.rfind("delta,j,j_delta,delta_term,euler_residual,iterations\n", 0) == 0);

  const splitvar::GridFunction u = splitvar::load_vsgf((dir / "out" / "u_final.vsgf").string());
  CHECK(u.grid == splitvar::Grid(16, 16));
  CHECK(u.at(16, 16) == doctest::Approx(1.0));

  // Same config, same bytes.
  fs::rename(dir / "out" / "records.csv", dir / "first.csv");
  CHECK(run_cli(dir / "config.json").code == 0);
  CHECK(slurp(dir / "first.csv") == slurp(dir / "out" / "records.csv"));
}

TEST_CASE("thread count does not change the output") {
  const fs::path dir = scratch("threads");
  const nlohmann::json cfg = {{"command", "solve"},
                              {"grid", {{"n1", 40}, {"n2", 40}}},
                              {"u0", "affine:1:1"},
                              {"delta_schedule", {0.1, 0.01}}};
  const fs::path path = write_config(dir, cfg);
  CHECK(run_cli(path, "--threads 1").code == 0);
  const std::string one = slurp(dir / "out" / "u_final.vsgf");
  CHECK(run_cli(path, "--threads 3").code == 0);
  CHECK(slurp(dir / "out" / "u_final.vsgf") == one);
}

TEST_CASE("validation errors exit with 2") {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "config.json") << "{ not json";
  const Run malformed = run_cli(dir / "config.json");
  CHECK(malformed.code == 2);
  const auto err = nlohmann::json::parse(malformed.err);
  CHECK(err.at("error") == "ConfigError");

  CHECK(run_cli(write_config(dir, {{"command", "fly"}})).code == 2);
  CHECK(run_cli(write_config(dir, {{"command", "solve"}, {"f1", "nope:1"}})).code == 2);
  CHECK(run_cli(write_config(dir, {{"command", "solve"}, {"delta_schedule", {0.01, 0.1}}}))
            .code == 2);
  CHECK(run_cli(write_config(dir, {{"command", "solve"}, {"grid", {{"n1", "x"}}}})).code == 2);
  CHECK(run_cli(dir / "missing.json").code == 2);
}

TEST_CASE("custom boundary table") {
  const fs::path dir = scratch("table");
  const splitvar::Grid g(8, 8);
  {
    std::ofstream t(dir / "u0.csv");
    t << "x1,x2,value\n";
    for (int j = 0; j <= 8; ++j) {
      for (int i = 0; i <= 8; ++i) {
        if (g.on_boundary(i, j)) {
          t << g.x1(i) << ',' << g.x2(j) << ',' << g.x1(i) * g.x2(j) << '\n';
        }
      }
    }
  }
  const nlohmann::json cfg = {{"command", "solve"},
                              {"grid", {{"n1", 8}, {"n2", 8}}},
                              {"u0", "custom-table:" + (dir / "u0.csv").string()}};
  CHECK(run_cli(write_config(dir, cfg)).code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep.at("u0_lipschitz").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("other commands write their tables") {
  const fs::path dir = scratch("commands");
  const nlohmann::json base = {{"grid", {{"n1", 16}, {"n2", 16}}}, {"u0", "affine:1:-1"}};

  nlohmann::json dual = base;
  dual["command"] = "dual-report";
  CHECK(run_cli(write_config(dir, dual)).code == 0);
  const auto drep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(drep.at("weak_duality") == true);
  CHECK(drep.at("dual").back().contains("gap_rel"));
  CHECK(fs::exists(dir / "out" / "dual.csv"));

  nlohmann::json sweep = base;
  sweep["command"] = "sweep";
  sweep["kappas"] = {4, 8};
  sweep["chis"] = {3, 4};
  CHECK(run_cli(write_config(dir, sweep)).code == 0);
  const auto srep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(srep.at("sweep").at("all_bounded") == true);
  CHECK(fs::exists(dir / "out" / "sweep.csv"));

  nlohmann::json approx = base;
  approx["command"] = "approx-demo";
  CHECK(run_cli(write_config(dir, approx)).code == 0);
  const auto arep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(arep.at("k_breakdown").at("k_singular").get<double>() == doctest::Approx(2.0));
  CHECK(fs::exists(dir / "out" / "approx.csv"));

  const nlohmann::json table = {{"command", "conjugate-table"}, {"nfunction", "power:3"},
                                {"s_max", 5}, {"nodes", 51}};
  CHECK(run_cli(write_config(dir, table)).code == 0);
  const auto trep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(trep.at("young_residual_max_rel").get<double>() <= 1e-8);
  CHECK(fs::exists(dir / "out" / "conjugate_table.csv"));

  nlohmann::json relax = base;
  relax["command"] = "relax-gap";
  relax["u0"] = "affine:1:0.5";
  CHECK(run_cli(write_config(dir, relax)).code == 0);
  const auto rrep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(std::abs(rrep.at("gap").get<double>()) <= 1e-6);
}

TEST_CASE("strict mode escalates warnings") {
  const fs::path dir = scratch("strict");
  const splitvar::Grid g(8, 8);
  {
    std::ofstream t(dir / "u0.csv");
    t << std::setprecision(17) << "x1,x2,value\n";
    for (int j = 0; j <= 8; ++j) {
      for (int i = 0; i <= 8; ++i) {
        if (g.on_boundary(i, j)) {
          t << g.x1(i) << ',' << g.x2(j) << ',' << std::sin(2.0 * g.x1(i)) * g.x2(j) << '\n';
        }
      }
    }
  }
  // A zero divergence tolerance cannot be met on non-affine data, so every
  // level is reported as uncertified.
  const nlohmann::json cfg = {{"command", "dual-report"},
                              {"grid", {{"n1", 8}, {"n2", 8}}},
                              {"u0", "custom-table:" + (dir / "u0.csv").string()},
                              {"tolerances", {{"tol_grad", 1e-8}, {"div_tol", 0.0}}},
                              {"delta_schedule", {0.1, 0.01}}};
  const fs::path path = write_config(dir, cfg);
  CHECK(run_cli(path).code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK_FALSE(rep.at("warnings").empty());
  const Run strict = run_cli(path, "--strict");
  CHECK(strict.code == 4);
  CHECK(nlohmann::json::parse(strict.err).at("error") == "StrictWarning");
}

TEST_CASE("in-process run maps solver errors") {
  splitvar::cli::ExperimentConfig cfg;
  cfg.command = "solve";
  cfg.n1 = cfg.n2 = 6;
  cfg.f1 = "phi_nu:1.5";
  cfg.u0 = "affine:1:0";
  cfg.output_dir = scratch("inproc").string();
  std::ostringstream out, err;
  CHECK(splitvar::cli::run(cfg, {}, out, err) == 0);
  cfg.f1 = "phi_nu:3";
  CHECK(splitvar::cli::run(cfg, {}, out, err) == 2);
  cfg.f1 = "phi_nu:1.5";
  splitvar::cli::RunOptions bad;
  bad.threads = 0;
  CHECK(splitvar::cli::run(cfg, bad, out, err) == 2);
}
