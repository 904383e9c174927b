#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "splitvar/cli.hpp"
#include "splitvar/errors.hpp"

namespace splitvar::cli {

namespace {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "solve", "dual-report", "sweep", "approx-demo", "conjugate-table", "predict", "relax-gap"};
  return names;
}

template <class T>
T get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<double> split_numbers(const std::string& id, const std::string& prefix) {
  std::vector<double> out;
  std::istringstream is(id.substr(prefix.size()));
  std::string part;
  while (std::getline(is, part, ':')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v)) {
      throw ConfigError("bad number '" + part + "' in '" + id + "'");
    }
    out.push_back(v);
  }
  return out;
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  ExperimentConfig c;
  c.command = get<std::string>(j, "command", "");
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.n1 = get<int>(g, "n1", c.n1);
    c.n2 = get<int>(g, "n2", c.n2);
  }
  c.f1 = get<std::string>(j, "f1", c.f1);
  c.f2 = get<std::string>(j, "f2", c.f2);
  c.u0 = get<std::string>(j, "u0", c.u0);
  c.delta_schedule = get<std::vector<double>>(j, "delta_schedule", {});
  if (j.contains("p_reg")) {
    c.p_reg = get<double>(j, "p_reg", 2.0);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    c.tol_grad = get<double>(t, "tol_grad", c.tol_grad);
    c.div_tol = get<double>(t, "div_tol", 10.0 * c.tol_grad);
  } else {
    c.div_tol = 10.0 * c.tol_grad;
  }
  c.max_iter = get<int>(j, "max_iter", c.max_iter);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.output_dir = get<std::string>(j, "output_dir", c.output_dir);

  c.chis = get<std::vector<double>>(j, "chis", {});
  c.kappas = get<std::vector<double>>(j, "kappas", {});
  c.margin = get<double>(j, "margin", c.margin);
  if (j.contains("jump_line")) {
    c.jump_line = get<int>(j, "jump_line", 0);
  }
  c.jump_height = get<double>(j, "jump_height", c.jump_height);
  c.widths = get<std::vector<double>>(j, "widths", {});

  c.predict.p = get<double>(j, "p", c.predict.p);
  c.predict.gamma = get<double>(j, "gamma", c.predict.gamma);
  if (j.contains("mu")) {
    c.predict.mu = get<double>(j, "mu", 0.0);
  }
  c.table.nfunction = get<std::string>(j, "nfunction", c.table.nfunction);
  c.table.s_max = get<double>(j, "s_max", c.table.s_max);
  c.table.nodes = get<int>(j, "nodes", c.table.nodes);

  if (c.n1 < 2 || c.n2 < 2) {
    throw ConfigError("grid needs at least two cells per direction");
  }
  if (!(c.tol_grad > 0) || !(c.div_tol >= 0)) {
    throw ConfigError("tolerances must be positive");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

BoundaryMap parse_boundary(const std::string& id, const Grid& grid) {
  const std::string affine = "affine:";
  const std::string table = "custom-table:";
  if (id.rfind(affine, 0) == 0) {
    const std::vector<double> ab = split_numbers(id, affine);
    if (ab.size() != 2) {
      throw ConfigError("affine boundary data needs two coefficients");
    }
    const double a = ab[0];
    const double b = ab[1];
    return [a, b](double x1, double x2) { return a * x1 + b * x2; };
  }
  if (id.rfind(table, 0) == 0) {
    const std::string path = id.substr(table.size());
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("cannot open boundary table '" + path + "'");
    }
    return boundary_from_table(grid, in);
  }
  throw ConfigError("unknown boundary data '" + id + "'");
}

} // namespace splitvar::cli
