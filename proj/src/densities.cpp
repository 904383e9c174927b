#include "splitvar/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splitvar/conjugate.hpp"
#include "splitvar/errors.hpp"

namespace splitvar {

namespace {

double sign_of(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

std::vector<std::string> split_id(const std::string& id) {
  std::vector<std::string> parts;
  std::stringstream ss(id);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  return parts;
}

double parse_number(const std::string& text, const std::string& id) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw ConfigError("malformed number '" + text + "' in density id '" + id + "'");
    }
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed number '" + text + "' in density id '" + id + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("number out of range in density id '" + id + "'");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

// DensityPair ---------------------------------------------------------------

DensityPair::DensityPair(Density1Spec f1, Density2Spec f2, ConjugateOptions options)
    : f1_(std::move(f1)), f2_(std::move(f2)), options_(options) {
  if (!f1_.eval || !f1_.deriv || !f1_.second_deriv) {
    throw InvariantError("f1 '" + f1_.id + "' is missing a scalar map");
  }
  if (!f2_.eval || !f2_.deriv || !f2_.second_deriv) {
    throw InvariantError("f2 '" + f2_.id + "' is missing a scalar map");
  }
  if (!(options_.t_max > 0)) {
    throw DomainError("conjugate search half-width must be positive");
  }
}

double DensityPair::conjugate_f1(double s) const {
  if (!(s < f1_.recession_plus) || !(s > -f1_.recession_minus)) {
    throw ConjugateError("ConjugateRange",
                         "f1* is +inf at s = " + format_double(s) + " (slope interval is (" +
                             format_double(-f1_.recession_minus) + ", " +
                             format_double(f1_.recession_plus) + "))");
  }
  return conjugate_on(f1_.eval, s, -options_.t_max, options_.t_max, options_.strict).value;
}

double DensityPair::conjugate_f2(double s) const {
  if (f2_.nfunction) {
    return conjugate_scalar(f2_.nfunction->eval, std::abs(s), options_.t_max, options_.strict)
        .value;
  }
  return conjugate_on(f2_.eval, s, -options_.t_max, options_.t_max, options_.strict).value;
}

double DensityPair::default_p_reg() const {
  if (f2_.id.rfind("power", 0) == 0) {
    return std::max(2.0, f2_.p);
  }
  return 2.0;
}

// Builders ------------------------------------------------------------------

Density1Spec make_phi_nu(double nu) {
  if (!(nu > 1.0 && nu < 2.0)) {
    throw DomainError("phi_nu requires 1 < nu < 2, got " + format_double(nu));
  }
  Density1Spec d;
  d.id = "phi_nu:" + format_double(nu);
  // (1+a)^(2-nu) - 1 through expm1/log1p keeps Phi(0) == 0 exactly.
  d.eval = [nu](double t) {
    const double a = std::abs(t);
    return a - std::expm1((2.0 - nu) * std::log1p(a)) / (2.0 - nu);
  };
  d.deriv = [nu](double t) {
    const double a = std::abs(t);
    return sign_of(t) * -std::expm1((1.0 - nu) * std::log1p(a));
  };
  d.second_deriv = [nu](double t) {
    return (nu - 1.0) * std::pow(1.0 + std::abs(t), -nu);
  };
  // t/2 - Phi(t) peaks where Phi'(t) = 1/2, i.e. 1 + t = 2^(1/(nu-1)).
  const double t_star = std::pow(2.0, 1.0 / (nu - 1.0)) - 1.0;
  d.a1 = 0.5;
  d.a2 = std::max(0.0, 0.5 * t_star - d.eval(t_star));
  d.a3 = 1.0;
  d.a4 = 0.0;
  d.mu = nu;
  d.gamma = 0.0;
  d.recession_plus = 1.0;
  d.recession_minus = 1.0;
  return d;
}

HenckyBranches hencky_branches(double k, double nu) {
  if (!(k > 0) || !(nu > 0)) {
    throw DomainError("hencky requires k > 0 and nu > 0");
  }
  HenckyBranches b;
  b.threshold = k / (std::sqrt(2.0) * nu);
  b.quadratic = [nu](double s) { return nu * s * s; };
  b.linear = [k, nu](double s) { return std::sqrt(2.0) * k * std::abs(s) - k * k / (2.0 * nu); };
  b.quadratic_deriv = [nu](double s) { return 2.0 * nu * s; };
  b.linear_deriv = [k](double s) { return std::sqrt(2.0) * k * sign_of(s); };
  return b;
}

Density1Spec make_hencky(double k, double nu) {
  const HenckyBranches b = hencky_branches(k, nu);
  const double s0 = b.threshold;
  Density1Spec d;
  d.id = "hencky:" + format_double(k) + ":" + format_double(nu);
  d.eval = [b, s0](double s) { return std::abs(s) <= s0 ? b.quadratic(s) : b.linear(s); };
  d.deriv = [b, s0](double s) {
    return std::abs(s) <= s0 ? b.quadratic_deriv(s) : b.linear_deriv(s);
  };
  d.second_deriv = [nu, s0](double s) { return std::abs(s) <= s0 ? 2.0 * nu : 0.0; };
  d.a1 = std::sqrt(2.0) * k;
  d.a2 = k * k / (2.0 * nu);
  d.a3 = std::sqrt(2.0) * k;
  d.a4 = 0.0;
  d.mu = std::numeric_limits<double>::infinity();
  d.gamma = 0.0;
  d.recession_plus = std::sqrt(2.0) * k;
  d.recession_minus = std::sqrt(2.0) * k;
  d.strictly_convex = false;
  return d;
}

Density1Spec make_abs_smooth(double eps) {
  if (!(eps > 0)) {
    throw DomainError("abs_smooth requires eps > 0");
  }
  Density1Spec d;
  d.id = "abs_smooth:" + format_double(eps);
  d.eval = [eps](double t) { return std::hypot(eps, t) - eps; };
  d.deriv = [eps](double t) { return t / std::hypot(eps, t); };
  d.second_deriv = [eps](double t) {
    const double r = std::hypot(eps, t);
    return eps * eps / (r * r * r);
  };
  d.a1 = 1.0;
  d.a2 = eps;
  d.a3 = 1.0;
  d.a4 = 0.0;
  d.mu = 3.0;
  d.gamma = 0.0;
  d.recession_plus = 1.0;
  d.recession_minus = 1.0;
  return d;
}

NFunctionSpec power_nfunction(double p, double c) {
  if (!(p > 1.0)) {
    throw DomainError("power N-function requires p > 1, got " + format_double(p));
  }
  if (!(c > 0)) {
    throw DomainError("power N-function requires a positive coefficient");
  }
  NFunctionSpec a;
  a.id = "power:" + format_double(p) + (c == 1.0 ? "" : ":" + format_double(c));
  a.eval = [p, c](double t) { return c * std::pow(std::abs(t), p) / p; };
  a.deriv = [p, c](double t) { return c * std::pow(std::abs(t), p - 1.0); };
  a.delta2_k = std::pow(2.0, p);
  a.delta2_t0 = 1.0;
  a.growth_p = p;
  return a;
}

NFunctionSpec tlog_nfunction() {
  NFunctionSpec a;
  a.id = "nfun_tlog";
  a.eval = [](double t) {
    const double x = std::abs(t);
    return x * std::log1p(x);
  };
  a.deriv = [](double t) {
    const double x = std::abs(t);
    return std::log1p(x) + x / (1.0 + x);
  };
  // ln(1 + 2t) <= 2 ln(1 + t) gives A(2t) <= 4 A(t) for every t.
  a.delta2_k = 4.0;
  a.delta2_t0 = 1.0;
  a.growth_p = 1.0;
  return a;
}

Density2Spec make_power(double p, double c) {
  NFunctionSpec a = power_nfunction(p, c);
  Density2Spec d;
  d.id = a.id;
  d.eval = a.eval;
  d.deriv = [p, c](double t) { return c * sign_of(t) * std::pow(std::abs(t), p - 1.0); };
  d.second_deriv = [p, c](double t) {
    if (p == 2.0) {
      return c;
    }
    return c * (p - 1.0) * std::pow(std::abs(t), p - 2.0);
  };
  d.b1 = 1.0;
  d.b2 = 0.0;
  d.b3 = 1.0;
  d.b4 = 0.0;
  d.p = p;
  d.mu_hat = 2.0 - p;
  d.c3 = std::pow(2.0, p - 1.0);
  d.nfunction = std::move(a);
  return d;
}

Density2Spec make_tlog() {
  NFunctionSpec a = tlog_nfunction();
  Density2Spec d;
  d.id = a.id;
  d.eval = a.eval;
  d.deriv = [da = a.deriv](double t) { return sign_of(t) * da(t); };
  d.second_deriv = [](double t) {
    const double x = std::abs(t);
    return (2.0 + x) / ((1.0 + x) * (1.0 + x));
  };
  d.b1 = 1.0;
  d.b2 = 0.0;
  d.b3 = 1.0;
  d.b4 = 0.0;
  d.p = 1.0;
  d.mu_hat = 1.0;
  d.c3 = 2.0;
  d.nfunction = std::move(a);
  return d;
}

Density1Spec parse_density1(const std::string& id) {
  const auto parts = split_id(id);
  if (parts.empty()) {
    throw ConfigError("empty density id");
  }
  const std::string& family = parts[0];
  if (family == "phi_nu" && parts.size() == 2) {
    return make_phi_nu(parse_number(parts[1], id));
  }
  if (family == "hencky" && parts.size() == 3) {
    return make_hencky(parse_number(parts[1], id), parse_number(parts[2], id));
  }
  if (family == "abs_smooth" && parts.size() == 2) {
    return make_abs_smooth(parse_number(parts[1], id));
  }
  if (family == "power" || family == "nfun_tlog") {
    throw ConfigError("density '" + id + "' is superlinear and cannot serve as f1");
  }
  throw ConfigError("unknown f1 density id '" + id + "'");
}

Density2Spec parse_density2(const std::string& id) {
  const auto parts = split_id(id);
  if (parts.empty()) {
    throw ConfigError("empty density id");
  }
  const std::string& family = parts[0];
  if (family == "power" && (parts.size() == 2 || parts.size() == 3)) {
    const double p = parse_number(parts[1], id);
    const double c = parts.size() == 3 ? parse_number(parts[2], id) : 1.0;
    return make_power(p, c);
  }
  if (family == "nfun_tlog" && parts.size() == 1) {
    return make_tlog();
  }
  if (family == "phi_nu" || family == "hencky" || family == "abs_smooth") {
    throw ConfigError("density '" + id + "' has linear growth and cannot serve as f2");
  }
  throw ConfigError("unknown f2 density id '" + id + "'");
}

NFunctionSpec parse_nfunction(const std::string& id) {
  Density2Spec d = parse_density2(id);
  return *d.nfunction;
}

// Validation ----------------------------------------------------------------

std::vector<double> ellipticity_samples() {
  std::vector<double> t;
  t.reserve(200);
  t.push_back(0.0);
  for (int i = 0; i < 199; ++i) {
    t.push_back(std::pow(10.0, -4.0 + 8.0 * i / 198.0));
  }
  return t;
}

EllipticityFit fit_ellipticity(const Density1Spec& f1) {
  EllipticityFit fit;
  fit.c_lower = std::numeric_limits<double>::infinity();
  fit.c_upper = 0.0;
  for (double t : ellipticity_samples()) {
    for (double x : {t, -t}) {
      const double h = f1.second_deriv(x);
      const double w = 1.0 + std::abs(x);
      fit.c_lower = std::min(fit.c_lower, h * std::pow(w, f1.mu));
      fit.c_upper = std::max(fit.c_upper, h * std::pow(w, -f1.gamma));
    }
  }
  fit.holds = fit.c_lower > 0 && std::isfinite(fit.c_lower) && std::isfinite(fit.c_upper);
  return fit;
}

EllipticityFit fit_ellipticity(const Density2Spec& f2) {
  EllipticityFit fit;
  fit.c_lower = std::numeric_limits<double>::infinity();
  fit.c_upper = 0.0;
  for (double t : ellipticity_samples()) {
    for (double x : {t, -t}) {
      const double h = f2.second_deriv(x);
      const double w = std::pow(1.0 + std::abs(x), f2.p - 2.0);
      fit.c_lower = std::min(fit.c_lower, h / w);
      fit.c_upper = std::max(fit.c_upper, h / w);
    }
  }
  fit.holds = fit.c_lower > 0 && std::isfinite(fit.c_lower) && std::isfinite(fit.c_upper);
  return fit;
}

Validation validate(const NFunctionSpec& a) {
  Validation v;
  if (a.eval(0.0) != 0.0) {
    v.fail("A(0) != 0");
  }
  for (double top : {10.0, 1000.0}) {
    const int n = 1000;
    const double h = top / n;
    double prev = a.eval(0.0);
    for (int i = 1; i <= n; ++i) {
      const double cur = a.eval(i * h);
      if (!(cur > prev)) {
        v.fail("A not strictly increasing near t = " + format_double(i * h));
        break;
      }
      prev = cur;
    }
    for (int i = 1; i < n; ++i) {
      const double t = i * h;
      const double second = a.eval(t + h) - 2.0 * a.eval(t) + a.eval(t - h);
      if (second < -1e-10 * (1.0 + std::abs(a.eval(t)))) {
        v.fail("A not convex near t = " + format_double(t));
        break;
      }
    }
  }
  if (!(a.eval(1e-6) / 1e-6 < 1e-2)) {
    v.fail("A(t)/t does not vanish at t = 1e-6");
  }
  if (!(a.eval(1e6) / 1e6 > 10.0)) {
    v.fail("A(t)/t does not blow up at t = 1e6");
  }
  for (double t : ellipticity_samples()) {
    if (t < a.delta2_t0) {
      continue;
    }
    if (a.eval(2.0 * t) > a.delta2_k * a.eval(t) * (1.0 + 1e-12)) {
      v.fail("Delta_2 condition fails at t = " + format_double(t));
      break;
    }
  }
  return v;
}

Validation validate(const Density1Spec& f1) {
  Validation v;
  const double f0 = f1.eval(0.0);
  const double slope = std::max(f1.recession_plus, f1.recession_minus);
  for (double t : ellipticity_samples()) {
    for (double x : {t, -t}) {
      const double fx = f1.eval(x);
      const double tol = 1e-12 * (1.0 + std::abs(fx));
      if (fx < f1.a1 * std::abs(x) - f1.a2 - tol || fx > f1.a3 * std::abs(x) + f1.a4 + tol) {
        v.fail("linear growth bounds fail at t = " + format_double(x));
        return v;
      }
      if (fx > f0 + slope * std::abs(x) + tol) {
        v.fail("f1(t) exceeds f1(0) + recession * |t| at t = " + format_double(x));
        return v;
      }
    }
  }
  for (int sign : {1, -1}) {
    double rec = 0;
    try {
      rec = recession(f1.eval, sign);
    } catch (const NonLinearGrowth& e) {
      v.fail(e.what());
      continue;
    }
    const double stored = sign > 0 ? f1.recession_plus : f1.recession_minus;
    if (std::abs(rec - stored) > 1e-4 * std::max(1.0, std::abs(stored))) {
      v.fail("recession value mismatch for sign " + std::to_string(sign));
    }
  }
  if (f1.strictly_convex && !fit_ellipticity(f1).holds) {
    v.fail("mu-ellipticity envelope not satisfied");
  }
  return v;
}

Validation validate(const Density2Spec& f2) {
  Validation v;
  if (f2.nfunction) {
    const auto& a = *f2.nfunction;
    for (double t : ellipticity_samples()) {
      for (double x : {t, -t}) {
        const double fx = f2.eval(x);
        if (fx < f2.b1 * a.eval(std::abs(x)) - f2.b2 - 1e-12 * (1.0 + std::abs(fx))) {
          v.fail("lower N-function bound fails at t = " + format_double(x));
          break;
        }
      }
    }
    Validation va = validate(a);
    for (auto& f : va.failures) {
      v.fail("N-function: " + f);
    }
  }
  if (!fit_ellipticity(f2).holds) {
    v.fail("(p-2)-ellipticity envelope not satisfied");
  }
  const int n = 41;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double t = -50.0 + 100.0 * i / (n - 1);
      const double u = -50.0 + 100.0 * j / (n - 1);
      const double lhs = f2.eval(t + u);
      const double rhs = f2.c3 * (f2.eval(t) + f2.eval(u));
      if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs))) {
        v.fail("triangle condition fails at (" + format_double(t) + ", " + format_double(u) + ")");
        return v;
      }
    }
  }
  return v;
}

} // namespace splitvar
