#include "splitvar/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "splitvar/errors.hpp"

namespace splitvar {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;
constexpr double kRelTol = 1e-10;
constexpr int kMaxIter = 500;

// Linear interpolation test at the interior point: concavity means the
// middle value is at least the chord.
bool below_chord(double xl, double fl, double xm, double fm, double xr, double fr) {
  const double chord = fl + (fr - fl) * (xm - xl) / (xr - xl);
  const double scale = 1.0 + std::max({std::abs(fl), std::abs(fm), std::abs(fr)});
  return fm < chord - 1e-9 * scale;
}

ConjugateResult golden_max(const ScalarMap& g, double s, double lo, double hi, bool flag_lo,
                           bool strict) {
  if (!(hi > lo)) {
    throw DomainError("conjugate search interval is empty");
  }
  const auto phi = [&](double t) { return s * t - g(t); };

  double a = lo;
  double b = hi;
  double fa = phi(a);
  double fb = phi(b);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fc) || !std::isfinite(fd)) {
    throw ConjugateError("ConjugateOverflow", "non-finite objective in conjugate search");
  }

  int it = 0;
  while (b - a > kRelTol * std::max(1.0, std::abs(0.5 * (a + b))) && it < kMaxIter) {
    if (below_chord(a, fa, c, fc, d, fd) || below_chord(c, fc, d, fd, b, fb)) {
      throw ConjugateError("NonConcave",
                           "conjugate objective is not concave near t = " + std::to_string(c) +
                               " (density not convex)");
    }
    if (fc >= fd) {
      b = d;
      fb = fd;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      fa = fc;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = phi(d);
    }
    ++it;
  }

  ConjugateResult r;
  r.iterations = it;
  r.value = -std::numeric_limits<double>::infinity();
  // The origin is the maximizer for s = 0 of every density with minimum at
  // 0; testing it directly makes such conjugates exact there.
  const double origin = std::clamp(0.0, lo, hi);
  for (auto [t, v] : {std::pair{a, fa}, std::pair{c, fc}, std::pair{d, fd}, std::pair{b, fb},
                      std::pair{lo, phi(lo)}, std::pair{hi, phi(hi)},
                      std::pair{origin, phi(origin)}}) {
    if (v > r.value) {
      r.value = v;
      r.argmax = t;
    }
  }

  const double margin = 1e-6 * (hi - lo);
  r.at_boundary = (r.argmax >= hi - margin) || (flag_lo && r.argmax <= lo + margin);
  if (r.at_boundary && strict) {
    throw ConjugateError("ConjugateBoundary",
                         "conjugate maximizer at the search boundary (s = " + std::to_string(s) +
                             "); enlarge t_max");
  }
  return r;
}

} // namespace

ConjugateResult conjugate_on(const ScalarMap& g, double s, double lo, double hi, bool strict) {
  return golden_max(g, s, lo, hi, true, strict);
}

ConjugateResult conjugate_scalar(const ScalarMap& g, double s, double t_max, bool strict) {
  if (s < 0) {
    throw DomainError("conjugate_scalar expects s >= 0");
  }
  if (!(t_max > 0)) {
    throw DomainError("conjugate_scalar expects t_max > 0");
  }
  return golden_max(g, s, 0.0, t_max, false, strict);
}

double young_residual(const NFunctionSpec& a, double t, double t_max) {
  const double slope = a.deriv(t);
  const double conj = conjugate_scalar(a.eval, slope, t_max).value;
  return std::abs(a.eval(t) + conj - t * slope);
}

Dual4Fit check_condition_dual4(const NFunctionSpec& a, std::span<const double> samples) {
  if (samples.empty()) {
    throw DomainError("check_condition_dual4 needs at least one sample");
  }
  std::vector<double> ts(samples.begin(), samples.end());
  for (double t : ts) {
    if (t < 0) {
      throw DomainError("check_condition_dual4 samples must be nonnegative");
    }
  }
  std::sort(ts.begin(), ts.end());

  const auto fit = [&](const std::vector<double>& pts) {
    double c = 0.0;
    for (double t : pts) {
      const double conj = conjugate_scalar(a.eval, a.deriv(t)).value;
      c = std::max(c, conj / (a.eval(t) + 1.0));
    }
    return c;
  };

  Dual4Fit out;
  out.c_fit = fit(ts);

  std::vector<double> refined = ts;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    refined.push_back(0.5 * (ts[i] + ts[i + 1]));
  }
  if (ts.back() > 0) {
    refined.push_back(2.0 * ts.back());
  }
  const double c_refined = fit(refined);

  out.holds = std::isfinite(out.c_fit) && std::isfinite(c_refined) &&
              std::abs(c_refined - out.c_fit) <= 0.05 * std::max(out.c_fit, 1e-300);
  if (out.c_fit == 0.0 && c_refined == 0.0) {
    out.holds = true;
  }
  return out;
}

double recession(const ScalarMap& f, int sign) {
  if (sign != 1 && sign != -1) {
    throw DomainError("recession direction must be +1 or -1");
  }
  const double radii[3] = {1e4, 1e6, 1e8};
  double e[3];
  for (int k = 0; k < 3; ++k) {
    e[k] = f(sign * radii[k]) / radii[k];
    if (!std::isfinite(e[k])) {
      throw NonLinearGrowth("f(R s)/R is not finite at R = " + std::to_string(radii[k]));
    }
  }
  const double d1 = e[1] - e[0];
  const double d2 = e[2] - e[1];
  const double scale = std::max(1.0, std::abs(e[2]));
  if (std::abs(d2) <= 1e-12 * scale) {
    return e[2];
  }
  if (d1 == 0.0) {
    throw NonLinearGrowth("recession estimates diverge");
  }
  const double ratio = d2 / d1;
  if (!(std::abs(ratio) < 0.9)) {
    throw NonLinearGrowth("recession estimates do not contract (ratio " + std::to_string(ratio) +
                          "); density is not of linear growth");
  }
  // Aitken: exact for errors decaying geometrically in the radius exponent.
  return e[2] + d2 * ratio / (1.0 - ratio);
}

TabulatedConjugate::TabulatedConjugate(const ScalarMap& g, double s_max, int nodes,
                                       double t_max)
    : s_max_(s_max) {
  if (!(s_max > 0) || nodes < 2) {
    throw DomainError("tabulated conjugate needs s_max > 0 and at least two nodes");
  }
  s_.resize(nodes);
  v_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    s_[i] = s_max * i / (nodes - 1);
    v_[i] = conjugate_scalar(g, s_[i], t_max).value;
  }
  // Fritsch-Carlson monotone slopes.
  const int n = nodes;
  std::vector<double> delta(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    delta[i] = (v_[i + 1] - v_[i]) / (s_[i + 1] - s_[i]);
  }
  m_.assign(n, 0.0);
  m_[0] = delta[0];
  m_[n - 1] = delta[n - 2];
  for (int i = 1; i + 1 < n; ++i) {
    m_[i] = (delta[i - 1] * delta[i] <= 0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m_[i] = 0.0;
      m_[i + 1] = 0.0;
      continue;
    }
    const double alpha = m_[i] / delta[i];
    const double beta = m_[i + 1] / delta[i];
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m_[i] = tau * alpha * delta[i];
      m_[i + 1] = tau * beta * delta[i];
    }
  }
}

double TabulatedConjugate::operator()(double s) const {
  if (s < 0 || s > s_max_) {
    throw DomainError("tabulated conjugate queried outside [0, s_max]");
  }
  const int n = static_cast<int>(s_.size());
  const double h = s_[1] - s_[0];
  int i = std::min(n - 2, static_cast<int>(s / h));
  const double x = (s - s_[i]) / h;
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1;
  const double h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2;
  const double h11 = x3 - x2;
  return h00 * v_[i] + h10 * h * m_[i] + h01 * v_[i + 1] + h11 * h * m_[i + 1];
}

} // namespace splitvar
