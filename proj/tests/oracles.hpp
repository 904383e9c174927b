// Independent reference values used by the unit and acceptance tests. Nothing
// here calls into the library; every formula is written out by hand.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Phi_nu on t >= 0 from the double integral of (nu-1)(1+r)^-nu.
inline double phi(double nu, double t) {
  t = std::abs(t);
  return t - (std::pow(1.0 + t, 2.0 - nu) - 1.0) / (2.0 - nu);
}
inline double phi_first(double nu, double t) {
  const double a = std::abs(t);
  return std::copysign(1.0 - std::pow(1.0 + a, 1.0 - nu), t);
}
inline double phi_second(double nu, double t) {
  return (nu - 1.0) * std::pow(1.0 + std::abs(t), -nu);
}

// (t^p / p)* = s^q / q.
inline double power_conjugate(double p, double s) {
  const double q = p / (p - 1.0);
  return std::pow(std::abs(s), q) / q;
}

// Central second difference with a step that shrinks near t = 0, where the
// even extension is only C^1 across the origin at the scale of the step.
inline double central_second(const std::function<double(double)>& f, double t) {
  const double h = std::min(1e-3 * (1.0 + t), std::max(0.5 * t, 1e-7));
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// Conjugate by a dense scan followed by local golden refinement; used to
// cross-check the library's search on small inputs.
inline double dense_conjugate(const std::function<double(double)>& g, double s, double lo,
                              double hi, int n = 20001) {
  double best = -INFINITY;
  int arg = 0;
  for (int k = 0; k < n; ++k) {
    const double t = lo + (hi - lo) * k / (n - 1);
    const double v = s * t - g(t);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  double a = lo + (hi - lo) * std::max(0, arg - 1) / (n - 1);
  double b = lo + (hi - lo) * std::min(n - 1, arg + 1) / (n - 1);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (s * m1 - g(m1) < s * m2 - g(m2)) {
      a = m1;
    } else {
      b = m2;
    }
  }
  const double t = 0.5 * (a + b);
  return std::max(best, s * t - g(t));
}

// Direct discrete energy on an n1 x n2 grid over (-1,1)^2 with the
// averaged-forward-difference cell gradient.
struct SmallProblem {
  int n1;
  int n2;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  std::function<double(double, double)> u0;

  double h1() const { return 2.0 / n1; }
  double h2() const { return 2.0 / n2; }
  double x1(int i) const { return -1.0 + h1() * i; }
  double x2(int j) const { return -1.0 + h2() * j; }
  int node(int i, int j) const { return j * (n1 + 1) + i; }
  bool boundary(int i, int j) const { return i == 0 || j == 0 || i == n1 || j == n2; }

  double energy(const std::vector<double>& u) const {
    double e = 0.0;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const double a = u[node(i, j)], b = u[node(i + 1, j)];
        const double c = u[node(i, j + 1)], d = u[node(i + 1, j + 1)];
        const double g1 = 0.5 * ((b - a) + (d - c)) / h1();
        const double g2 = 0.5 * ((c - a) + (d - b)) / h2();
        e += h1() * h2() * (f1(g1) + f2(g2));
      }
    }
    return e;
  }

  std::vector<double> initial() const {
    std::vector<double> u((n1 + 1) * (n2 + 1), 0.0);
    for (int j = 0; j <= n2; ++j) {
      for (int i = 0; i <= n1; ++i) {
        if (boundary(i, j)) {
          u[node(i, j)] = u0(x1(i), x2(j));
        }
      }
    }
    return u;
  }

  // Cyclic coordinate descent with a 1D golden search per node. Slow but
  // shares no code with the Newton solver.
  std::vector<double> minimize(int sweeps = 400, double span = 4.0) const {
    std::vector<double> u = initial();
    for (int s = 0; s < sweeps; ++s) {
      double moved = 0.0;
      for (int j = 1; j < n2; ++j) {
        for (int i = 1; i < n1; ++i) {
          const int k = node(i, j);
          const double centre = u[k];
          double a = centre - span, b = centre + span;
          const auto at = [&](double v) {
            u[k] = v;
            return energy(u);
          };
          for (int it = 0; it < 120 && b - a > 1e-13; ++it) {
            const double m1 = a + 0.381966011250105 * (b - a);
            const double m2 = b - 0.381966011250105 * (b - a);
            if (at(m1) < at(m2)) {
              b = m2;
            } else {
              a = m1;
            }
          }
          u[k] = 0.5 * (a + b);
          moved = std::max(moved, std::abs(u[k] - centre));
        }
      }
      span = std::max(1e-6, std::min(span, 4.0 * moved));
      if (moved < 1e-12) {
        break;
      }
    }
    return u;
  }
};

} // namespace oracle
