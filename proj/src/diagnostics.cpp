#include "splitvar/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "splitvar/errors.hpp"
#include "splitvar/parallel.hpp"

namespace splitvar {

namespace {

double inset_limit(double margin) { return 1.0 - 2.0 * margin; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < N; ++k) {
      double z = std::cos(pi * (k + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (int n = 2; n <= N; ++n) {
          const double p2 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double step = p1 / dp;
        z -= step;
        if (std::abs(step) < 1e-16) {
          break;
        }
      }
      x[k] = z;
      w[k] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre<8>& gauss8() {
  static const GaussLegendre<8> rule;
  return rule;
}

// Triweight kernel (35/32)(1 - z^2)^3 on [-1, 1] and its distribution function.
double kernel(double z) {
  if (std::abs(z) >= 1.0) {
    return 0.0;
  }
  const double q = 1.0 - z * z;
  return 35.0 / 32.0 * q * q * q;
}

double kernel_cdf(double z) {
  if (z <= -1.0) {
    return 0.0;
  }
  if (z >= 1.0) {
    return 1.0;
  }
  const double z2 = z * z;
  return 0.5 + 35.0 / 32.0 * z * (1.0 - z2 + z2 * z2 * 0.6 - z2 * z2 * z2 / 7.0);
}

struct Sample {
  double f1 = 0;
  double f2 = 0;
  double area = 0;
  double l1 = 0;
};

} // namespace

// Integrability sweep --------------------------------------------------------

bool SweepTable::all_bounded() const {
  return std::all_of(flags.begin(), flags.end(), [](const SweepFlag& f) { return f.bounded; });
}

const SweepRow& SweepTable::row(std::size_t level, const std::string& kind,
                                double exponent) const {
  std::size_t seen = 0;
  double last_delta = -1.0;
  for (const auto& r : rows) {
    if (r.delta != last_delta) {
      if (last_delta >= 0) {
        ++seen;
      }
      last_delta = r.delta;
    }
    if (seen == level && r.kind == kind && r.exponent == exponent) {
      return r;
    }
  }
  throw ContractViolation("sweep table has no row for the requested level and exponent");
}

SweepTable integrability_sweep(const SolveReport& report, const std::vector<double>& chis,
                               const std::vector<double>& kappas, double margin) {
  if (!(margin > 0.0 && margin < 0.5)) {
    throw ConfigError("sweep margin must lie in (0, 0.5)");
  }
  if (report.history.size() < 3 || report.history.size() != report.records.size()) {
    throw ConfigError("integrability sweep needs at least three stored delta levels");
  }
  if (chis.empty() && kappas.empty()) {
    throw ConfigError("integrability sweep needs at least one exponent");
  }
  SweepTable table;
  table.interior_margin = margin;
  const double limit = inset_limit(margin);

  for (std::size_t k = 0; k < report.history.size(); ++k) {
    const GridFunction& u = report.history[k];
    const Grid& g = u.grid;
    const CellField2 grad = gradient(u);
    const auto integrate = [&](const std::vector<double>& comp, double e) {
      std::vector<double> terms;
      for (int j = 0; j < g.n2(); ++j) {
        if (std::abs(g.cell_x2(j)) > limit) {
          continue;
        }
        for (int i = 0; i < g.n1(); ++i) {
          if (std::abs(g.cell_x1(i)) > limit) {
            continue;
          }
          const double t = comp[g.cell(i, j)];
          terms.push_back(g.cell_area() * std::pow(1.0 + t * t, 0.5 * e));
        }
      }
      const double s = pairwise_sum(terms);
      if (!std::isfinite(s)) {
        throw OverflowError("sweep integral is not finite");
      }
      return s;
    };
    for (double chi : chis) {
      table.rows.push_back({report.records[k].delta, "chi", chi, integrate(grad.comp2, chi)});
    }
    for (double kappa : kappas) {
      table.rows.push_back(
          {report.records[k].delta, "kappa", kappa, integrate(grad.comp1, kappa)});
    }
  }

  const std::size_t per_level = chis.size() + kappas.size();
  const std::size_t last = table.rows.size() - per_level;
  const std::size_t prev = last - per_level;
  for (std::size_t e = 0; e < per_level; ++e) {
    const SweepRow& a = table.rows[prev + e];
    const SweepRow& b = table.rows[last + e];
    const double change = std::abs(b.integral - a.integral) / std::abs(a.integral);
    table.flags.push_back({b.kind, b.exponent, change, change <= 0.1});
  }
  return table;
}

void write_csv(std::ostream& os, const SweepTable& t) {
  os << "delta,kind,exponent,integral\n";
  for (const auto& r : t.rows) {
    os << fmt(r.delta) << ',' << r.kind << ',' << fmt(r.exponent) << ',' << fmt(r.integral)
       << '\n';
  }
}

// Approximation experiment ---------------------------------------------------

ApproxTable approximation_experiment(const BVCandidate& w, const DensityPair& d,
                                     const BoundaryMap& u0, const std::vector<double>& widths) {
  validate(w, u0);
  if (widths.empty()) {
    throw ConfigError("approximation experiment needs at least one width");
  }
  const Grid& g = w.smooth_part.grid;
  double room = 1.0;
  for (const auto& s : w.jumps) {
    room = std::min(room, 1.0 - std::abs(g.x1(s.line)));
  }
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (!(widths[k] > 0)) {
      throw ConfigError("widths must be positive");
    }
    if (k > 0 && !(widths[k] < widths[k - 1])) {
      throw ConfigError("widths must decrease");
    }
  }
  if (widths.front() >= room) {
    throw ConfigError("width " + fmt(widths.front()) +
                      " reaches the lateral boundary from a jump line");
  }

  // Jump lines with their x2-constant heights.
  std::vector<std::pair<double, double>> lines;
  for (int i = 1; i < g.n1(); ++i) {
    const double h = w.line_height(i);
    if (h != 0.0) {
      lines.emplace_back(g.x1(i), h);
    }
  }
  // Lateral detachment u0 - trace at the boundary nodes.
  std::vector<double> gap_left(g.n2() + 1);
  std::vector<double> gap_right(g.n2() + 1);
  bool detached = false;
  for (int j = 0; j <= g.n2(); ++j) {
    gap_left[j] = u0(-1.0, g.x2(j)) - w.trace_left[j];
    gap_right[j] = u0(1.0, g.x2(j)) - w.trace_right[j];
    detached = detached || gap_left[j] != 0.0 || gap_right[j] != 0.0;
  }

  const CellField2 grad = gradient(w.smooth_part);
  const double h2 = g.h2();
  const auto& gl = gauss8();

  ApproxTable table;
  const EnergyBreakdown k = eval_K(w, d, u0);
  table.k_value = k.k_total();
  table.f2_limit = k.j_f2;
  {
    std::vector<double> terms(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      terms[c] = g.cell_area() * std::hypot(1.0, grad.comp1[c], grad.comp2[c]);
    }
    for (const auto& s : w.jumps) {
      terms.push_back(std::abs(s.height) * (s.j_end - s.j_begin) * h2);
    }
    for (int j = 0; j <= g.n2(); ++j) {
      const double weight = (j == 0 || j == g.n2()) ? 0.5 * h2 : h2;
      terms.push_back(weight * (std::abs(gap_left[j]) + std::abs(gap_right[j])));
    }
    table.area_limit = pairwise_sum(terms);
  }

  for (double eps : widths) {
    std::vector<double> f1_terms(g.cell_count());
    std::vector<double> f2_terms(g.cell_count());
    std::vector<double> area_terms(g.cell_count());
    std::vector<double> l1_terms(g.cell_count());

    parallel_for(g.cell_count(), [&](std::size_t b, std::size_t e) {
      std::vector<double> cuts;
      std::vector<std::pair<double, double>> zones;
      for (std::size_t c = b; c < e; ++c) {
        const int i = static_cast<int>(c % g.n1());
        const int j = static_cast<int>(c / g.n1());
        const double xa = g.x1(i);
        const double xb = g.x1(i + 1);
        const double dl_mid = 0.5 * (gap_left[j] + gap_left[j + 1]);
        const double dr_mid = 0.5 * (gap_right[j] + gap_right[j + 1]);
        const double dl_2 = (gap_left[j + 1] - gap_left[j]) / h2;
        const double dr_2 = (gap_right[j + 1] - gap_right[j]) / h2;

        zones.clear();
        for (const auto& [x, h] : lines) {
          zones.emplace_back(x - eps, x);
          zones.emplace_back(x, x + eps);
        }
        if (detached) {
          zones.emplace_back(-1.0, -1.0 + eps);
          zones.emplace_back(1.0 - eps, 1.0);
        }
        cuts.assign({xa, xb});
        for (const auto& [lo, hi] : zones) {
          for (double x : {lo, hi}) {
            if (x > xa && x < xb) {
              cuts.push_back(x);
            }
          }
        }
        std::sort(cuts.begin(), cuts.end());

        const auto sample = [&](double x1) {
          double g1 = grad.comp1[c];
          double g2 = grad.comp2[c];
          double diff = 0.0;
          for (const auto& [x, h] : lines) {
            const double z = (x1 - x) / eps;
            g1 += h * kernel(z) / eps;
            diff += h * (kernel_cdf(z) - (x1 > x ? 1.0 : 0.0));
          }
          if (detached) {
            const double left = std::max(0.0, 1.0 - (x1 + 1.0) / eps);
            const double right = std::max(0.0, 1.0 - (1.0 - x1) / eps);
            if (left > 0) {
              g1 -= dl_mid / eps;
              g2 += dl_2 * left;
              diff += dl_mid * left;
            }
            if (right > 0) {
              g1 += dr_mid / eps;
              g2 += dr_2 * right;
              diff += dr_mid * right;
            }
          }
          Sample s;
          s.f1 = d.f1().eval(g1);
          s.f2 = d.f2().eval(g2);
          s.area = std::hypot(1.0, g1, g2);
          s.l1 = std::abs(diff);
          return s;
        };

        Sample acc;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          const double lo = cuts[k];
          const double hi = cuts[k + 1];
          const double mid = 0.5 * (lo + hi);
          bool in_zone = false;
          for (const auto& [zl, zh] : zones) {
            in_zone = in_zone || (mid > zl && mid < zh);
          }
          const int panels =
              in_zone ? std::max(1, static_cast<int>(std::ceil((hi - lo) / (eps / 8.0)))) : 1;
          const double pw = (hi - lo) / panels;
          for (int p = 0; p < panels; ++p) {
            const double pc = lo + (p + 0.5) * pw;
            for (int q = 0; q < 8; ++q) {
              const Sample s = sample(pc + 0.5 * pw * gl.x[q]);
              const double wq = 0.5 * pw * gl.w[q];
              acc.f1 += wq * s.f1;
              acc.f2 += wq * s.f2;
              acc.area += wq * s.area;
              acc.l1 += wq * s.l1;
            }
          }
        }
        f1_terms[c] = h2 * acc.f1;
        f2_terms[c] = h2 * acc.f2;
        area_terms[c] = h2 * acc.area;
        l1_terms[c] = h2 * acc.l1;
      }
    });

    ApproxRow row;
    row.width = eps;
    row.l1_distance = pairwise_sum(l1_terms);
    row.area = pairwise_sum(area_terms);
    row.f2_energy = pairwise_sum(f2_terms);
    row.j_value = pairwise_sum(f1_terms) + row.f2_energy;
    table.rows.push_back(row);
  }
  table.terminal_deviation = std::abs(table.rows.back().j_value - table.k_value);
  return table;
}

void write_csv(std::ostream& os, const ApproxTable& t) {
  os << "width,l1_distance,area,f2_energy,j_value\n";
  for (const auto& r : t.rows) {
    os << fmt(r.width) << ',' << fmt(r.l1_distance) << ',' << fmt(r.area) << ','
       << fmt(r.f2_energy) << ',' << fmt(r.j_value) << '\n';
  }
}

// Relaxation gap --------------------------------------------------------------

BVCandidate gratuitous_jump(const GridFunction& u, int line, double height) {
  const Grid& g = u.grid;
  if (line < 1 || line >= g.n1()) {
    throw DomainError("jump line must be an interior grid line");
  }
  GridFunction smooth = u;
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = line + 1; i <= g.n1(); ++i) {
      smooth.at(i, j) -= height;
    }
  }
  return BVCandidate::from_field(smooth, {JumpSegment{line, 0, g.n2(), height}});
}

RelaxationGap relaxation_gap(const std::vector<BVCandidate>& candidates, const SolveConfig& cfg,
                             const GridFunction& minimizer) {
  if (candidates.empty()) {
    throw ConfigError("relaxation gap needs at least one candidate");
  }
  RelaxationGap out;
  out.j_solver = eval_J(minimizer, cfg.densities).j_total;
  double best = 0.0;
  for (const auto& w : candidates) {
    const double k = eval_K(w, cfg.densities, cfg.u0).k_total();
    out.k_values.push_back(k);
    best = out.k_values.size() == 1 ? k : std::min(best, k);
  }
  out.gap = best - out.j_solver;
  if (out.gap < -1e-3 * (1.0 + std::abs(out.j_solver))) {
    throw ContractViolation("relaxed energy undercuts the discrete minimum by " + fmt(-out.gap));
  }
  return out;
}

RelaxationGap relaxation_gap(const std::vector<BVCandidate>& candidates, const SolveConfig& cfg) {
  if (candidates.empty()) {
    throw ConfigError("relaxation gap needs at least one candidate");
  }
  return relaxation_gap(candidates, cfg, continuation(cfg).u_final);
}

} // namespace splitvar
