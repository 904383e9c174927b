#include <cmath>
#include <map>
#include <string>

#include "splitvar/energy.hpp"
#include "splitvar/errors.hpp"

namespace splitvar {

BVCandidate BVCandidate::from_field(const GridFunction& smooth, std::vector<JumpSegment> jumps) {
  BVCandidate w{smooth, std::move(jumps), {}, {}};
  const Grid& g = smooth.grid;
  w.trace_left.resize(g.n2() + 1);
  w.trace_right.resize(g.n2() + 1);
  const double offset = w.jump_offset(g.n1());
  for (int j = 0; j <= g.n2(); ++j) {
    w.trace_left[j] = smooth.at(0, j);
    w.trace_right[j] = smooth.at(g.n1(), j) + offset;
  }
  return w;
}

double BVCandidate::line_height(int line) const {
  // Heights are x2-independent per line (see validate); read them off row 0.
  double h = 0.0;
  for (const auto& s : jumps) {
    if (s.line == line && s.j_begin == 0) {
      h += s.height;
    }
  }
  return h;
}

double BVCandidate::jump_offset(int i) const {
  double total = 0.0;
  for (const auto& s : jumps) {
    if (s.line < i && s.j_begin == 0) {
      total += s.height;
    }
  }
  return total;
}

void validate(const BVCandidate& w, const BoundaryMap& u0) {
  const Grid& g = w.smooth_part.grid;
  if (w.smooth_part.values.size() != g.node_count()) {
    throw InvariantError("candidate smooth part has the wrong shape");
  }
  if (static_cast<int>(w.trace_left.size()) != g.n2() + 1 ||
      static_cast<int>(w.trace_right.size()) != g.n2() + 1) {
    throw InvariantError("candidate traces need n2 + 1 values per side");
  }
  std::map<int, std::vector<double>> per_line;
  for (const auto& s : w.jumps) {
    if (s.line < 1 || s.line >= g.n1()) {
      throw InvariantError("jump line " + std::to_string(s.line) + " is not an interior grid line");
    }
    if (s.j_begin < 0 || s.j_end > g.n2() || s.j_begin >= s.j_end) {
      throw InvariantError("jump segment has an invalid x2 cell range");
    }
    if (!std::isfinite(s.height)) {
      throw InvariantError("jump height is not finite");
    }
    auto& rows = per_line[s.line];
    rows.resize(g.n2(), 0.0);
    for (int j = s.j_begin; j < s.j_end; ++j) {
      rows[j] += s.height;
    }
  }
  for (const auto& [line, rows] : per_line) {
    for (double h : rows) {
      if (std::abs(h - rows.front()) > 1e-12 * (1.0 + std::abs(rows.front()))) {
        throw InvariantError("jump on line " + std::to_string(line) +
                             " varies in x2; d2 w would carry singular mass");
      }
    }
  }
  for (int j : {0, g.n2()}) {
    for (int i = 1; i < g.n1(); ++i) {
      if (per_line.count(i)) {
        continue;
      }
      const double value = w.smooth_part.at(i, j) + w.jump_offset(i);
      const double target = u0(g.x1(i), g.x2(j));
      if (std::abs(value - target) > 1e-9 * (1.0 + std::abs(target))) {
        throw InvariantError("candidate detaches from u0 on the " +
                             std::string(j == 0 ? "bottom" : "top") + " side at x1 = " +
                             std::to_string(g.x1(i)));
      }
    }
  }
}

} // namespace splitvar
