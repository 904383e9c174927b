#include "splitvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "splitvar/errors.hpp"

namespace splitvar {

namespace {

constexpr char kMagic[4] = {'V', 'S', 'G', 'F'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int k = 0; k < 4; ++k) {
    b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xffu);
  }
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw InvariantError("VSGF: truncated header");
  }
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) {
    v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
  }
  return v;
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) {
    b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xffu);
  }
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) {
    throw InvariantError("VSGF: truncated payload");
  }
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) {
    bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  }
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

void lock_boundary(GridFunction& u) {
  const Grid& g = u.grid;
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      u.boundary_mask[g.node(i, j)] = g.on_boundary(i, j) ? 1 : 0;
    }
  }
}

struct Row {
  double x1, x2, value;
};

std::vector<Row> read_rows(std::istream& is) {
  std::vector<Row> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (first) {
      first = false;
      if (line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) {
        continue;  // header
      }
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Row r{};
    if (!(ls >> r.x1 >> r.x2 >> r.value)) {
      throw InvariantError("CSV: malformed row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

} // namespace

void write_csv(std::ostream& os, const GridFunction& u) {
  const Grid& g = u.grid;
  os << "x1,x2,value\n";
  os.precision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      os << g.x1(i) << ',' << g.x2(j) << ',' << u.at(i, j) << '\n';
    }
  }
}

GridFunction read_csv(std::istream& is) {
  const auto rows = read_rows(is);
  std::set<double> xs, ys;
  for (const auto& r : rows) {
    xs.insert(r.x1);
    ys.insert(r.x2);
  }
  if (xs.size() < 3 || ys.size() < 3) {
    throw InvariantError("CSV: too few distinct coordinates for a grid");
  }
  Grid g(static_cast<int>(xs.size()) - 1, static_cast<int>(ys.size()) - 1);
  if (rows.size() != g.node_count()) {
    throw InvariantError("CSV: row count does not match a full node set");
  }
  GridFunction u(g);
  for (const auto& r : rows) {
    const int i = static_cast<int>(std::lround((r.x1 + 1.0) / g.h1()));
    const int j = static_cast<int>(std::lround((r.x2 + 1.0) / g.h2()));
    u.at(i, j) = r.value;
  }
  lock_boundary(u);
  return u;
}

void write_vsgf(std::ostream& os, const GridFunction& u) {
  os.write(kMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(u.grid.n1()));
  put_u32(os, static_cast<std::uint32_t>(u.grid.n2()));
  for (double v : u.values) {
    put_f64(os, v);
  }
}

GridFunction read_vsgf(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw InvariantError("VSGF: bad magic");
  }
  const std::uint32_t n1 = get_u32(is);
  const std::uint32_t n2 = get_u32(is);
  if (n1 > (1u << 20) || n2 > (1u << 20)) {
    throw InvariantError("VSGF: implausible grid size");
  }
  GridFunction u(Grid(static_cast<int>(n1), static_cast<int>(n2)));
  for (double& v : u.values) {
    v = get_f64(is);
  }
  lock_boundary(u);
  return u;
}

void save_vsgf(const std::string& path, const GridFunction& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ConfigError("cannot open '" + path + "' for writing");
  }
  write_vsgf(os, u);
}

GridFunction load_vsgf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ConfigError("cannot open '" + path + "'");
  }
  return read_vsgf(is);
}

BoundaryMap boundary_from_table(const Grid& g, std::istream& csv) {
  const auto rows = read_rows(csv);
  auto table = std::make_shared<std::map<std::size_t, double>>();
  for (const auto& r : rows) {
    const double fi = (r.x1 + 1.0) / g.h1();
    const double fj = (r.x2 + 1.0) / g.h2();
    const long i = std::lround(fi);
    const long j = std::lround(fj);
    if (std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6 || i < 0 || j < 0 || i > g.n1() ||
        j > g.n2()) {
      throw InvariantError("boundary table row is not on a grid node");
    }
    if (!g.on_boundary(static_cast<int>(i), static_cast<int>(j))) {
      continue;
    }
    (*table)[g.node(static_cast<int>(i), static_cast<int>(j))] = r.value;
  }
  for (int j = 0; j <= g.n2(); ++j) {
    for (int i = 0; i <= g.n1(); ++i) {
      if (g.on_boundary(i, j) && !table->count(g.node(i, j))) {
        throw InvariantError("boundary table misses node (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      }
    }
  }
  return [g, table](double x1, double x2) {
    const int i = static_cast<int>(std::lround((x1 + 1.0) / g.h1()));
    const int j = static_cast<int>(std::lround((x2 + 1.0) / g.h2()));
    auto it = table->find(g.node(std::clamp(i, 0, g.n1()), std::clamp(j, 0, g.n2())));
    if (it == table->end()) {
      throw InvariantError("boundary table queried away from the boundary");
    }
    return it->second;
  };
}

} // namespace splitvar
