#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "blab/geom/grid.hpp"

namespace blab {

// Text format:
//   grid v1 <h> <origin-x> <origin-y> <rows> <cols> <planar|reinhardt>
//   one line per row (bottom row first): run lengths, alternating
//   false/true, starting with a (possibly zero) false run
//   optional "cover <i> <j> <hex>" lines for partially covered cells
//   end

inline std::string fmt17(double v)
{
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

inline void write_grid(std::ostream& os, const GridDomain& U)
{
  const Lattice& L = U.lat;
  os << "grid v1 " << fmt17(L.h) << ' ' << fmt17(L.origin_x()) << ' ' << fmt17(L.origin_y()) << ' ' << L.ny << ' '
     << L.nx << ' ' << (U.kind == DomainKind::planar ? "planar" : "reinhardt") << '\n';
  for (int j = 0; j < L.ny; ++j) {
    std::uint8_t cur = 0;
    int run = 0;
    bool first = true;
    auto flush = [&] {
      os << (first ? "" : " ") << run;
      first = false;
    };
    for (int i = 0; i < L.nx; ++i) {
      const std::uint8_t m = U.mask[L.index(i, j)] ? 1 : 0;
      if (m != cur) {
        flush();
        cur = m;
        run = 0;
      }
      ++run;
    }
    flush();
    os << '\n';
  }
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      const std::size_t k = L.index(i, j);
      const std::uint64_t full = U.mask[k] ? kFullCover : 0;
      if (U.cover[k] != full) {
        char b[20];
        std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(U.cover[k]));
        os << "cover " << i << ' ' << j << ' ' << b << '\n';
      }
    }
  os << "end\n";
}

inline GridDomain read_grid(std::istream& is)
{
  std::string tag, ver, kind;
  double h, x0, y0;
  long rows, cols;
  if (!(is >> tag >> ver >> h >> x0 >> y0 >> rows >> cols >> kind) || tag != "grid" || ver != "v1")
    throw ConfigError("bad grid header");
  if (!(h > 0) || rows <= 0 || cols <= 0) throw ConfigError("bad grid dimensions");
  Lattice L;
  L.h = h;
  L.i0 = std::lround(x0 / h);
  L.j0 = std::lround(y0 / h);
  L.ox = x0 - h * double(L.i0);
  L.oy = y0 - h * double(L.j0);
  if (std::abs(L.ox) < 1e-9 * h) L.ox = 0;
  if (std::abs(L.oy) < 1e-9 * h) L.oy = 0;
  L.nx = int(cols);
  L.ny = int(rows);
  GridDomain U;
  U.lat = L;
  if (kind == "planar")
    U.kind = DomainKind::planar;
  else if (kind == "reinhardt")
    U.kind = DomainKind::reinhardt;
  else
    throw ConfigError("unknown grid kind: " + kind);
  U.mask.assign(L.size(), 0);
  std::string line;
  std::getline(is, line);
  for (int j = 0; j < L.ny; ++j) {
    if (!std::getline(is, line)) throw ConfigError("truncated grid");
    std::istringstream rs(line);
    long run;
    int i = 0;
    std::uint8_t cur = 0;
    while (rs >> run) {
      if (run < 0 || i + run > L.nx) throw ConfigError("run lengths overflow the row");
      for (long r = 0; r < run; ++r) U.mask[L.index(i++, j)] = cur;
      cur ^= 1;
    }
    if (i != L.nx) throw ConfigError("row length mismatch");
  }
  U.cover.resize(L.size());
  for (std::size_t k = 0; k < L.size(); ++k) U.cover[k] = U.mask[k] ? kFullCover : 0;
  while (is >> tag) {
    if (tag == "end") return U;
    if (tag != "cover") throw ConfigError("unexpected token in grid: " + tag);
    int i, j;
    std::string hex;
    if (!(is >> i >> j >> hex) || i < 0 || j < 0 || i >= L.nx || j >= L.ny)
      throw ConfigError("bad cover line");
    U.cover[L.index(i, j)] = std::stoull(hex, nullptr, 16);
  }
  throw ConfigError("grid missing end marker");
}

}  // namespace blab
