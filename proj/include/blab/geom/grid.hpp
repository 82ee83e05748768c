#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "blab/core.hpp"
#include "blab/geom/shape.hpp"

namespace blab {

enum class DomainKind { planar, reinhardt };

inline constexpr int kSub = 8;                   ///< sub-samples per cell side
inline constexpr std::uint64_t kFullCover = ~0ull;

/// Uniform cell lattice. Cells sit on a global frame: cell i has centre
/// x = ox + h*(i0 + i + 1/2), so two lattices with the same h and frame
/// shift (ox, oy) embed into each other by integer offsets.
struct Lattice
{
  double h = 0.01;
  double ox = 0.0, oy = 0.0;
  long i0 = 0, j0 = 0;
  int nx = 0, ny = 0;

  std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
  std::size_t index(int i, int j) const { return std::size_t(j) * nx + i; }
  double cx(int i) const { return ox + h * (double(i0 + i) + 0.5); }
  double cy(int j) const { return oy + h * (double(j0 + j) + 0.5); }
  Point center(int i, int j) const { return {cx(i), cy(j)}; }
  double origin_x() const { return ox + h * double(i0); }
  double origin_y() const { return oy + h * double(j0); }

  /// Sub-sample (si, sj) of cell (i, j), si, sj in [0, kSub).
  Point sub_point(int i, int j, int si, int sj) const
  {
    return {ox + h * (double(i0 + i) + (si + 0.5) / kSub), oy + h * (double(j0 + j) + (sj + 0.5) / kSub)};
  }

  /// Cell containing p, if inside the array.
  std::optional<std::pair<int, int>> cell_of(Point p) const
  {
    const double fi = std::floor((p.x - ox) / h) - double(i0);
    const double fj = std::floor((p.y - oy) / h) - double(j0);
    if (fi < 0 || fj < 0 || fi >= nx || fj >= ny) return std::nullopt;
    return std::pair<int, int>{int(fi), int(fj)};
  }

  bool same_frame(const Lattice& o) const
  {
    return std::abs(h - o.h) <= 1e-12 * h && std::abs(ox - o.ox) <= 1e-9 * h && std::abs(oy - o.oy) <= 1e-9 * h;
  }
};

/// Boolean cell mask plus an 8x8 sub-sample occupancy word per cell. The
/// mask (cell centres) defines the domain for every metric; the coverage
/// word refines the quadrature measure along the boundary.
struct GridDomain
{
  Lattice lat;
  DomainKind kind = DomainKind::planar;
  std::vector<std::uint8_t> mask;
  std::vector<std::uint64_t> cover;

  bool in(int i, int j) const
  {
    return i >= 0 && j >= 0 && i < lat.nx && j < lat.ny && mask[lat.index(i, j)];
  }
  bool contains(Point p) const
  {
    auto c = lat.cell_of(p);
    return c && mask[lat.index(c->first, c->second)];
  }
  std::size_t count() const
  {
    std::size_t n = 0;
    for (auto m : mask) n += m;
    return n;
  }
  double h() const { return lat.h; }
};

/// Lattice with spacing h covering box plus `pad` cells, aligned to the
/// global frame (multiples of h).
inline Lattice aligned_lattice(const Box& b, double h, int pad = 2)
{
  if (!(h > 0)) throw DomainError("lattice spacing must be positive");
  if (b.empty()) throw DomainError("empty bounding box");
  Lattice L;
  L.h = h;
  const long ia = long(std::floor(b.xmin / h)) - pad, ib = long(std::ceil(b.xmax / h)) + pad;
  const long ja = long(std::floor(b.ymin / h)) - pad, jb = long(std::ceil(b.ymax / h)) + pad;
  L.i0 = ia;
  L.j0 = ja;
  L.nx = int(ib - ia);
  L.ny = int(jb - ja);
  return L;
}

/// Rasterize a shape on a given lattice.
inline GridDomain make_domain(const Shape& s, const Lattice& lat, DomainKind kind = DomainKind::planar)
{
  validate(s);
  if (kind == DomainKind::reinhardt && (lat.origin_x() < -1e-12 || lat.origin_y() < -1e-12))
    throw DomainError("reinhardt profile lattice must start at the axes");
  GridDomain U;
  U.lat = lat;
  U.kind = kind;
  U.mask.assign(lat.size(), 0);
  U.cover.assign(lat.size(), 0);
  const Box bb = bounding_box(s);
  const double h = lat.h;
  for (int j = 0; j < lat.ny; ++j) {
    const double y = lat.cy(j);
    if (y + h < bb.ymin || y - h > bb.ymax) continue;
    for (int i = 0; i < lat.nx; ++i) {
      const double x = lat.cx(i);
      if (x + h < bb.xmin || x - h > bb.xmax) continue;
      const std::size_t k = lat.index(i, j);
      U.mask[k] = contains(s, {x, y});
      std::uint64_t w = 0;
      for (int sj = 0; sj < kSub; ++sj)
        for (int si = 0; si < kSub; ++si)
          if (contains(s, lat.sub_point(i, j, si, sj))) w |= 1ull << (sj * kSub + si);
      U.cover[k] = w;
    }
  }
  return U;
}

/// Rasterize on an h-aligned lattice with a two-cell margin. Reinhardt
/// profiles are clipped to the quadrant r1, r2 >= 0.
inline GridDomain make_domain(const Shape& s, double h, DomainKind kind = DomainKind::planar)
{
  validate(s);
  Box b = bounding_box(s);
  Lattice lat = aligned_lattice(b, h);
  if (kind == DomainKind::reinhardt) {
    // only the closed quadrant matters; shapes may spill across the axes
    if (!(b.xmax > 0 && b.ymax > 0)) throw DomainError("reinhardt profile misses the open quadrant");
    lat.nx += int(lat.i0);
    lat.ny += int(lat.j0);
    lat.i0 = lat.j0 = 0;
  }
  return make_domain(s, lat, kind);
}

/// Domain from a bare mask; every true cell counts as fully covered.
inline GridDomain from_mask(const Lattice& lat, std::vector<std::uint8_t> mask, DomainKind kind = DomainKind::planar)
{
  if (mask.size() != lat.size()) throw DomainError("mask size does not match lattice");
  GridDomain U;
  U.lat = lat;
  U.kind = kind;
  U.cover.resize(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) U.cover[k] = mask[k] ? kFullCover : 0;
  U.mask = std::move(mask);
  return U;
}

/// Smallest lattice containing both frames. Throws on a frame mismatch.
inline Lattice common_frame(const Lattice& a, const Lattice& b)
{
  if (!a.same_frame(b)) throw DomainError("lattices are not aligned to a common frame");
  Lattice L = a;
  L.i0 = std::min(a.i0, b.i0);
  L.j0 = std::min(a.j0, b.j0);
  L.nx = int(std::max(a.i0 + a.nx, b.i0 + b.nx) - L.i0);
  L.ny = int(std::max(a.j0 + a.ny, b.j0 + b.ny) - L.j0);
  return L;
}

/// Copy U into a larger (or equal) lattice of the same frame.
inline GridDomain embed(const GridDomain& U, const Lattice& L)
{
  if (!U.lat.same_frame(L)) throw DomainError("lattices are not aligned to a common frame");
  const long di = U.lat.i0 - L.i0, dj = U.lat.j0 - L.j0;
  if (di < 0 || dj < 0 || di + U.lat.nx > L.nx || dj + U.lat.ny > L.ny)
    throw DomainError("target lattice does not contain the domain");
  GridDomain V;
  V.lat = L;
  V.kind = U.kind;
  V.mask.assign(L.size(), 0);
  V.cover.assign(L.size(), 0);
  for (int j = 0; j < U.lat.ny; ++j)
    for (int i = 0; i < U.lat.nx; ++i) {
      const std::size_t s = U.lat.index(i, j), t = L.index(int(i + di), int(j + dj));
      V.mask[t] = U.mask[s];
      V.cover[t] = U.cover[s];
    }
  return V;
}

/// Grow the array by `pad` cells on every side (quadrant-anchored for
/// Reinhardt profiles).
inline GridDomain padded(const GridDomain& U, int pad)
{
  Lattice L = U.lat;
  if (U.kind == DomainKind::reinhardt) {
    L.nx += pad;
    L.ny += pad;
  } else {
    L.i0 -= pad;
    L.j0 -= pad;
    L.nx += 2 * pad;
    L.ny += 2 * pad;
  }
  return embed(U, L);
}

inline void require_same_kind(const GridDomain& a, const GridDomain& b)
{
  if (a.kind != b.kind) throw DomainError("domains of different kinds");
}

/// Cell-wise union; coverage words are OR-ed.
inline GridDomain unite(const GridDomain& a, const GridDomain& b)
{
  require_same_kind(a, b);
  const Lattice L = common_frame(a.lat, b.lat);
  GridDomain A = embed(a, L);
  const GridDomain B = embed(b, L);
  for (std::size_t k = 0; k < L.size(); ++k) {
    A.mask[k] = A.mask[k] | B.mask[k];
    A.cover[k] |= B.cover[k];
  }
  return A;
}

/// Cell-wise difference; coverage words are AND-NOT-ed.
inline GridDomain subtract(const GridDomain& a, const GridDomain& b)
{
  require_same_kind(a, b);
  const Lattice L = common_frame(a.lat, b.lat);
  GridDomain A = embed(a, L);
  const GridDomain B = embed(b, L);
  for (std::size_t k = 0; k < L.size(); ++k) {
    A.mask[k] = A.mask[k] && !B.mask[k];
    A.cover[k] &= ~B.cover[k];
  }
  return A;
}

}  // namespace blab
