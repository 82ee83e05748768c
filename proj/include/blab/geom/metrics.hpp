#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "blab/geom/distance.hpp"
#include "blab/geom/grid.hpp"

namespace blab {

/// Subset of the cells of a lattice.
struct CellSet
{
  Lattice lat;
  std::vector<std::uint8_t> in;

  std::size_t count() const
  {
    std::size_t n = 0;
    for (auto b : in) n += b;
    return n;
  }
  std::vector<Point> points() const
  {
    std::vector<Point> p;
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i)
        if (in[lat.index(i, j)]) p.push_back(lat.center(i, j));
    return p;
  }
};

struct ExtractedSets
{
  CellSet closure;
  CellSet boundary;
};

/// Closure = all true cells; boundary = true cells with a false
/// 4-neighbour (off-array counts as false, except across the axes of a
/// Reinhardt profile, which are interior in C^2).
inline ExtractedSets extract_sets(const GridDomain& U)
{
  const Lattice& L = U.lat;
  const bool rh = U.kind == DomainKind::reinhardt;
  ExtractedSets s{{L, U.mask}, {L, std::vector<std::uint8_t>(L.size(), 0)}};
  auto val = [&](int i, int j) -> bool {
    if (rh && (i < 0 || j < 0)) return U.in(std::max(i, 0), std::max(j, 0));
    return U.in(i, j);
  };
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (U.mask[L.index(i, j)] && (!val(i - 1, j) || !val(i + 1, j) || !val(i, j - 1) || !val(i, j + 1)))
        s.boundary.in[L.index(i, j)] = 1;
  return s;
}

/// Exact Hausdorff distance between finite point sets (brute force with
/// early exit).
inline double hausdorff(const std::vector<Point>& A, const std::vector<Point>& B)
{
  if (A.empty() || B.empty()) throw DomainError("hausdorff distance of an empty set");
  auto directed = [](const std::vector<Point>& P, const std::vector<Point>& Q) {
    double cmax = 0.0;
    for (const auto& p : P) {
      double cmin = std::numeric_limits<double>::infinity();
      for (const auto& q : Q) {
        const double dx = p.x - q.x, dy = p.y - q.y, d = dx * dx + dy * dy;
        if (d < cmin) {
          cmin = d;
          if (cmin <= cmax) break;
        }
      }
      cmax = std::max(cmax, cmin);
    }
    return cmax;
  };
  return std::sqrt(std::max(directed(A, B), directed(B, A)));
}

/// Hausdorff distance between two cell sets via exact distance transforms.
inline double hausdorff(const CellSet& A, const CellSet& B)
{
  if (A.count() == 0 || B.count() == 0) throw DomainError("hausdorff distance of an empty set");
  const Lattice L = common_frame(A.lat, B.lat);
  auto lift = [&](const CellSet& S) {
    std::vector<std::uint8_t> m(L.size(), 0);
    const long di = S.lat.i0 - L.i0, dj = S.lat.j0 - L.j0;
    for (int j = 0; j < S.lat.ny; ++j)
      for (int i = 0; i < S.lat.nx; ++i) m[L.index(int(i + di), int(j + dj))] = S.in[S.lat.index(i, j)];
    return m;
  };
  const auto a = lift(A), b = lift(B);
  const auto da = squared_edt(a, L.nx, L.ny), db = squared_edt(b, L.nx, L.ny);
  double m = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    if (a[k]) m = std::max(m, db[k]);
    if (b[k]) m = std::max(m, da[k]);
  }
  return std::sqrt(m) * L.h;
}

/// Lebesgue measure of the mask: h^2 per true cell in the plane, the
/// torus volume (2 pi)^2 r1 r2 h^2 per profile cell.
inline double cell_volume(const Lattice& L, DomainKind kind, int i, int j)
{
  if (kind == DomainKind::planar) return L.h * L.h;
  return 4.0 * std::numbers::pi * std::numbers::pi * L.cx(i) * L.cy(j) * L.h * L.h;
}

inline double volume(const GridDomain& U)
{
  double v = 0.0;
  for (int j = 0; j < U.lat.ny; ++j)
    for (int i = 0; i < U.lat.nx; ++i)
      if (U.mask[U.lat.index(i, j)]) v += cell_volume(U.lat, U.kind, i, j);
  return v;
}

inline double rho1(const GridDomain& U, const GridDomain& V)
{
  require_same_kind(U, V);
  const auto a = extract_sets(U), b = extract_sets(V);
  return hausdorff(a.closure, b.closure) + hausdorff(a.boundary, b.boundary);
}

struct Rho2Terms
{
  double volume_term = 0.0;
  double sup_term = 0.0;
  double total() const { return volume_term + sup_term; }
};

inline Rho2Terms rho2_terms(const GridDomain& U, const GridDomain& V)
{
  require_same_kind(U, V);
  const Lattice L = common_frame(U.lat, V.lat);
  const GridDomain A = embed(U, L), B = embed(V, L);
  const auto da = distance_field(A), db = distance_field(B);
  Rho2Terms t;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      const std::size_t k = L.index(i, j);
      if (A.mask[k] != B.mask[k]) t.volume_term += cell_volume(L, U.kind, i, j);
      t.sup_term = std::max(t.sup_term, std::abs(da[k] - db[k]));
    }
  return t;
}

inline double rho2(const GridDomain& U, const GridDomain& V) { return rho2_terms(U, V).total(); }

}  // namespace blab
