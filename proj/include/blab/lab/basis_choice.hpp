#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "blab/basis/terms.hpp"
#include "blab/geom/topology.hpp"
#include "blab/kernel/closed_form.hpp"

namespace blab {

struct Hole
{
  Complex center;
  double inner_radius = 0.0;  ///< distance from the centre to the nearest domain cell
};

/// Bounded complementary components of U. Each gets the hole cell nearest
/// its centroid as centre.
inline std::vector<Hole> find_holes(const GridDomain& U)
{
  const Lattice& L = U.lat;
  std::vector<int> lab(L.size(), -1);  // complement component id, -1 unvisited
  int cid = 0;
  std::vector<std::pair<int, int>> stack, members;
  std::vector<Hole> holes;
  std::vector<Point> dom;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (U.mask[L.index(i, j)]) dom.push_back(L.center(i, j));
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (U.mask[L.index(i, j)] || lab[L.index(i, j)] != -1) continue;
      members.clear();
      bool touches = false;
      const int id = cid++;
      lab[L.index(i, j)] = id;
      stack.push_back({i, j});
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        members.push_back({a, b});
        if (a == 0 || b == 0 || a == L.nx - 1 || b == L.ny - 1) touches = true;
        for (int db = -1; db <= 1; ++db)
          for (int da = -1; da <= 1; ++da) {
            const int x = a + da, y = b + db;
            if (x < 0 || y < 0 || x >= L.nx || y >= L.ny) continue;
            const std::size_t k = L.index(x, y);
            if (U.mask[k] || lab[k] != -1) continue;
            lab[k] = id;
            stack.push_back({x, y});
          }
      }
      if (touches) continue;
      double cx = 0, cy = 0;
      for (auto [a, b] : members) {
        cx += L.cx(a);
        cy += L.cy(b);
      }
      cx /= double(members.size());
      cy /= double(members.size());
      Point best{};
      double bd = std::numeric_limits<double>::infinity();
      for (auto [a, b] : members) {
        const double d = std::hypot(L.cx(a) - cx, L.cy(b) - cy);
        if (d < bd) {
          bd = d;
          best = L.center(a, b);
        }
      }
      auto cc = L.cell_of({cx, cy});
      if (cc && lab[L.index(cc->first, cc->second)] == id) best = {cx, cy};  // centroid lies in the hole
      double r = std::numeric_limits<double>::infinity();
      for (const auto& p : dom) r = std::min(r, std::hypot(p.x - best.x, p.y - best.y));
      holes.push_back({Complex(best.x, best.y), r});
    }
  return holes;
}

/// Polynomial block of degree npos about the mask centroid (scaled by the
/// largest distance to a cell) plus nneg negative powers about each hole.
inline BasisSpec default_basis(const GridDomain& U, int nneg, int npos)
{
  const Lattice& L = U.lat;
  double cx = 0, cy = 0;
  std::size_t n = 0;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (U.mask[L.index(i, j)]) {
        cx += L.cx(i);
        cy += L.cy(j);
        ++n;
      }
  if (!n) throw DomainError("empty domain");
  cx /= double(n);
  cy /= double(n);
  double rmax = 0;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (U.mask[L.index(i, j)]) rmax = std::max(rmax, std::hypot(L.cx(i) - cx, L.cy(j) - cy));
  BasisSpec b = polynomial_block(Complex(cx, cy), npos, std::max(rmax, L.h));
  if (nneg > 0)
    for (const auto& hole : find_holes(U))
      for (int m = 1; m <= nneg; ++m) b.terms.push_back({hole.center, -m, std::max(hole.inner_radius, L.h)});
  return b;
}

/// Closed-form kernel of a disc or annulus shape, if it is one.
inline std::optional<ClosedFormKernel> closed_form_for(const Shape& s)
{
  if (auto d = std::get_if<Disc>(&s.v)) return ClosedFormKernel::disc(to_complex(d->center), d->radius);
  if (auto a = std::get_if<Annulus>(&s.v)) {
    if (a->inner > 0) return ClosedFormKernel::annulus(to_complex(a->center), a->inner, a->outer);
    return ClosedFormKernel::disc(to_complex(a->center), a->outer);
  }
  return std::nullopt;
}

}  // namespace blab
