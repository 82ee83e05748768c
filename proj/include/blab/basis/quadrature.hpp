#pragma once

#include <numbers>
#include <vector>

#include "blab/geom/grid.hpp"
#include "blab/geom/topology.hpp"

namespace blab {

/// Discrete measure of a grid domain. Fully covered cells contribute their
/// centre with weight h^2; partially covered cells contribute each covered
/// sub-sample with weight (h/8)^2. Profile nodes carry the torus factor
/// (2 pi)^2 r1 r2 and z = r1 + i r2.
struct QuadNodes
{
  std::vector<Complex> z;
  std::vector<double> w;
  std::vector<int> label;

  std::size_t size() const { return z.size(); }
};

inline QuadNodes quadrature_nodes(const GridDomain& U, const Components& comps)
{
  const Lattice& L = U.lat;
  const double a_full = L.h * L.h, a_sub = a_full / (kSub * kSub);
  const double torus = 4.0 * std::numbers::pi * std::numbers::pi;
  const bool rh = U.kind == DomainKind::reinhardt;
  QuadNodes q;
  auto add = [&](Point p, double a, int lab) {
    q.z.emplace_back(p.x, p.y);
    q.w.push_back(rh ? a * torus * p.x * p.y : a);
    q.label.push_back(lab);
  };
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      const std::uint64_t c = U.cover[L.index(i, j)];
      if (!c) continue;
      const int lab = quadrature_label(U, comps, i, j);
      if (lab < 0) continue;
      if (c == kFullCover) {
        add(L.center(i, j), a_full, lab);
        continue;
      }
      for (int sj = 0; sj < kSub; ++sj)
        for (int si = 0; si < kSub; ++si)
          if (c >> (sj * kSub + si) & 1ull) add(L.sub_point(i, j, si, sj), a_sub, lab);
    }
  return q;
}

inline QuadNodes quadrature_nodes(const GridDomain& U) { return quadrature_nodes(U, components(U)); }

}  // namespace blab
