#pragma once

#include <vector>

#include "blab/geom/grid.hpp"

namespace blab {

/// 4-connected component labels of the mask; -1 off the mask.
struct Components
{
  std::vector<int> label;
  int count = 0;
};

inline Components components(const GridDomain& U)
{
  const Lattice& L = U.lat;
  Components c;
  c.label.assign(L.size(), -1);
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (!U.mask[L.index(i, j)] || c.label[L.index(i, j)] >= 0) continue;
      const int id = c.count++;
      c.label[L.index(i, j)] = id;
      stack.push_back({i, j});
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const int nb[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (auto& n : nb)
          if (U.in(n[0], n[1]) && c.label[L.index(n[0], n[1])] < 0) {
            c.label[L.index(n[0], n[1])] = id;
            stack.push_back({n[0], n[1]});
          }
      }
    }
  return c;
}

/// Label used for quadrature of cell k: its own, or for a coverage-only
/// cell the first labelled 8-neighbour.
inline int quadrature_label(const GridDomain& U, const Components& c, int i, int j)
{
  const int own = c.label[U.lat.index(i, j)];
  if (own >= 0) return own;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (U.in(i + di, j + dj)) return c.label[U.lat.index(i + di, j + dj)];
  return -1;
}

/// Cells of the bounded complement of component `comp`: cells outside the
/// component not 8-reachable from the array border through its complement.
inline std::vector<std::uint8_t> hole_cells(const GridDomain& U, const Components& c, int comp)
{
  const Lattice& L = U.lat;
  std::vector<std::uint8_t> outside(L.size(), 0);
  auto free = [&](int i, int j) { return c.label[L.index(i, j)] != comp; };
  std::vector<std::pair<int, int>> stack;
  auto seed = [&](int i, int j) {
    if (free(i, j) && !outside[L.index(i, j)]) {
      outside[L.index(i, j)] = 1;
      stack.push_back({i, j});
    }
  };
  for (int i = 0; i < L.nx; ++i) {
    seed(i, 0);
    seed(i, L.ny - 1);
  }
  for (int j = 0; j < L.ny; ++j) {
    seed(0, j);
    seed(L.nx - 1, j);
  }
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int x = a + di, y = b + dj;
        if (x < 0 || y < 0 || x >= L.nx || y >= L.ny) continue;
        seed(x, y);
      }
  }
  std::vector<std::uint8_t> hole(L.size(), 0);
  for (std::size_t k = 0; k < L.size(); ++k) hole[k] = c.label[k] != comp && !outside[k];
  return hole;
}

/// True when p lies in a bounded complementary component of component
/// `comp` (or of any component when comp < 0).
inline bool in_hole(const GridDomain& U, const Components& c, int comp, Point p)
{
  auto cell = U.lat.cell_of(p);
  if (!cell) return false;
  const std::size_t k = U.lat.index(cell->first, cell->second);
  if (U.mask[k]) return false;
  for (int q = 0; q < c.count; ++q) {
    if (comp >= 0 && q != comp) continue;
    if (hole_cells(U, c, q)[k]) return true;
  }
  return false;
}

}  // namespace blab
