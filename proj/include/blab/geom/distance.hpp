#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "blab/geom/grid.hpp"

namespace blab {

namespace detail {

// Felzenszwalb-Huttenlocher lower envelope of parabolas, one line.
inline void edt_line(const double* f, int n, std::ptrdiff_t stride, double* out, std::vector<int>& v,
                     std::vector<double>& z, std::vector<double>& tmp)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  tmp.resize(n);
  for (int q = 0; q < n; ++q) tmp[q] = f[q * stride];
  v.resize(n);
  z.resize(n + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (tmp[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((tmp[q] + double(q) * q) - (tmp[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0)
        --k;
      else
        break;
    }
    if (s <= z[k]) {  // k == 0 and the new parabola dominates everywhere
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[q * stride] = inf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q * stride] = d * d + tmp[v[j]];
  }
}

}  // namespace detail

/// Exact squared Euclidean distance (in cell units) from every cell to
/// the nearest site cell. Infinity if there are no sites.
inline std::vector<double> squared_edt(const std::vector<std::uint8_t>& site, int nx, int ny)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> f(std::size_t(nx) * ny);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = site[k] ? 0.0 : inf;
  std::vector<int> v;
  std::vector<double> z, tmp;
  std::vector<double> g(f.size());
  for (int i = 0; i < nx; ++i) detail::edt_line(&f[i], ny, nx, &g[i], v, z, tmp);
  for (int j = 0; j < ny; ++j) detail::edt_line(&g[std::size_t(j) * nx], nx, 1, &f[std::size_t(j) * nx], v, z, tmp);
  return f;
}

/// Distance from each true cell centre to the nearest complement cell
/// centre; 0 on false cells. Cells beyond the array count as complement.
/// For a Reinhardt profile, distances are measured in C^2, i.e. the
/// profile is mirrored across both axes first.
inline std::vector<double> distance_field(const GridDomain& U)
{
  const int nx = U.lat.nx, ny = U.lat.ny;
  const bool rh = U.kind == DomainKind::reinhardt;
  // padded (and possibly mirrored) site array
  const int mx = rh ? 2 * nx + 2 : nx + 2, my = rh ? 2 * ny + 2 : ny + 2;
  std::vector<std::uint8_t> site(std::size_t(mx) * my, 1);
  auto put = [&](int a, int b, std::uint8_t m) { site[std::size_t(b) * mx + a] = !m; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::uint8_t m = U.mask[U.lat.index(i, j)];
      if (rh) {
        put(nx + 1 + i, ny + 1 + j, m);
        put(nx - i, ny + 1 + j, m);
        put(nx + 1 + i, ny - j, m);
        put(nx - i, ny - j, m);
      } else {
        put(i + 1, j + 1, m);
      }
    }
  const auto sq = squared_edt(site, mx, my);
  std::vector<double> d(U.lat.size(), 0.0);
  const int oi = rh ? nx + 1 : 1, oj = rh ? ny + 1 : 1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      d[U.lat.index(i, j)] = std::sqrt(sq[std::size_t(j + oj) * mx + (i + oi)]) * U.lat.h;
  return d;
}

}  // namespace blab
