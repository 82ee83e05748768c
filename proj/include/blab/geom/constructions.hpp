#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "blab/geom/distance.hpp"
#include "blab/geom/metrics.hpp"
#include "blab/geom/topology.hpp"

namespace blab {

/// Ordered family of domains approaching `target`, with the parameter
/// (depth or neck width) that produced each member.
struct DomainSequence
{
  std::vector<GridDomain> members;
  std::vector<double> params;
  GridDomain target;
};

/// Members {d_G > eps} for each eps. Coverage of members is cell-exact.
inline DomainSequence interior_exhaustion(const GridDomain& G, const std::vector<double>& depths)
{
  if (depths.empty()) throw DomainError("empty depth schedule");
  const auto d = distance_field(G);
  DomainSequence seq;
  seq.target = G;
  for (double eps : depths) {
    if (!(eps > G.h())) throw DomainError("exhaustion depth must exceed the lattice spacing");
    std::vector<std::uint8_t> m(G.lat.size(), 0);
    std::size_t n = 0;
    for (std::size_t k = 0; k < m.size(); ++k) n += (m[k] = d[k] > eps);
    if (!n) throw DomainError("exhaustion member is empty");
    seq.members.push_back(from_mask(G.lat, std::move(m), G.kind));
    seq.params.push_back(eps);
  }
  return seq;
}

/// Lattice of the same frame as `frame`, enlarged to cover box b.
inline Lattice covering_lattice(const Lattice& frame, const Box& b, int pad = 2)
{
  Lattice L = frame;
  const double h = frame.h;
  const long ia = long(std::floor((b.xmin - frame.ox) / h)) - pad, ib = long(std::ceil((b.xmax - frame.ox) / h)) + pad;
  const long ja = long(std::floor((b.ymin - frame.oy) / h)) - pad, jb = long(std::ceil((b.ymax - frame.oy) / h)) + pad;
  L.i0 = std::min(frame.i0, ia);
  L.j0 = std::min(frame.j0, ja);
  L.nx = int(std::max(frame.i0 + frame.nx, ib) - L.i0);
  L.ny = int(std::max(frame.j0 + frame.ny, jb) - L.j0);
  return L;
}

struct BoundaryPair
{
  Point on_g;
  Point on_d;
  double distance = 0.0;
};

/// Closest pair of boundary cell centres, one from each domain.
inline BoundaryPair closest_boundary_pair(const GridDomain& G, const GridDomain& D)
{
  const auto a = extract_sets(G).boundary.points(), b = extract_sets(D).boundary.points();
  if (a.empty() || b.empty()) throw DomainError("empty boundary");
  BoundaryPair best{{}, {}, std::numeric_limits<double>::infinity()};
  for (const auto& p : a)
    for (const auto& q : b) {
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      if (d < best.distance) best = {p, q, d};
    }
  return best;
}

/// G union D union a tube of width w around [a, b].
inline GridDomain attach_neck(const GridDomain& base, Point a, Point b, double w)
{
  const Tube t{a, b, w};
  const Lattice L = covering_lattice(base.lat, bounding_box(Shape(t)));
  return unite(embed(base, L), make_domain(Shape(t), L));
}

/// Barbell family: G and D joined by necks of the given widths along the
/// segment [a, b]. a and b must sit on boundary cells of G and D.
inline DomainSequence barbell_sequence(const GridDomain& G, const GridDomain& D, Point a, Point b,
                                       const std::vector<double>& widths)
{
  if (G.kind != DomainKind::planar || D.kind != DomainKind::planar)
    throw DomainError("barbell construction is planar");
  const Lattice L = common_frame(G.lat, D.lat);
  const GridDomain g = embed(G, L), d = embed(D, L);
  const double h = L.h;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (!d.mask[L.index(i, j)]) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (g.in(i + di, j + dj)) throw DomainError("G and D must be disjoint with a positive gap");
    }
  auto near_boundary = [&](const GridDomain& U, Point p) {
    for (const auto& q : extract_sets(U).boundary.points())
      if (std::hypot(p.x - q.x, p.y - q.y) <= 1.5 * h) return true;
    return false;
  };
  if (!near_boundary(g, a)) throw DomainError("segment start is not on a boundary cell of G");
  if (!near_boundary(d, b)) throw DomainError("segment end is not on a boundary cell of D");
  DomainSequence seq;
  seq.target = unite(g, d);
  for (double w : widths) {
    if (w < 3.0 * h - 1e-12) throw DomainError("neck width below three cells");
    GridDomain m = attach_neck(seq.target, a, b, w);
    if (components(m).count != 1) throw DomainError("barbell member is not connected");
    seq.members.push_back(std::move(m));
    seq.params.push_back(w);
  }
  return seq;
}

namespace detail {

inline double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Andrew's monotone chain; counter-clockwise, no collinear points.
inline std::vector<Point> convex_hull(std::vector<Point> p)
{
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (p.size() < 3) return p;
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

inline bool strictly_inside(const std::vector<Point>& hull, Point q)
{
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (cross(hull[i], hull[(i + 1) % hull.size()], q) <= 1e-12) return false;
  return true;
}

}  // namespace detail

/// Discrete pseudoconvexity test for a Reinhardt profile: the log-image
/// must be convex, and a profile touching an axis must be complete in
/// that variable. Cells within 2h (profile plane) of the domain are
/// forgiven as rasterization error.
inline bool is_logconvex_profile(const GridDomain& U)
{
  if (U.kind != DomainKind::reinhardt) throw DomainError("not a Reinhardt profile");
  const Lattice& L = U.lat;
  std::vector<Point> logs;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (U.mask[L.index(i, j)]) logs.push_back({std::log(L.cx(i)), std::log(L.cy(j))});
  if (logs.empty()) throw DomainError("empty profile");
  std::vector<std::uint8_t> sites(U.mask.begin(), U.mask.end());
  const auto sq = squared_edt(sites, L.nx, L.ny);
  const double tol2 = 4.0;  // (2h)^2 in cell units
  auto violation = [&](int i, int j) { return sq[L.index(i, j)] > tol2 + 1e-9; };

  const auto hull = detail::convex_hull(logs);
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (!U.mask[L.index(i, j)] && violation(i, j) &&
          detail::strictly_inside(hull, {std::log(L.cx(i)), std::log(L.cy(j))}))
        return false;

  bool meets_r1_axis = false, meets_r2_axis = false;
  for (int j = 0; j < L.ny; ++j) meets_r1_axis |= bool(U.mask[L.index(0, j)]);
  for (int i = 0; i < L.nx; ++i) meets_r2_axis |= bool(U.mask[L.index(i, 0)]);
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (!U.mask[L.index(i, j)]) continue;
      if (meets_r1_axis)
        for (int a = 0; a < i; ++a)
          if (!U.mask[L.index(a, j)] && violation(a, j)) return false;
      if (meets_r2_axis)
        for (int b = 0; b < j; ++b)
          if (!U.mask[L.index(i, b)] && violation(i, b)) return false;
    }
  return true;
}

}  // namespace blab
