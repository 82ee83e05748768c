#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "blab/geom.hpp"

using namespace blab;

namespace {

GridDomain random_domain(std::uint64_t seed, int nx, int ny, double fill, DomainKind kind = DomainKind::planar)
{
  std::mt19937_64 rng(seed);
  Lattice L;
  L.h = 0.1;
  L.nx = nx;
  L.ny = ny;
  std::vector<std::uint8_t> m(L.size());
  for (auto& v : m) v = (rng() % 1000) < fill * 1000;
  return from_mask(L, m, kind);
}

// Brute force: distance to every complement cell, with a ring of virtual
// complement cells around the array.
std::vector<double> brute_distance(const GridDomain& U)
{
  const Lattice& L = U.lat;
  std::vector<Point> comp;
  for (int j = -1; j <= L.ny; ++j)
    for (int i = -1; i <= L.nx; ++i)
      if (!U.in(i, j)) comp.push_back({L.h * i, L.h * j});
  std::vector<double> d(L.size(), 0.0);
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (!U.in(i, j)) continue;
      double best = 1e300;
      for (auto p : comp) best = std::min(best, std::hypot(p.x - L.h * i, p.y - L.h * j));
      d[L.index(i, j)] = best;
    }
  return d;
}

}  // namespace

TEST(DistanceField, MatchesBruteForceOnRandomMasks)
{
  for (std::uint64_t s = 1; s <= 6; ++s) {
    const GridDomain U = random_domain(s, 23 + int(s), 17, 0.8);
    const auto d = distance_field(U), b = brute_distance(U);
    for (std::size_t k = 0; k < d.size(); ++k) ASSERT_NEAR(d[k], b[k], 1e-12) << "seed " << s << " cell " << k;
  }
}

TEST(DistanceField, AllTrueMaskUsesArrayBorder)
{
  Lattice L;
  L.h = 1.0;
  L.nx = 5;
  L.ny = 3;
  const GridDomain U = from_mask(L, std::vector<std::uint8_t>(L.size(), 1));
  const auto d = distance_field(U);
  EXPECT_DOUBLE_EQ(d[L.index(2, 1)], 2.0);
  EXPECT_DOUBLE_EQ(d[L.index(0, 0)], 1.0);
}

TEST(DistanceField, DiscCenterIsNearRadius)
{
  const double h = 0.01;
  const GridDomain U = make_domain(Disc{{0, 0}, 1.0}, h);
  const auto d = distance_field(U);
  auto c = U.lat.cell_of({0.001, 0.001});
  ASSERT_TRUE(c);
  EXPECT_NEAR(d[U.lat.index(c->first, c->second)], 1.0, 2 * h);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!U.mask[k]) EXPECT_EQ(d[k], 0.0);
  }
}

TEST(DistanceField, ReinhardtProfileMirrorsAcrossAxes)
{
  // polydisc profile: distance in C^2 from (r1, r2) is min(1 - r1, 1 - r2)
  const double h = 0.02;
  const GridDomain P = make_domain(Rectangle{{0, 0}, {1, 1}}, h, DomainKind::reinhardt);
  const auto d = distance_field(P);
  for (int j = 0; j < P.lat.ny; j += 7)
    for (int i = 0; i < P.lat.nx; i += 5) {
      if (!P.mask[P.lat.index(i, j)]) continue;
      const double expect = std::min(1 - P.lat.cx(i), 1 - P.lat.cy(j)) + 0.5 * h;
      EXPECT_NEAR(d[P.lat.index(i, j)], expect, 1e-9);
    }
}

TEST(Hausdorff, PointSets)
{
  EXPECT_DOUBLE_EQ(hausdorff(std::vector<Point>{{0, 0}}, std::vector<Point>{{3, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(hausdorff(std::vector<Point>{{0, 0}, {1, 0}}, std::vector<Point>{{0, 0}}), 1.0);
  EXPECT_THROW(hausdorff(std::vector<Point>{}, std::vector<Point>{{0, 0}}), DomainError);
}

TEST(Hausdorff, LatticeRouteMatchesBruteForce)
{
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const GridDomain A = random_domain(s, 31, 19, 0.1), B = random_domain(100 + s, 31, 19, 0.05);
    const CellSet a{A.lat, A.mask}, b{B.lat, B.mask};
    EXPECT_NEAR(hausdorff(a, b), hausdorff(a.points(), b.points()), 1e-12);
  }
}

TEST(Hausdorff, ConcentricDiscClosures)
{
  const double h = 0.01;
  const auto a = extract_sets(make_domain(Disc{{0, 0}, 1.0}, h));
  const auto b = extract_sets(make_domain(Disc{{0, 0}, 1.1}, h));
  EXPECT_NEAR(hausdorff(a.closure, b.closure), 0.1, 2 * h);
  EXPECT_NEAR(hausdorff(a.boundary, b.boundary), 0.1, 2 * h);
}

TEST(Sets, BoundaryHasFalseNeighbour)
{
  const GridDomain U = make_domain(Annulus{{0, 0}, 0.5, 1.0}, 0.02);
  const auto s = extract_sets(U);
  for (int j = 0; j < U.lat.ny; ++j)
    for (int i = 0; i < U.lat.nx; ++i) {
      const bool inner = U.in(i, j) && U.in(i - 1, j) && U.in(i + 1, j) && U.in(i, j - 1) && U.in(i, j + 1);
      EXPECT_EQ(bool(s.boundary.in[U.lat.index(i, j)]), U.in(i, j) && !inner);
      EXPECT_EQ(bool(s.closure.in[U.lat.index(i, j)]), U.in(i, j));
    }
}

TEST(Metrics, Rho1Examples)
{
  const double h = 0.01;
  const GridDomain D1 = make_domain(Disc{{0, 0}, 1.0}, h);
  EXPECT_EQ(rho1(D1, D1), 0.0);
  EXPECT_NEAR(rho1(D1, make_domain(Disc{{0, 0}, 1.1}, h)), 0.2, 2 * h);
}

TEST(Metrics, Rho2ConcentricDiscs)
{
  const double h = 0.01;
  const auto t = rho2_terms(make_domain(Disc{{0, 0}, 1.0}, h), make_domain(Disc{{0, 0}, 2.0}, h));
  EXPECT_NEAR(t.volume_term, 3 * std::numbers::pi, 0.1);
  EXPECT_NEAR(t.sup_term, 1.0, 2 * h);
  EXPECT_NEAR(t.total(), 3 * std::numbers::pi + 1, 0.1);
}

TEST(Metrics, SlitDiscAndTailedSquare)
{
  const double h = 0.01;
  const GridDomain disc = make_domain(Disc{{0, 0}, 1.0}, h);
  const GridDomain slit = make_domain(make_difference(Disc{{0, 0}, 1.0}, Rectangle{{-1.5, 0}, {1.5, h}}), h);
  const auto a = extract_sets(disc), b = extract_sets(slit);
  EXPECT_LE(hausdorff(a.closure, b.closure), 2 * h);
  EXPECT_NEAR(hausdorff(a.boundary, b.boundary), 1.0, 2 * h);
  EXPECT_GE(rho1(disc, slit), 0.5);
  EXPECT_LE(rho2_terms(disc, slit).volume_term, 0.05);

  const double w = 0.05;
  const GridDomain sq = make_domain(Rectangle{{0, 0}, {1, 1}}, h);
  const GridDomain tail = make_domain(make_union(Rectangle{{0, 0}, {1, 1}}, Rectangle{{0.5, 0}, {2, w}}), h);
  EXPECT_LE(rho2(sq, tail), 3 * w);
  EXPECT_GE(rho1(sq, tail), 0.9);
}

TEST(Metrics, Rho2SupTermIgnoresPadding)
{
  const double h = 0.02;
  const GridDomain U = make_domain(Disc{{0, 0}, 1.0}, h), V = make_domain(Rectangle{{-0.8, -0.7}, {0.9, 0.6}}, h);
  const auto base = rho2_terms(U, V);
  for (int pad : {1, 5, 13}) {
    const auto t = rho2_terms(padded(U, pad), V);
    EXPECT_EQ(t.sup_term, base.sup_term);
    EXPECT_EQ(t.volume_term, base.volume_term);
  }
}

TEST(Metrics, MetricAxiomsOnAFamily)
{
  const double h = 0.04;
  std::vector<GridDomain> fam = {
      make_domain(Disc{{0, 0}, 1.0}, h),
      make_domain(Disc{{0.1, 0}, 0.8}, h),
      make_domain(Annulus{{0, 0}, 0.4, 1.0}, h),
      make_domain(Rectangle{{-0.5, -0.5}, {0.7, 0.9}}, h),
      make_domain(make_union(Disc{{0, 0}, 0.6}, Rectangle{{0, -0.1}, {1.4, 0.1}}), h),
  };
  for (std::size_t i = 0; i < fam.size(); ++i) {
    EXPECT_EQ(rho1(fam[i], fam[i]), 0.0);
    EXPECT_EQ(rho2(fam[i], fam[i]), 0.0);
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i != j) EXPECT_GT(rho1(fam[i], fam[j]), 0.0);
      EXPECT_NEAR(rho1(fam[i], fam[j]), rho1(fam[j], fam[i]), 1e-12);
      EXPECT_NEAR(rho2(fam[i], fam[j]), rho2(fam[j], fam[i]), 1e-12);
      for (std::size_t k = 0; k < fam.size(); ++k) {
        EXPECT_LE(rho1(fam[i], fam[k]), rho1(fam[i], fam[j]) + rho1(fam[j], fam[k]) + 1e-12);
        EXPECT_LE(rho2(fam[i], fam[k]), rho2(fam[i], fam[j]) + rho2(fam[j], fam[k]) + 1e-12);
      }
    }
  }
}

TEST(Metrics, VolumeOfShapes)
{
  const double h = 0.005;
  EXPECT_NEAR(volume(make_domain(Disc{{0.3, -0.2}, 1.0}, h)), std::numbers::pi, 0.01);
  EXPECT_NEAR(volume(make_domain(Rectangle{{0, 0}, {1, 2}}, h)), 2.0, 1e-9);
  // unit polydisc in C^2 has volume pi^2
  EXPECT_NEAR(volume(make_domain(Rectangle{{0, 0}, {1, 1}}, h, DomainKind::reinhardt)), std::numbers::pi * std::numbers::pi,
              1e-3);
}

TEST(Frames, MismatchedLatticesAreRejected)
{
  const GridDomain a = make_domain(Disc{{0, 0}, 1.0}, 0.01), b = make_domain(Disc{{0, 0}, 1.0}, 0.02);
  EXPECT_THROW(rho1(a, b), DomainError);
  EXPECT_THROW(rho2(a, b), DomainError);
  EXPECT_THROW(rho1(a, make_domain(Rectangle{{0, 0}, {1, 1}}, 0.01, DomainKind::reinhardt)), DomainError);
}

TEST(Shapes, InvalidInputsThrow)
{
  EXPECT_THROW(make_domain(Disc{{0, 0}, -1.0}, 0.01), DomainError);
  EXPECT_THROW(make_domain(Annulus{{0, 0}, 1.0, 0.5}, 0.01), DomainError);
  EXPECT_THROW(make_domain(Disc{{0, 0}, 1.0}, 0.0), DomainError);
  EXPECT_THROW(make_domain(Disc{{-2, 0}, 1.0}, 0.01, DomainKind::reinhardt), DomainError);
}

TEST(Coverage, PartialCellsFollowTheBoundary)
{
  const double h = 0.05;
  const GridDomain U = make_domain(Disc{{0, 0}, 1.0}, h);
  double area = 0;
  for (std::size_t k = 0; k < U.cover.size(); ++k) area += std::popcount(U.cover[k]) * h * h / 64;
  EXPECT_NEAR(area, std::numbers::pi, 2e-3);
  const GridDomain A = make_domain(Annulus{{0, 0}, 0.5, 1.0}, h);
  const GridDomain d = subtract(U, make_domain(Disc{{0, 0}, 0.5}, h));
  for (std::size_t k = 0; k < A.mask.size(); ++k) EXPECT_EQ(A.mask[k], d.mask[k]);
}

TEST(Topology, ComponentsAndHoles)
{
  const double h = 0.02;
  const GridDomain two = make_domain(make_union(Disc{{-2, 0}, 1.0}, Disc{{2, 0}, 0.5}), h);
  EXPECT_EQ(components(two).count, 2);
  const GridDomain A = make_domain(Annulus{{0.3, 0.1}, 0.5, 1.0}, h);
  const Components c = components(A);
  EXPECT_EQ(c.count, 1);
  EXPECT_TRUE(in_hole(A, c, 0, {0.3, 0.1}));
  EXPECT_FALSE(in_hole(A, c, 0, {1.5, 0.1}));
  EXPECT_FALSE(in_hole(two, components(two), -1, {0, 0}));
}

TEST(Exhaustion, MembersAreNestedAndApproach)
{
  const double h = 0.01;
  const GridDomain G = make_domain(Disc{{0, 0}, 1.0}, h);
  const auto seq = interior_exhaustion(G, {0.2, 0.1, 0.05, 0.025});
  ASSERT_EQ(seq.members.size(), 4u);
  double prev = 1e9;
  for (std::size_t k = 0; k < seq.members.size(); ++k) {
    const double r = rho2(seq.members[k], G);
    EXPECT_LT(r, prev);
    prev = r;
    for (std::size_t c = 0; c < G.mask.size(); ++c) {
      if (seq.members[k].mask[c]) EXPECT_TRUE(G.mask[c]);
      if (k && seq.members[k - 1].mask[c]) EXPECT_TRUE(seq.members[k].mask[c]);
    }
  }
  EXPECT_NEAR(rho1(seq.members[0], G), 0.4, 3 * h);
  EXPECT_THROW(interior_exhaustion(G, {h}), DomainError);
  EXPECT_THROW(interior_exhaustion(G, {1.5}), DomainError);
}

TEST(Barbell, ConstructionAndPreconditions)
{
  const double h = 0.02;
  const GridDomain G = make_domain(Disc{{-2, 0}, 1.0}, h), D = make_domain(Annulus{{2, 0}, 0.5, 1.0}, h);
  const auto bp = closest_boundary_pair(G, D);
  EXPECT_NEAR(bp.distance, 2.0, 3 * h);
  const auto seq = barbell_sequence(G, D, bp.on_g, bp.on_d, {0.4, 0.2, 0.1});
  const GridDomain target = seq.target;
  double prev = 1e9;
  for (std::size_t k = 0; k < seq.members.size(); ++k) {
    const GridDomain& m = seq.members[k];
    EXPECT_EQ(components(m).count, 1);
    const GridDomain t = embed(target, m.lat);
    for (int j = 0; j < m.lat.ny; ++j)
      for (int i = 0; i < m.lat.nx; ++i) {
        const std::size_t c = m.lat.index(i, j);
        if (t.mask[c]) EXPECT_TRUE(m.mask[c]);
        if (m.mask[c] && !t.mask[c])
          EXPECT_LT(segment_distance(m.lat.center(i, j), bp.on_g, bp.on_d), 0.5 * seq.params[k]);
      }
    const double r = rho2(m, target);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_THROW(barbell_sequence(G, D, bp.on_g, bp.on_d, {2 * h}), DomainError);
  EXPECT_THROW(barbell_sequence(G, D, {-2, 0}, bp.on_d, {0.2}), DomainError);
  const GridDomain overlap = make_domain(Disc{{-1.5, 0}, 1.0}, h);
  EXPECT_THROW(barbell_sequence(G, overlap, bp.on_g, bp.on_d, {0.2}), DomainError);
}

TEST(Reinhardt, LogConvexity)
{
  const double h = 0.01;
  auto rp = [&](Shape s) { return make_domain(s, h, DomainKind::reinhardt); };
  EXPECT_TRUE(is_logconvex_profile(rp(Rectangle{{0, 0}, {1, 1}})));
  EXPECT_TRUE(is_logconvex_profile(rp(Rectangle{{0.5, 0}, {1, 1}})));
  EXPECT_TRUE(is_logconvex_profile(rp(Disc{{0, 0}, 1.0})));  // unit ball
  EXPECT_FALSE(is_logconvex_profile(rp(make_union(Rectangle{{0, 0}, {1, 0.3}}, Rectangle{{0, 0}, {0.3, 1}}))));
  // a gap in the z1 direction next to the r1 = 0 axis breaks completeness
  EXPECT_FALSE(is_logconvex_profile(rp(make_union(Rectangle{{0, 0}, {0.2, 1}}, Rectangle{{0.5, 0}, {1, 1}}))));
  EXPECT_THROW(is_logconvex_profile(make_domain(Disc{{0, 0}, 1.0}, h)), DomainError);
}

TEST(GridIO, RoundTrip)
{
  const GridDomain U = make_domain(make_difference(Disc{{0.2, -0.1}, 1.0}, Disc{{0.2, 0}, 0.3}), 0.03);
  std::stringstream ss;
  write_grid(ss, U);
  const GridDomain V = read_grid(ss);
  EXPECT_EQ(V.mask, U.mask);
  EXPECT_EQ(V.cover, U.cover);
  EXPECT_EQ(V.lat.nx, U.lat.nx);
  EXPECT_EQ(V.lat.ny, U.lat.ny);
  EXPECT_NEAR(V.lat.origin_x(), U.lat.origin_x(), 1e-15);
  EXPECT_TRUE(V.lat.same_frame(U.lat));
  EXPECT_EQ(rho1(U, V), 0.0);

  std::stringstream bad("grid v2 0.1 0 0 2 2 planar\n");
  EXPECT_THROW(read_grid(bad), ConfigError);
  std::stringstream shortrow("grid v1 0.1 0 0 2 3 planar\n1 1\n0 3\nend\n");
  EXPECT_THROW(read_grid(shortrow), ConfigError);
}
