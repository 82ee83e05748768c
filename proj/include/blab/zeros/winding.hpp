#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "blab/zeros/slice.hpp"

namespace blab {

struct WindingResult
{
  int winding = 0;
  double total_arg = 0.0;      ///< accumulated argument change / 2 pi
  double min_modulus = 0.0;
  double max_error = 0.0;
  std::size_t samples = 0;
};

/// n points on the circle |z - c| = r, counter-clockwise.
inline std::vector<Complex> circle_contour(Complex c, double r, int n = 64)
{
  std::vector<Complex> p;
  for (int k = 0; k < n; ++k) p.push_back(c + std::polar(r, 2 * std::numbers::pi * k / n));
  return p;
}

/// Argument-principle zero count of the slice inside a closed polygon.
/// The polygon is resampled to at least `min_samples` points and edges are
/// bisected until every argument step is below pi/2. Throws
/// FloorViolation if |f| <= 10 * error anywhere on the contour and
/// DomainError if the contour leaves the domain.
inline WindingResult winding(const Slice& s, const std::vector<Complex>& polygon, int min_samples = 64,
                             int max_depth = 40)
{
  if (polygon.size() < 3) throw DomainError("contour needs at least three vertices");
  std::vector<Complex> pts;
  const std::size_t nv = polygon.size();
  const int per_edge = std::max(1, int(std::ceil(double(min_samples) / double(nv))));
  for (std::size_t e = 0; e < nv; ++e) {
    const Complex a = polygon[e], b = polygon[(e + 1) % nv];
    for (int k = 0; k < per_edge; ++k) pts.push_back(a + (b - a) * (double(k) / per_edge));
  }
  WindingResult r;
  r.min_modulus = std::numeric_limits<double>::infinity();
  auto sample = [&](Complex z) {
    if (!s.admissible(z)) throw DomainError("contour leaves the domain");
    const KernelValue v = s.value(z);
    ++r.samples;
    const double m = std::abs(v.value);
    r.min_modulus = std::min(r.min_modulus, m);
    r.max_error = std::max(r.max_error, v.error);
    if (!(m > 10.0 * v.error)) throw FloorViolation("kernel modulus below the evaluation-error floor on the contour");
    return v.value;
  };
  std::vector<Complex> vals;
  for (auto z : pts) vals.push_back(sample(z));

  double total = 0.0;
  // recursive refinement of one edge
  std::function<void(Complex, Complex, Complex, Complex, int)> edge = [&](Complex za, Complex fa, Complex zb,
                                                                          Complex fb, int depth) {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < std::numbers::pi / 2) {
      total += d;
      return;
    }
    if (depth >= max_depth) throw FloorViolation("argument step unresolved on the contour");
    const Complex zm = 0.5 * (za + zb), fm = sample(zm);
    edge(za, fa, zm, fm, depth + 1);
    edge(zm, fm, zb, fb, depth + 1);
  };
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::size_t n = (k + 1) % pts.size();
    edge(pts[k], vals[k], pts[n], vals[n], 0);
  }
  r.total_arg = total / (2 * std::numbers::pi);
  r.winding = int(std::lround(r.total_arg));
  return r;
}

inline int winding_count(const Slice& s, const std::vector<Complex>& polygon, int min_samples = 64)
{
  return winding(s, polygon, min_samples).winding;
}

}  // namespace blab
