#pragma once

#include <vector>

#include "blab/core.hpp"

namespace blab {

/// ((z - center) / scale)^exponent. The scale only normalizes magnitudes.
struct PlanarTerm
{
  Complex center;
  int exponent = 0;
  double scale = 1.0;

  Complex value(Complex z) const { return ipow((z - center) / scale, exponent); }
  bool operator==(const PlanarTerm&) const = default;
};

struct BasisSpec
{
  std::vector<PlanarTerm> terms;

  std::size_t size() const { return terms.size(); }
  void append(const BasisSpec& o) { terms.insert(terms.end(), o.terms.begin(), o.terms.end()); }
};

/// Exponents 0..degree about one centre.
inline BasisSpec polynomial_block(Complex center, int degree, double scale = 1.0)
{
  BasisSpec b;
  for (int n = 0; n <= degree; ++n) b.terms.push_back({center, n, scale});
  return b;
}

/// Exponents -nneg..npos about one centre (nneg > 0 needs the centre in a
/// hole of the domain).
inline BasisSpec laurent_block(Complex center, int nneg, int npos, double scale = 1.0)
{
  BasisSpec b;
  for (int n = 0; n <= npos; ++n) b.terms.push_back({center, n, scale});
  for (int m = 1; m <= nneg; ++m) b.terms.push_back({center, -m, scale});
  return b;
}

/// Monomial (z1/s1)^a (z2/s2)^b on a Reinhardt domain.
struct ReinhardtTerm
{
  int a = 0;
  int b = 0;
};

struct ReinhardtBasis
{
  std::vector<ReinhardtTerm> terms;
  double s1 = 1.0, s2 = 1.0;

  std::size_t size() const { return terms.size(); }
};

/// All (a, b) with a in [amin, amax], b in [bmin, bmax].
inline ReinhardtBasis reinhardt_box(int amin, int amax, int bmin, int bmax, double s1 = 1.0, double s2 = 1.0)
{
  ReinhardtBasis rb;
  rb.s1 = s1;
  rb.s2 = s2;
  for (int a = amin; a <= amax; ++a)
    for (int b = bmin; b <= bmax; ++b) rb.terms.push_back({a, b});
  return rb;
}

}  // namespace blab
