#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "blab/basis/quadrature.hpp"
#include "blab/basis/terms.hpp"
#include "blab/geom/topology.hpp"
#include "blab/parallel.hpp"

namespace blab {

inline constexpr std::size_t kGramChunk = 4096;

/// G_ij = sum_k w_k b_i(z_k) conj(b_j(z_k)) over the nodes whose label
/// passes `keep`. `fill(z, row)` writes the N basis values at z.
/// Chunks are fixed, so the result does not depend on `threads`.
template <class Fill, class Keep>
Eigen::MatrixXcd assemble_gram(const QuadNodes& q, int n, Fill&& fill, Keep&& keep, unsigned threads = 1)
{
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (keep(q.label[k])) idx.push_back(k);
  const std::size_t nch = (idx.size() + kGramChunk - 1) / kGramChunk;
  std::vector<Eigen::MatrixXcd> parts(nch);
  for_each_chunk(nch, threads, [&](std::size_t c) {
    const std::size_t a = c * kGramChunk, b = std::min(idx.size(), a + kGramChunk);
    Eigen::MatrixXcd B(b - a, n);
    std::vector<Complex> row(n);
    for (std::size_t r = a; r < b; ++r) {
      const std::size_t k = idx[r];
      fill(q.z[k], row.data());
      const double s = std::sqrt(q.w[k]);
      for (int i = 0; i < n; ++i) B(r - a, i) = s * row[i];
    }
    parts[c] = (B.adjoint() * B).transpose();
  });
  if (parts.empty()) return Eigen::MatrixXcd::Zero(n, n);
  return pairwise_sum(std::move(parts));
}

struct GramMatrix
{
  Eigen::MatrixXcd values;

  int size() const { return int(values.rows()); }
};

/// Gram matrix of the raw terms over the whole domain. Negative exponents
/// are only admissible about a centre lying in a hole of the domain.
inline GramMatrix gram_matrix(const BasisSpec& basis, const GridDomain& U, unsigned threads = 1)
{
  if (U.kind != DomainKind::planar) throw DomainError("planar basis on a non-planar domain");
  if (basis.terms.empty()) throw DomainError("empty basis");
  const Components comps = components(U);
  for (const auto& t : basis.terms) {
    if (!(t.scale > 0)) throw DomainError("basis scale must be positive");
    if (t.exponent < 0 && !in_hole(U, comps, -1, to_point(t.center)))
      throw DomainError("negative exponent about a centre that is not in a hole of the domain");
  }
  const QuadNodes q = quadrature_nodes(U, comps);
  const int n = int(basis.size());
  auto fill = [&](Complex z, Complex* out) {
    for (int i = 0; i < n; ++i) out[i] = basis.terms[i].value(z);
  };
  return {assemble_gram(q, n, fill, [](int) { return true; }, threads)};
}

/// Reinhardt monomials are orthogonal, so only the diagonal is stored.
struct ReinhardtGram
{
  Eigen::VectorXd diag;
};

inline ReinhardtGram gram_matrix(const ReinhardtBasis& basis, const GridDomain& U)
{
  if (U.kind != DomainKind::reinhardt) throw DomainError("Reinhardt basis on a planar domain");
  bool meets_r1_axis = false, meets_r2_axis = false;
  for (int j = 0; j < U.lat.ny; ++j) meets_r1_axis |= bool(U.cover[U.lat.index(0, j)]);
  for (int i = 0; i < U.lat.nx; ++i) meets_r2_axis |= bool(U.cover[U.lat.index(i, 0)]);
  for (const auto& t : basis.terms)
    if ((t.a < 0 && meets_r1_axis) || (t.b < 0 && meets_r2_axis))
      throw DomainError("negative exponent in a variable whose axis meets the domain");
  const QuadNodes q = quadrature_nodes(U);
  int amin = 0, amax = 0, bmin = 0, bmax = 0;
  for (const auto& t : basis.terms) {
    amin = std::min(amin, t.a);
    amax = std::max(amax, t.a);
    bmin = std::min(bmin, t.b);
    bmax = std::max(bmax, t.b);
  }
  // G_ab = sum_k w_k r1^{2a} r2^{2b} for every (a, b) in the box at once
  const Eigen::Index n = Eigen::Index(q.size());
  Eigen::MatrixXd P1(n, amax - amin + 1), P2(n, bmax - bmin + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r1 = q.z[k].real() / basis.s1, r2 = q.z[k].imag() / basis.s2;
    for (int a = amin; a <= amax; ++a) P1(k, a - amin) = q.w[k] * std::pow(r1, 2 * a);
    for (int b = bmin; b <= bmax; ++b) P2(k, b - bmin) = std::pow(r2, 2 * b);
  }
  const Eigen::MatrixXd box = P1.transpose() * P2;
  ReinhardtGram g;
  g.diag.resize(Eigen::Index(basis.size()));
  for (std::size_t t = 0; t < basis.size(); ++t)
    g.diag(Eigen::Index(t)) = box(basis.terms[t].a - amin, basis.terms[t].b - bmin);
  return g;
}

/// Text export: "gram v1 N" then N rows of N "re im" pairs.
inline void write_gram(std::ostream& os, const GramMatrix& g)
{
  const int n = g.size();
  os << "gram v1 " << n << '\n';
  char b[64];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(b, sizeof b, "%s%.17g %.17g", j ? " " : "", g.values(i, j).real(), g.values(i, j).imag());
      os << b;
    }
    os << '\n';
  }
}

inline GramMatrix read_gram(std::istream& is)
{
  std::string tag, ver;
  int n;
  if (!(is >> tag >> ver >> n) || tag != "gram" || ver != "v1" || n <= 0) throw ConfigError("bad gram header");
  GramMatrix g{Eigen::MatrixXcd(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re, im;
      if (!(is >> re >> im)) throw ConfigError("truncated gram");
      g.values(i, j) = {re, im};
    }
  return g;
}

}  // namespace blab
