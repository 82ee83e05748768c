#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "blab/basis/factor.hpp"
#include "blab/basis/gram.hpp"
#include "blab/basis/quadrature.hpp"
#include "blab/basis/terms.hpp"
#include "blab/geom/topology.hpp"
#include "blab/kernel/closed_form.hpp"

namespace blab {

/// Polynomials orthonormal for a discrete measure, built by Arnoldi on the
/// multiplication operator (a stable change of basis for 1, t, ..., t^P
/// with t = (z - center)/scale). Members are evaluated anywhere in the
/// plane through the stored Hessenberg recurrence.
struct ArnoldiPoly
{
  Complex center;
  double scale = 1.0;
  int degree = 0;
  double q0 = 1.0;
  Eigen::MatrixXcd H;  ///< (degree+1) x degree

  int size() const { return degree + 1; }

  void eval(Complex z, Complex* out) const
  {
    const Complex t = (z - center) / scale;
    out[0] = q0;
    for (int k = 0; k < degree; ++k) {
      Complex v = t * out[k];
      for (int j = 0; j <= k; ++j) v -= H(j, k) * out[j];
      out[k + 1] = v / H(k + 1, k).real();
    }
  }
};

/// Builds the family on nodes z with square-root weights sw and returns the
/// weighted node values Q(k, j) = sw_k p_j(z_k). Classical Gram-Schmidt
/// with one full reorthogonalization pass.
inline ArnoldiPoly build_arnoldi(const std::vector<Complex>& z, const Eigen::VectorXd& sw, Complex center,
                                 double scale, int degree, Eigen::MatrixXcd& Q)
{
  const Eigen::Index n = Eigen::Index(z.size());
  Eigen::VectorXcd t(n);
  for (Eigen::Index k = 0; k < n; ++k) t(k) = (z[k] - center) / scale;
  const double tmax = n ? t.cwiseAbs().maxCoeff() : 0.0;
  ArnoldiPoly a;
  a.center = center;
  a.scale = scale;
  Q.resize(n, degree + 1);
  const double norm0 = sw.norm();
  if (!(norm0 > 0)) throw DomainError("empty quadrature measure");
  a.q0 = 1.0 / norm0;
  Q.col(0) = (sw * a.q0).cast<Complex>();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(degree + 1, degree);
  int deg = 0;
  for (int k = 0; k < degree; ++k) {
    Eigen::VectorXcd v = t.cwiseProduct(Q.col(k));
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd hc = Q.leftCols(k + 1).adjoint() * v;
      v.noalias() -= Q.leftCols(k + 1) * hc;
      H.col(k).head(k + 1) += hc;
    }
    const double beta = v.norm();
    if (!(beta > 1e-13 * std::max(tmax, 1.0))) break;  // measure exhausted
    H(k + 1, k) = beta;
    Q.col(k + 1) = v / beta;
    deg = k + 1;
  }
  a.degree = deg;
  a.H = H.topLeftCorner(deg + 1, deg);
  Q.conservativeResize(Eigen::NoChange, deg + 1);
  return a;
}

/// Kernel data for one connected component.
struct ComponentFit
{
  int label = -1;
  std::optional<ArnoldiPoly> poly;
  std::vector<PlanarTerm> extra;    ///< raw terms outside the polynomial block
  std::vector<PlanarTerm> dropped;  ///< inadmissible or numerically null terms
  GramMatrix gram;                  ///< Gram of the realized basis
  GramFactor factor;

  int size() const { return (poly ? poly->size() : 0) + int(extra.size()); }

  void values(Complex z, Complex* out) const
  {
    int off = 0;
    if (poly) {
      poly->eval(z, out);
      off = poly->size();
    }
    for (std::size_t i = 0; i < extra.size(); ++i) out[off + i] = extra[i].value(z);
  }
  Eigen::VectorXcd values(Complex z) const
  {
    Eigen::VectorXcd b(size());
    values(z, b.data());
    return b;
  }
  /// u = L^{-1} b(z); K(z, w) = sum_k u_k(z) conj(u_k(w)).
  Eigen::VectorXcd u(Complex z) const { return factor.forward(values(z)); }
  /// Coefficients a(w) with K(., w) = sum_i a_i(w) b_i(.).
  Eigen::VectorXcd coefficients(Complex w) const { return factor.backward_transpose(u(w).conjugate()); }
};

struct FitOptions
{
  unsigned threads = 1;
  double drop_ratio = 1e-14;
};

/// Finite-rank Bergman kernel of a planar grid domain. Each connected
/// component gets its own basis; points in different components have
/// kernel exactly 0.
class KernelModel
{
 public:
  const GridDomain& domain() const { return *domain_; }
  const Components& components() const { return comps_; }
  const std::vector<ComponentFit>& fits() const { return fits_; }
  const BasisSpec& basis() const { return basis_; }
  const ComponentFit& fit(int label) const { return fits_.at(std::size_t(label)); }

  /// Component label at z, -1 off the mask.
  int component_at(Complex z) const
  {
    auto c = domain_->lat.cell_of(to_point(z));
    if (!c) return -1;
    return comps_.label[domain_->lat.index(c->first, c->second)];
  }

  int require_component(Complex z) const
  {
    const int c = component_at(z);
    if (c < 0) throw DomainError("point outside the domain");
    return c;
  }

  KernelValue eval_bounded(Complex z, Complex w) const
  {
    // canonical order makes K(w, z) = conj(K(z, w)) bit for bit
    if (z.real() > w.real() || (z.real() == w.real() && z.imag() > w.imag())) {
      auto r = eval_bounded(w, z);
      r.value = std::conj(r.value);
      return r;
    }
    const int lz = require_component(z), lw = require_component(w);
    if (lz != lw) return {Complex(0), 0.0};
    const auto& f = fits_[std::size_t(lz)];
    const Eigen::VectorXcd uz = f.u(z), uw = f.u(w);
    Complex s = 0;
    double mag = 0;
    for (Eigen::Index k = 0; k < uz.size(); ++k) {
      s += mul_conj(uz(k), uw(k));
      mag += std::abs(uz(k)) * std::abs(uw(k));
    }
    const int n = f.size() + (f.poly ? f.poly->degree : 0);
    return {s, 4.0 * n * kEps * f.factor.condition_estimate * mag};
  }

  Complex eval(Complex z, Complex w) const { return eval_bounded(z, w).value; }

  /// K(zs[i], ws[j]) for all pairs.
  Eigen::MatrixXcd eval_matrix(const std::vector<Complex>& zs, const std::vector<Complex>& ws) const
  {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(Eigen::Index(zs.size()), Eigen::Index(ws.size()));
    std::vector<int> lz(zs.size()), lw(ws.size());
    for (std::size_t i = 0; i < zs.size(); ++i) lz[i] = require_component(zs[i]);
    for (std::size_t j = 0; j < ws.size(); ++j) lw[j] = require_component(ws[j]);
    for (const auto& f : fits_) {
      std::vector<Eigen::Index> iz, iw;
      for (std::size_t i = 0; i < zs.size(); ++i)
        if (lz[i] == f.label) iz.push_back(Eigen::Index(i));
      for (std::size_t j = 0; j < ws.size(); ++j)
        if (lw[j] == f.label) iw.push_back(Eigen::Index(j));
      if (iz.empty() || iw.empty()) continue;
      const Eigen::MatrixXcd Uz = u_block(f, zs, iz), Uw = u_block(f, ws, iw);
      const Eigen::MatrixXcd B = Uz.transpose() * Uw.conjugate();
      for (std::size_t a = 0; a < iz.size(); ++a)
        for (std::size_t b = 0; b < iw.size(); ++b) K(iz[a], iw[b]) = B(Eigen::Index(a), Eigen::Index(b));
    }
    return K;
  }

  std::size_t total_size() const
  {
    std::size_t n = 0;
    for (const auto& f : fits_) n += std::size_t(f.size());
    return n;
  }

 private:
  friend KernelModel fit_kernel(std::shared_ptr<const GridDomain>, const BasisSpec&, const FitOptions&);

  static Eigen::MatrixXcd u_block(const ComponentFit& f, const std::vector<Complex>& pts,
                                  const std::vector<Eigen::Index>& idx)
  {
    Eigen::MatrixXcd U(f.size(), Eigen::Index(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      f.values(pts[std::size_t(idx[a])], U.col(Eigen::Index(a)).data());
      U.col(Eigen::Index(a)) = U.col(Eigen::Index(a)).cwiseQuotient(f.factor.dsqrt.cast<Complex>());
    }
    f.factor.Lt.triangularView<Eigen::Lower>().solveInPlace(U);
    return U;
  }

  std::shared_ptr<const GridDomain> domain_;
  Components comps_;
  std::vector<ComponentFit> fits_;
  BasisSpec basis_;
};

namespace detail {

// Largest group of terms with exponents exactly 0..P about one centre and
// scale; returns the indices in exponent order.
inline std::vector<std::size_t> polynomial_block_indices(const BasisSpec& b)
{
  std::map<std::pair<std::pair<double, double>, double>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < b.terms.size(); ++i)
    if (b.terms[i].exponent >= 0)
      groups[{{b.terms[i].center.real(), b.terms[i].center.imag()}, b.terms[i].scale}].push_back(i);
  std::vector<std::size_t> best;
  for (auto& [key, idx] : groups) {
    std::vector<std::size_t> order(idx.size(), std::size_t(-1));
    bool ok = true;
    for (auto i : idx) {
      const int e = b.terms[i].exponent;
      if (e >= int(idx.size()) || order[std::size_t(e)] != std::size_t(-1)) {
        ok = false;
        break;
      }
      order[std::size_t(e)] = i;
    }
    if (ok && order.size() > best.size()) best = order;
  }
  return best;
}

}  // namespace detail

/// Fits the finite-rank kernel of `basis` on every component of U. A
/// contiguous polynomial block is realized through an orthonormal Arnoldi
/// family; negative powers are kept on a component only when their centre
/// lies in a hole of that component.
inline KernelModel fit_kernel(std::shared_ptr<const GridDomain> U, const BasisSpec& basis,
                              const FitOptions& opt = {})
{
  if (U->kind != DomainKind::planar) throw DomainError("fit_kernel needs a planar domain");
  if (basis.terms.empty()) throw DomainError("empty basis");
  for (const auto& t : basis.terms)
    if (!(t.scale > 0)) throw DomainError("basis scale must be positive");
  KernelModel m;
  m.domain_ = U;
  m.comps_ = components(*U);
  m.basis_ = basis;
  if (m.comps_.count == 0) throw DomainError("empty domain");
  const QuadNodes q = quadrature_nodes(*U, m.comps_);
  const auto block = detail::polynomial_block_indices(basis);
  std::vector<std::uint8_t> in_block(basis.size(), 0);
  for (auto i : block) in_block[i] = 1;

  for (int c = 0; c < m.comps_.count; ++c) {
    ComponentFit f;
    f.label = c;
    std::vector<Complex> zc;
    std::vector<double> wc;
    for (std::size_t k = 0; k < q.size(); ++k)
      if (q.label[k] == c) {
        zc.push_back(q.z[k]);
        wc.push_back(q.w[k]);
      }
    const auto holes = hole_cells(*U, m.comps_, c);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (in_block[i]) continue;
      const auto& t = basis.terms[i];
      bool ok = true;
      if (t.exponent < 0) {
        auto cell = U->lat.cell_of(to_point(t.center));
        ok = cell && holes[U->lat.index(cell->first, cell->second)];
      }
      (ok ? f.extra : f.dropped).push_back(t);
    }
    const Eigen::Index n = Eigen::Index(zc.size());
    Eigen::VectorXd sw(n);
    for (Eigen::Index k = 0; k < n; ++k) sw(k) = std::sqrt(wc[std::size_t(k)]);
    Eigen::MatrixXcd Q;
    if (!block.empty()) {
      const auto& t0 = basis.terms[block[0]];
      f.poly = build_arnoldi(zc, sw, t0.center, t0.scale, int(block.size()) - 1, Q);
      for (std::size_t e = std::size_t(f.poly->degree) + 1; e < block.size(); ++e) f.dropped.push_back(basis.terms[block[e]]);
    }
    const int np = f.poly ? f.poly->size() : 0;

    auto build_gram = [&]() {
      const int ne = int(f.extra.size()), N = np + ne;
      const std::size_t nch = (std::size_t(n) + kGramChunk - 1) / kGramChunk;
      std::vector<Eigen::MatrixXcd> parts(nch);
      for_each_chunk(nch, opt.threads, [&](std::size_t ch) {
        const Eigen::Index a = Eigen::Index(ch * kGramChunk), len = std::min<Eigen::Index>(n - a, kGramChunk);
        Eigen::MatrixXcd B(len, N);
        if (np) B.leftCols(np) = Q.middleRows(a, len);
        for (Eigen::Index r = 0; r < len; ++r)
          for (int e = 0; e < ne; ++e) B(r, np + e) = sw(a + r) * f.extra[std::size_t(e)].value(zc[std::size_t(a + r)]);
        parts[ch] = (B.adjoint() * B).transpose();
      });
      return parts.empty() ? Eigen::MatrixXcd::Zero(N, N).eval() : pairwise_sum(std::move(parts));
    };
    Eigen::MatrixXcd G = build_gram();

    // drop numerically null raw terms (the Arnoldi block is normalized)
    const double dmax = G.diagonal().real().maxCoeff();
    std::vector<PlanarTerm> kept;
    std::vector<Eigen::Index> keep_idx;
    for (Eigen::Index i = 0; i < np; ++i) keep_idx.push_back(i);
    for (std::size_t e = 0; e < f.extra.size(); ++e) {
      const Eigen::Index i = np + Eigen::Index(e);
      if (G(i, i).real() >= opt.drop_ratio * dmax) {
        kept.push_back(f.extra[e]);
        keep_idx.push_back(i);
      } else {
        f.dropped.push_back(f.extra[e]);
      }
    }
    if (kept.size() != f.extra.size()) {
      Eigen::MatrixXcd Gk(Eigen::Index(keep_idx.size()), Eigen::Index(keep_idx.size()));
      for (std::size_t a = 0; a < keep_idx.size(); ++a)
        for (std::size_t b = 0; b < keep_idx.size(); ++b) Gk(Eigen::Index(a), Eigen::Index(b)) = G(keep_idx[a], keep_idx[b]);
      G = std::move(Gk);
      f.extra = std::move(kept);
    }
    f.gram.values = std::move(G);
    f.factor = factorize(f.gram);
    m.fits_.push_back(std::move(f));
  }
  return m;
}

inline KernelModel fit_kernel(const GridDomain& U, const BasisSpec& basis, const FitOptions& opt = {})
{
  return fit_kernel(std::make_shared<const GridDomain>(U), basis, opt);
}

}  // namespace blab
