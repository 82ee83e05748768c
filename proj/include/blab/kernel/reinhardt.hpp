#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "blab/basis/gram.hpp"
#include "blab/kernel/closed_form.hpp"

namespace blab {

using Point2 = std::array<Complex, 2>;

/// Diagonal-Gram kernel of a Reinhardt domain in C^2,
///   K(z, w) = sum_{(a,b)} (z1 conj w1 / s1^2)^a (z2 conj w2 / s2^2)^b / G_ab.
class ReinhardtModel
{
 public:
  const ReinhardtBasis& basis() const { return basis_; }
  const Eigen::VectorXd& gram_diagonal() const { return diag_; }
  const std::vector<ReinhardtTerm>& dropped() const { return dropped_; }
  const GridDomain& domain() const { return *domain_; }

  /// Whether (|z1|, |z2|) falls on a profile cell.
  bool contains(const Point2& z) const { return domain_->contains({std::abs(z[0]), std::abs(z[1])}); }

  KernelValue eval_bounded(const Point2& z, const Point2& w) const
  {
    if (!contains(z) || !contains(w)) throw DomainError("point outside the Reinhardt domain");
    const Complex s1 = z[0] * std::conj(w[0]) / (basis_.s1 * basis_.s1);
    const Complex s2 = z[1] * std::conj(w[1]) / (basis_.s2 * basis_.s2);
    Complex sum = 0;
    double mag = 0;
    for (Eigen::Index t = 0; t < diag_.size(); ++t) {
      const auto& m = basis_.terms[std::size_t(t)];
      const Complex v = ipow(s1, m.a) * ipow(s2, m.b) / diag_(t);
      sum += v;
      mag += std::abs(v);
    }
    return {sum, 8.0 * double(diag_.size()) * kEps * mag};
  }
  Complex eval(const Point2& z, const Point2& w) const { return eval_bounded(z, w).value; }

 private:
  friend ReinhardtModel fit_reinhardt(std::shared_ptr<const GridDomain>, const ReinhardtBasis&, double);

  std::shared_ptr<const GridDomain> domain_;
  ReinhardtBasis basis_;
  Eigen::VectorXd diag_;
  std::vector<ReinhardtTerm> dropped_;
};

/// Terms whose Gram entry is below drop_ratio * max are dropped.
inline ReinhardtModel fit_reinhardt(std::shared_ptr<const GridDomain> U, const ReinhardtBasis& basis,
                                    double drop_ratio = 1e-300)
{
  if (basis.terms.empty()) throw DomainError("empty basis");
  const ReinhardtGram g = gram_matrix(basis, *U);
  ReinhardtModel m;
  m.domain_ = U;
  m.basis_.s1 = basis.s1;
  m.basis_.s2 = basis.s2;
  const double dmax = g.diag.maxCoeff();
  std::vector<double> kept;
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const double d = g.diag(Eigen::Index(t));
    if (d > drop_ratio * dmax && std::isfinite(d)) {
      m.basis_.terms.push_back(basis.terms[t]);
      kept.push_back(d);
    } else {
      m.dropped_.push_back(basis.terms[t]);
    }
  }
  m.diag_ = Eigen::Map<Eigen::VectorXd>(kept.data(), Eigen::Index(kept.size()));
  return m;
}

inline ReinhardtModel fit_reinhardt(const GridDomain& U, const ReinhardtBasis& basis, double drop_ratio = 1e-300)
{
  return fit_reinhardt(std::make_shared<const GridDomain>(U), basis, drop_ratio);
}

}  // namespace blab
