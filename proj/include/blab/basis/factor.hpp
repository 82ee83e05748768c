#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "blab/basis/gram.hpp"

namespace blab {

/// Cholesky factor of a Jacobi-scaled Gram matrix,
///   G = D^{1/2} Lt Lt^H D^{1/2},  D = diag(G).
struct GramFactor
{
  Eigen::MatrixXcd Lt;
  Eigen::VectorXd dsqrt;
  double regularization = 0.0;  ///< added to the scaled diagonal, 0 unless the retry was needed
  double condition_estimate = 1.0;

  int size() const { return int(Lt.rows()); }

  /// Lower-triangular L with G = L L^H.
  Eigen::MatrixXcd lower() const { return dsqrt.asDiagonal() * Lt; }

  /// u = L^{-1} b.
  Eigen::VectorXcd forward(const Eigen::VectorXcd& b) const
  {
    Eigen::VectorXcd y = b.cwiseQuotient(dsqrt.cast<Complex>());
    Lt.triangularView<Eigen::Lower>().solveInPlace(y);
    return y;
  }

  /// x = L^{-T} y.
  Eigen::VectorXcd backward_transpose(const Eigen::VectorXcd& y) const
  {
    Eigen::VectorXcd x = y;
    Lt.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x.cwiseQuotient(dsqrt.cast<Complex>());
  }

  /// Solve G x = rhs.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const
  {
    Eigen::VectorXcd y = forward(rhs);
    Lt.adjoint().triangularView<Eigen::Upper>().solveInPlace(y);
    return y.cwiseQuotient(dsqrt.cast<Complex>());
  }
};

namespace detail {

inline bool clean_factor(const Eigen::LLT<Eigen::MatrixXcd>& llt)
{
  if (llt.info() != Eigen::Success) return false;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    const double d = L(i, i).real();
    if (!(d > 0) || !std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace detail

/// Hermitian positive-definite factorization with one regularized retry
/// (+1e-12 trace/N on the scaled diagonal). Throws FactorizationError.
inline GramFactor factorize(const Eigen::MatrixXcd& G)
{
  const Eigen::Index n = G.rows();
  if (n == 0 || G.cols() != n) throw FactorizationError("gram matrix must be square and non-empty");
  GramFactor f;
  f.dsqrt.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = G(i, i).real();
    if (!(d > 0) || !std::isfinite(d)) throw FactorizationError("non-positive gram diagonal");
    f.dsqrt(i) = std::sqrt(d);
  }
  Eigen::VectorXd inv = f.dsqrt.cwiseInverse();
  Eigen::MatrixXcd S = inv.asDiagonal() * G * inv.asDiagonal();
  S = (0.5 * (S + S.adjoint())).eval();
  Eigen::LLT<Eigen::MatrixXcd> llt(S);
  if (!detail::clean_factor(llt)) {
    f.regularization = 1e-12 * S.diagonal().real().sum() / double(n);
    S.diagonal().array() += f.regularization;
    llt.compute(S);
    if (!detail::clean_factor(llt)) throw FactorizationError("gram matrix is not positive definite");
  }
  f.Lt = llt.matrixL();
  const Eigen::VectorXd d = f.Lt.diagonal().real();
  const double r = d.maxCoeff() / d.minCoeff();
  f.condition_estimate = r * r;
  return f;
}

inline GramFactor factorize(const GramMatrix& G) { return factorize(G.values); }

}  // namespace blab
