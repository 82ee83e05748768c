#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "blab/geom/distance.hpp"
#include "blab/kernel/model.hpp"

namespace blab {

/// Cell centres of U with d_U > margin, every `stride`-th cell along each
/// axis of the array.
inline std::vector<Complex> compact_probes(const GridDomain& U, double margin, int stride = 4)
{
  const auto d = distance_field(U);
  std::vector<Complex> p;
  for (int j = 0; j < U.lat.ny; j += stride)
    for (int i = 0; i < U.lat.nx; i += stride)
      if (d[U.lat.index(i, j)] > margin) p.push_back(to_complex(U.lat.center(i, j)));
  return p;
}

/// max |A(z, w) - B(z, w)| over all probe pairs. A and B are anything
/// with eval_matrix(zs, ws).
template <class KA, class KB>
double kernel_error(const KA& a, const KB& b, const std::vector<Complex>& probes, std::size_t block = 256)
{
  if (probes.empty()) throw DomainError("empty probe set");
  double m = 0.0;
  for (std::size_t j0 = 0; j0 < probes.size(); j0 += block) {
    const std::vector<Complex> ws(probes.begin() + std::ptrdiff_t(j0),
                                  probes.begin() + std::ptrdiff_t(std::min(probes.size(), j0 + block)));
    m = std::max(m, (a.eval_matrix(probes, ws) - b.eval_matrix(probes, ws)).cwiseAbs().maxCoeff());
  }
  return m;
}

template <class KA, class KB>
double kernel_error(const KA& a, const KB& b, const GridDomain& U, double margin, int stride = 4)
{
  return kernel_error(a, b, compact_probes(U, margin, stride));
}

/// Minimal-norm element with f(z) = K(z, z) (maximizing |f(z)|^2/||f||^2),
/// expressed in the realized basis of z's component.
struct Extremal
{
  Complex value;               ///< K(z, z)
  Eigen::VectorXcd coefficients;
  double norm2 = 0.0;          ///< ||f||^2 from the assembled Gram
  Complex f_at_z;              ///< f(z) from the coefficients
};

inline Extremal extremal_value(const KernelModel& m, Complex z, double tol = 1e-8)
{
  const auto& f = m.fit(m.require_component(z));
  Extremal e;
  e.value = m.eval(z, z);
  e.coefficients = f.coefficients(z);
  e.f_at_z = f.values(z).transpose() * e.coefficients;
  // ||f||^2 = sum_ij c_i conj(c_j) G_ij
  e.norm2 = (e.coefficients.transpose() * f.gram.values * e.coefficients.conjugate()).value().real();
  if (std::abs(e.f_at_z - e.norm2) > tol * std::max(1.0, e.norm2))
    throw Error("extremal function is inconsistent with the assembled gram");
  return e;
}

/// |b(z) - int K(z, w) b(w) dV(w)| / |b(z)| for one raw term of the model's
/// basis, integrated over the model's own nodes or over another domain's.
inline double reproducing_residual(const KernelModel& m, const PlanarTerm& term, Complex z,
                                   const GridDomain* quadrature = nullptr)
{
  const int c = m.require_component(z);
  const auto& f = m.fit(c);
  const GridDomain& Q = quadrature ? *quadrature : m.domain();
  const Components qc = components(Q);
  const QuadNodes q = quadrature_nodes(Q, qc);
  auto cell = Q.lat.cell_of(to_point(z));
  if (!cell || qc.label[Q.lat.index(cell->first, cell->second)] < 0)
    throw DomainError("point outside the quadrature domain");
  const int cq = qc.label[Q.lat.index(cell->first, cell->second)];
  // int K(z, w) b(w) dV = sum_j u_j(z) int conj(u_j(w)) b(w) dV
  const Eigen::VectorXcd uz = f.u(z);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(uz.size());
  for (std::size_t k = 0; k < q.size(); ++k)
    if (q.label[k] == cq) acc += q.w[k] * f.u(q.z[k]).conjugate() * term.value(q.z[k]);
  const Complex rep = uz.transpose() * acc;
  const Complex b = term.value(z);
  return std::abs(b - rep) / std::max(std::abs(b), 1e-300);
}

}  // namespace blab
