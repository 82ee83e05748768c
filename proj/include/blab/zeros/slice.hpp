#pragma once

#include <functional>
#include <vector>

#include "blab/kernel/closed_form.hpp"
#include "blab/kernel/model.hpp"
#include "blab/kernel/reinhardt.hpp"

namespace blab {

/// One-variable holomorphic slice z -> K(z, w0) with an evaluation error
/// bound and a domain test. `batch` is an optional fast path for scans.
struct Slice
{
  std::function<KernelValue(Complex)> value;
  std::function<bool(Complex)> admissible;
  std::function<std::vector<Complex>(const std::vector<Complex>&)> batch;
  Complex w0;
};

inline Slice model_slice(const KernelModel& m, Complex w0)
{
  m.require_component(w0);
  Slice s;
  s.w0 = w0;
  s.value = [&m, w0](Complex z) { return m.eval_bounded(z, w0); };
  s.admissible = [&m](Complex z) { return m.component_at(z) >= 0; };
  s.batch = [&m, w0](const std::vector<Complex>& zs) {
    const Eigen::MatrixXcd K = m.eval_matrix(zs, {w0});
    return std::vector<Complex>(K.data(), K.data() + K.size());
  };
  return s;
}

/// Planar closed-form kernel; admissibility also checks the series region.
inline Slice closed_form_slice(const ClosedFormKernel& k, Complex w0)
{
  if (k.dimension() != 1 || !k.admissible(w0)) throw DomainError("slice base point outside the domain");
  Slice s;
  s.w0 = w0;
  s.value = [k, w0](Complex z) { return k.eval_bounded(z, w0); };
  s.admissible = [k, w0](Complex z) {
    if (!k.admissible(z)) return false;
    if (k.kind() != ClosedFormKernel::Kind::annulus) return true;
    const double as = std::abs((z - k.center()) * std::conj(w0 - k.center()));
    return as > k.inner() * k.inner() && as < k.outer() * k.outer();
  };
  return s;
}

/// z1 -> K((z1, z2), (w1, w2)) of a Reinhardt model with z2 fixed.
inline Slice reinhardt_slice(const ReinhardtModel& m, Complex z2, const Point2& w)
{
  Slice s;
  s.w0 = w[0];
  s.value = [&m, z2, w](Complex z1) { return m.eval_bounded({z1, z2}, w); };
  s.admissible = [&m, z2](Complex z1) { return m.contains({z1, z2}); };
  return s;
}

}  // namespace blab
