#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "blab/core.hpp"

namespace blab {

/// Kernel value with an absolute error bound (truncation plus rounding).
struct KernelValue
{
  Complex value;
  double error = 0.0;
};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Disc of radius r: r^2 / (pi (r^2 - s)^2), s = (z-c) conj(w-c).
inline KernelValue disc_kernel(Complex s, double r)
{
  const Complex d = r * r - s;
  const Complex k = r * r / (std::numbers::pi * d * d);
  return {k, 8 * kEps * std::abs(k)};
}

namespace detail {

// sum_{n>=k} (n+1) x^n
inline double weighted_geometric_tail(double x, int k)
{
  return std::pow(x, k) * (k + 1 - k * x) / ((1 - x) * (1 - x));
}

}  // namespace detail

/// Annulus rho < |z-c| < R. Laurent series in s = (z-c) conj(w-c),
///   sum_n (n+1) s^n / (pi (R^{2n+2} - rho^{2n+2})),   n != -1,
/// plus 1/(2 pi log(R/rho) s). Converges for rho^2 < |s| < R^2; the order
/// grows until the tail bound drops below `tol`.
inline KernelValue annulus_kernel(Complex s, double rho, double R, double tol = 1e-10, int max_order = 200000)
{
  const double R2 = R * R, r2 = rho * rho, as = std::abs(s);
  if (!(as > r2 && as < R2)) throw DomainError("annulus kernel outside its convergence region rho^2 < |s| < R^2");
  const double t2 = r2 / R2;
  const Complex q = s / R2, p = r2 / s;
  const double aq = std::abs(q), ap = std::abs(p);
  const double cpos = 1.0 / (std::numbers::pi * R2 * (1 - t2));
  const double cneg = 1.0 / (std::numbers::pi * r2 * (1 - t2));

  Complex sum = 1.0 / (2 * std::numbers::pi * std::log(R / rho) * s);
  double mag = std::abs(sum);
  Complex qn(1.0, 0.0), pm = p;  // q^n, p^m
  double t2n = t2;               // t^{2n+2}
  double t2m = 1.0;              // t^{2m-2}
  double tail = std::numeric_limits<double>::infinity();
  int n = 0;
  for (; n <= max_order; ++n) {
    const Complex a = double(n + 1) / (std::numbers::pi * R2 * (1 - t2n)) * qn;
    sum += a;
    mag += std::abs(a);
    if (n >= 2) {
      const Complex b = double(n - 1) / (std::numbers::pi * r2 * (1 - t2m)) * pm;
      sum += b;
      mag += std::abs(b);
    }
    qn *= q;
    t2n *= t2;
    if (n >= 1) {
      pm *= p;
      t2m *= t2;
    }
    tail = cpos * detail::weighted_geometric_tail(aq, n + 1) + cneg * detail::weighted_geometric_tail(ap, n + 1);
    if (n >= 2 && tail < tol) break;
  }
  return {sum, tail + 4 * (n + 4) * kEps * mag};
}

/// Unit ball in C^n: n! / (pi^n (1 - <z,w>)^{n+1}).
inline KernelValue ball_kernel(std::span<const Complex> z, std::span<const Complex> w)
{
  const int n = int(z.size());
  Complex ip = 0;
  double nz = 0, nw = 0;
  for (int i = 0; i < n; ++i) {
    ip += z[i] * std::conj(w[i]);
    nz += std::norm(z[i]);
    nw += std::norm(w[i]);
  }
  if (!(nz < 1 && nw < 1)) throw DomainError("point outside the unit ball");
  double c = 1;
  for (int i = 2; i <= n; ++i) c *= i;
  c /= std::pow(std::numbers::pi, n);
  const Complex k = c / std::pow(1.0 - ip, n + 1);
  return {k, 4 * (n + 4) * kEps * std::abs(k)};
}

/// Closed-form reproducing kernels of model domains.
class ClosedFormKernel
{
 public:
  enum class Kind { disc, annulus, ball, product };

  static ClosedFormKernel disc(Complex center, double r)
  {
    if (!(r > 0)) throw DomainError("disc radius must be positive");
    ClosedFormKernel k(Kind::disc, 1);
    k.center_ = center;
    k.a_ = r;
    return k;
  }
  static ClosedFormKernel annulus(Complex center, double rho, double R)
  {
    if (!(rho > 0 && R > rho)) throw DomainError("annulus needs 0 < rho < R");
    ClosedFormKernel k(Kind::annulus, 1);
    k.center_ = center;
    k.a_ = rho;
    k.b_ = R;
    return k;
  }
  static ClosedFormKernel ball(int n)
  {
    if (n < 1) throw DomainError("ball dimension must be positive");
    return ClosedFormKernel(Kind::ball, n);
  }
  static ClosedFormKernel product(std::vector<ClosedFormKernel> factors)
  {
    if (factors.empty()) throw DomainError("empty product");
    int d = 0;
    for (const auto& f : factors) d += f.dimension();
    ClosedFormKernel k(Kind::product, d);
    k.factors_ = std::move(factors);
    return k;
  }
  static ClosedFormKernel polydisc(const std::vector<double>& radii, std::vector<Complex> centers = {})
  {
    centers.resize(radii.size(), Complex(0));
    std::vector<ClosedFormKernel> f;
    for (std::size_t i = 0; i < radii.size(); ++i) f.push_back(disc(centers[i], radii[i]));
    return product(std::move(f));
  }

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  Complex center() const { return center_; }
  double inner() const { return a_; }
  double outer() const { return kind_ == Kind::annulus ? b_ : a_; }

  /// Whether z (a point of C^1) lies in the domain.
  bool admissible(Complex z) const
  {
    const double r = std::abs(z - center_);
    if (kind_ == Kind::disc) return r < a_;
    if (kind_ == Kind::annulus) return r > a_ && r < b_;
    return false;
  }

  KernelValue eval_bounded(std::span<const Complex> z, std::span<const Complex> w) const
  {
    if (int(z.size()) != dim_ || int(w.size()) != dim_) throw DomainError("point dimension mismatch");
    switch (kind_) {
      case Kind::disc:
      case Kind::annulus: {
        if (!admissible(z[0]) || !admissible(w[0])) throw DomainError("point outside the domain");
        const Complex s = (z[0] - center_) * std::conj(w[0] - center_);
        return kind_ == Kind::disc ? disc_kernel(s, a_) : annulus_kernel(s, a_, b_);
      }
      case Kind::ball:
        return ball_kernel(z, w);
      case Kind::product: {
        KernelValue acc{1.0, 0.0};
        std::size_t off = 0;
        for (const auto& f : factors_) {
          const std::size_t d = std::size_t(f.dimension());
          const auto v = f.eval_bounded(z.subspan(off, d), w.subspan(off, d));
          acc.error = std::abs(acc.value) * v.error + std::abs(v.value) * acc.error + acc.error * v.error;
          acc.value *= v.value;
          off += d;
        }
        return acc;
      }
    }
    throw Error("unreachable");
  }

  KernelValue eval_bounded(Complex z, Complex w) const
  {
    return eval_bounded(std::span<const Complex>(&z, 1), std::span<const Complex>(&w, 1));
  }
  Complex eval(Complex z, Complex w) const { return eval_bounded(z, w).value; }

  Eigen::MatrixXcd eval_matrix(const std::vector<Complex>& zs, const std::vector<Complex>& ws) const
  {
    Eigen::MatrixXcd K(Eigen::Index(zs.size()), Eigen::Index(ws.size()));
    for (std::size_t j = 0; j < ws.size(); ++j)
      for (std::size_t i = 0; i < zs.size(); ++i) K(Eigen::Index(i), Eigen::Index(j)) = eval(zs[i], ws[j]);
    return K;
  }

  const std::vector<ClosedFormKernel>& factors() const { return factors_; }

 private:
  ClosedFormKernel(Kind k, int d) : kind_(k), dim_(d) {}

  Kind kind_;
  int dim_;
  Complex center_ = 0;
  double a_ = 0, b_ = 0;
  std::vector<ClosedFormKernel> factors_;
};

}  // namespace blab
