#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace blab {

using Complex = std::complex<double>;

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

inline Complex to_complex(Point p) { return {p.x, p.y}; }
inline Point to_point(Complex z) { return {z.real(), z.imag()}; }

/// Base of every error the library raises.
class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a documented precondition.
class DomainError : public Error
{
 public:
  using Error::Error;
};

/// Cholesky breakdown that survived the regularized retry.
class FactorizationError : public Error
{
 public:
  using Error::Error;
};

/// |f| dropped below the evaluation-error floor on a contour.
class FloorViolation : public Error
{
 public:
  using Error::Error;
};

/// Malformed configuration or input file.
class ConfigError : public Error
{
 public:
  using Error::Error;
};

/// Complex multiply a * conj(b) written out so both orders of a Hermitian
/// pair see the same roundings.
inline Complex mul_conj(Complex a, Complex b)
{
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  return {ar * br + ai * bi, ai * br - ar * bi};
}

/// Integer power by repeated squaring (exponent may be negative).
inline Complex ipow(Complex t, int n)
{
  if (n < 0) {
    t = 1.0 / t;
    n = -n;
  }
  Complex r(1.0, 0.0);
  while (n) {
    if (n & 1) r *= t;
    t *= t;
    n >>= 1;
  }
  return r;
}

}  // namespace blab
