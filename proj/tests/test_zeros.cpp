#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "blab/geom.hpp"
#include "blab/kernel.hpp"
#include "blab/zeros.hpp"

using namespace blab;

namespace {

// Real series of the (0.5, 1) annulus kernel as a function of s.
long double annulus_real(long double s)
{
  const long double PI = std::numbers::pi_v<long double>, rho = 0.5L, R = 1.0L;
  long double sum = 1.0L / (2 * PI * std::log(R / rho) * s);
  for (int n = -3000; n <= 3000; ++n) {
    if (n == -1) continue;
    const long double t = (n + 1) / (PI * (std::pow(R, 2 * n + 2) - std::pow(rho, 2 * n + 2))) * std::pow(s, n);
    if (std::isfinite(t)) sum += t;
  }
  return sum;
}

long double bisect_zero(long double a, long double b)
{
  long double fa = annulus_real(a);
  for (int i = 0; i < 80; ++i) {
    const long double m = 0.5L * (a + b), fm = annulus_real(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5L * (a + b);
}

Slice function_slice(std::function<Complex(Complex)> f, double err = 1e-15)
{
  Slice s;
  s.value = [f, err](Complex z) { return KernelValue{f(z), err}; };
  s.admissible = [](Complex) { return true; };
  s.w0 = 0;
  return s;
}

KernelModel annulus_model(double h, int npos = 40, int nneg = 24)
{
  BasisSpec b = polynomial_block(0, npos);
  for (int m = 1; m <= nneg; ++m) b.terms.push_back({0, -m, 0.5});
  return fit_kernel(make_domain(Annulus{{0, 0}, 0.5, 1.0}, h), b);
}

}  // namespace

TEST(AnnulusZero, BisectionOracle)
{
  const long double s = bisect_zero(-0.9L, -0.5L);
  EXPECT_NEAR(double(s), -0.70710699, 5e-8);
  // inversion image rho^2 / s* is the other real zero
  EXPECT_NEAR(double(annulus_real(0.25L / s)), 0.0, 1e-9);
  const auto k = ClosedFormKernel::annulus(0, 0.5, 1.0);
  const Complex w0 = 0.8, z = double(s) / 0.8;
  EXPECT_LE(std::abs(k.eval(z, w0)), 1e-7);
}

TEST(Winding, SyntheticFunctions)
{
  const auto cubic = function_slice([](Complex z) { return z * z * z - 1.0; });
  EXPECT_EQ(winding_count(cubic, circle_contour(0, 2)), 3);
  EXPECT_EQ(winding_count(cubic, circle_contour(1, 0.5)), 1);
  EXPECT_EQ(winding_count(cubic, circle_contour(-1, 0.5)), 0);
  // square contour, clockwise orientation counts negatively
  EXPECT_EQ(winding_count(cubic, {Complex(-2, -2), Complex(-2, 2), Complex(2, 2), Complex(2, -2)}), -3);
  const auto pole_like = function_slice([](Complex z) { return 1.0 / (z * z); });
  EXPECT_EQ(winding_count(pole_like, circle_contour(0, 1)), -2);
}

TEST(Winding, FloorAndDomainViolations)
{
  const auto id = function_slice([](Complex z) { return z; }, 1e-12);
  // contour vertex within the error floor of the zero
  EXPECT_THROW(winding(id, circle_contour(1, 1)), FloorViolation);
  auto bounded = id;
  bounded.admissible = [](Complex z) { return std::abs(z) < 1; };
  EXPECT_THROW(winding(bounded, circle_contour(0.5, 0.6)), DomainError);
  EXPECT_THROW(winding(id, {0, 1}), DomainError);
}

TEST(Winding, ClosedFormAnnulusAndDisc)
{
  const auto ann = closed_form_slice(ClosedFormKernel::annulus(0, 0.5, 1.0), 0.8);
  const Complex zs = -0.70710699 / 0.8;
  const auto w = winding(ann, circle_contour(zs, 0.05));
  EXPECT_EQ(w.winding, 1);
  EXPECT_GT(w.min_modulus, 10 * w.max_error);
  const auto disc = closed_form_slice(ClosedFormKernel::disc(0, 1), 0.8);
  EXPECT_EQ(winding_count(disc, circle_contour(0, 0.9)), 0);
}

TEST(Scan, FittedAnnulusFindsTheZero)
{
  // the slice is flat (|K| ~ 1e-6) on the far side; at h = 0.01 the fit error
  // exceeds that and the model zero wanders by ~0.1, so use the finer lattice
  const KernelModel m = annulus_model(0.005, 50, 30);
  const ScanResult r = scan_min_modulus(m, 0.8);
  ASSERT_GE(r.candidates.size(), 3u);
  EXPECT_LT(r.candidates[0].modulus, 1e-2 * r.median);
  for (std::size_t i = 1; i < r.candidates.size(); ++i)
    EXPECT_LE(r.candidates[i - 1].modulus, r.candidates[i].modulus);
  const Complex zs(-0.70710699 / 0.8, 0);
  std::optional<ZeroCertificate> cert;
  for (std::size_t i = 0; i < 3 && !cert; ++i) cert = certify_zero(model_slice(m, 0.8), r.candidates[i].z, 0.03);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->winding, 1);
  EXPECT_LT(std::abs(cert->z_star - zs), cert->radius);
}

TEST(Scan, CrossComponentFlag)
{
  const GridDomain U = make_domain(make_union(Disc{{-2, 0}, 1.0}, Disc{{2, 0}, 1.0}), 0.02);
  const KernelModel m = fit_kernel(U, polynomial_block(0, 8, 3.0));
  ScanOptions o;
  o.component = m.component_at(Complex(2, 0));
  const ScanResult r = scan_min_modulus(m, Complex(-2, 0), o);
  EXPECT_TRUE(r.cross_component);
  EXPECT_TRUE(r.candidates.empty());
}

TEST(Verdict, DiscHasNoZero)
{
  const KernelModel m = fit_kernel(make_domain(Disc{{0, 0}, 1.0}, 0.01), polynomial_block(0, 24));
  const Verdict v = lu_qi_keng_verdict(m);
  EXPECT_FALSE(v.has_zero);
  EXPECT_GT(v.floor, 0.0);
  EXPECT_EQ(v.probes.size(), 9u);
}

TEST(Verdict, AnnulusHasAZero)
{
  VerdictOptions o;
  o.w0 = {0.8};
  o.auto_probes = false;
  const Verdict v = lu_qi_keng_verdict(annulus_model(0.01), o);
  ASSERT_TRUE(v.has_zero);
  EXPECT_EQ(v.certificate->winding, 1);
  EXPECT_NEAR(v.certificate->z_star.real(), -0.70710699 / 0.8, 0.03);
}

TEST(Verdict, SeededProbesAreReproducible)
{
  const KernelModel m = fit_kernel(make_domain(Rectangle{{0, 0}, {2, 1}}, 0.02), polynomial_block(Complex(1, 0.5), 10, 1.2));
  VerdictOptions o;
  const auto a = verdict_probes(m, o), b = verdict_probes(m, o);
  EXPECT_EQ(a, b);
  o.seed = 99;
  EXPECT_NE(a, verdict_probes(m, o));
  for (auto p : a) EXPECT_TRUE(m.domain().contains({p.real(), p.imag()}));
}

TEST(Hurwitz, WindingStableAlongRefinement)
{
  const KernelModel a = annulus_model(0.02), b = annulus_model(0.01);
  const auto contour = circle_contour(Complex(-0.70710699 / 0.8, 0), 0.05);
  const auto ref = ClosedFormKernel::annulus(0, 0.5, 1.0);
  const auto probes = compact_probes(b.domain(), 0.15, 10);
  const auto rows = hurwitz_track({&a, &b}, {0.02, 0.01}, 0.8, contour, ref, probes);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.winding.has_value());
    EXPECT_EQ(*r.winding, 1);
  }
  EXPECT_LT(rows[1].kernel_error, rows[0].kernel_error);
}
