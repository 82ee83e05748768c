#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "blab/geom/distance.hpp"
#include "blab/kernel/diagnostics.hpp"
#include "blab/zeros/winding.hpp"

namespace blab {

/// Certified zero of z -> K(z, w0): the contour, its winding number and
/// the smallest modulus met on it.
struct ZeroCertificate
{
  Complex w0;
  Complex z_star;   ///< scan minimizer inside the contour
  double radius = 0.0;
  std::vector<Complex> contour;
  int winding = 0;
  double min_modulus = 0.0;
  double eval_error = 0.0;
};

struct ScanCandidate
{
  Complex z;
  double modulus = 0.0;
};

struct ScanOptions
{
  int stride = 2;
  double margin_cells = 4.0;   ///< only cells with d_U >= margin_cells * h
  std::optional<Box> window;   ///< restrict to cells inside this box
  int component = -1;          ///< restrict to one component label (-1: any)
  std::size_t max_candidates = 16;
};

struct ScanResult
{
  std::vector<ScanCandidate> candidates;  ///< local minima below the median, ascending
  double min_modulus = 0.0;
  double median = 0.0;
  std::size_t scanned = 0;
  bool cross_component = false;           ///< every value was an exact cross-component 0
};

/// Scans |K(., w0)| on a sub-lattice of U and returns its local minima.
inline ScanResult scan_min_modulus(const Slice& s, const GridDomain& U, const std::vector<int>& labels,
                                   const ScanOptions& opt = {})
{
  const Lattice& L = U.lat;
  const auto d = distance_field(U);
  const double h = L.h;
  const int st = std::max(1, opt.stride);
  const int sx = (L.nx + st - 1) / st, sy = (L.ny + st - 1) / st;
  std::vector<std::ptrdiff_t> slot(std::size_t(sx) * sy, -1);
  std::vector<Complex> pts;
  for (int b = 0; b < sy; ++b)
    for (int a = 0; a < sx; ++a) {
      const int i = a * st, j = b * st;
      const std::size_t k = L.index(i, j);
      if (!U.mask[k] || d[k] < opt.margin_cells * h - 1e-12) continue;
      if (opt.component >= 0 && labels[k] != opt.component) continue;
      const Point c = L.center(i, j);
      if (opt.window && (c.x < opt.window->xmin || c.x > opt.window->xmax || c.y < opt.window->ymin ||
                         c.y > opt.window->ymax))
        continue;
      slot[std::size_t(b) * sx + a] = std::ptrdiff_t(pts.size());
      pts.push_back(to_complex(c));
    }
  ScanResult r;
  r.scanned = pts.size();
  if (pts.empty()) return r;
  std::vector<double> mod(pts.size());
  if (s.batch) {
    const std::size_t blk = 4096;
    for (std::size_t a = 0; a < pts.size(); a += blk) {
      const std::vector<Complex> part(pts.begin() + std::ptrdiff_t(a),
                                      pts.begin() + std::ptrdiff_t(std::min(pts.size(), a + blk)));
      const auto v = s.batch(part);
      for (std::size_t k = 0; k < v.size(); ++k) mod[a + k] = std::abs(v[k]);
    }
  } else {
    for (std::size_t k = 0; k < pts.size(); ++k) mod[k] = std::abs(s.value(pts[k]).value);
  }
  std::vector<double> sorted = mod;
  std::nth_element(sorted.begin(), sorted.begin() + std::ptrdiff_t(sorted.size() / 2), sorted.end());
  r.median = sorted[sorted.size() / 2];
  r.min_modulus = *std::min_element(mod.begin(), mod.end());
  r.cross_component = *std::max_element(mod.begin(), mod.end()) == 0.0;
  if (r.cross_component) return r;
  for (int b = 0; b < sy; ++b)
    for (int a = 0; a < sx; ++a) {
      const auto k = slot[std::size_t(b) * sx + a];
      if (k < 0 || !(mod[std::size_t(k)] < r.median)) continue;
      bool is_min = true;
      for (int db = -1; db <= 1 && is_min; ++db)
        for (int da = -1; da <= 1; ++da) {
          if (!da && !db) continue;
          const int x = a + da, y = b + db;
          if (x < 0 || y < 0 || x >= sx || y >= sy) continue;
          const auto n = slot[std::size_t(y) * sx + x];
          if (n < 0) continue;
          // ties go to the lower index
          if (mod[std::size_t(n)] < mod[std::size_t(k)] || (mod[std::size_t(n)] == mod[std::size_t(k)] && n < k)) {
            is_min = false;
            break;
          }
        }
      if (is_min) r.candidates.push_back({pts[std::size_t(k)], mod[std::size_t(k)]});
    }
  std::sort(r.candidates.begin(), r.candidates.end(),
            [](const ScanCandidate& x, const ScanCandidate& y) { return x.modulus < y.modulus; });
  if (r.candidates.size() > opt.max_candidates) r.candidates.resize(opt.max_candidates);
  return r;
}

/// Scan of a model slice over the component of w0 (or the one in opt).
inline ScanResult scan_min_modulus(const KernelModel& m, Complex w0, ScanOptions opt = {})
{
  const Slice s = model_slice(m, w0);
  if (opt.component < 0) opt.component = m.require_component(w0);
  return scan_min_modulus(s, m.domain(), m.components().label, opt);
}

/// Tries circles of radius r0, 2 r0, 4 r0, 8 r0 about zc and returns the
/// first with positive winding number.
inline std::optional<ZeroCertificate> certify_zero(const Slice& s, Complex zc, double r0, int growths = 3,
                                                   int min_samples = 64)
{
  double r = r0;
  for (int g = 0; g <= growths; ++g, r *= 2) {
    const auto contour = circle_contour(zc, r, min_samples);
    try {
      const WindingResult w = winding(s, contour, min_samples);
      if (w.winding > 0) return ZeroCertificate{s.w0, zc, r, contour, w.winding, w.min_modulus, w.max_error};
    } catch (const FloorViolation&) {
    } catch (const DomainError&) {
    }
  }
  return std::nullopt;
}

struct VerdictOptions
{
  std::uint64_t seed = 12345;
  int random_probes = 8;            ///< per component, besides the centroid probe
  std::vector<Complex> w0;          ///< explicit probes tried first
  bool auto_probes = true;          ///< add centroid and random probes per component
  ScanOptions scan;
  std::size_t candidates_per_probe = 3;
  double inradius_fraction = 0.25;  ///< probes need d >= fraction * inradius
};

struct Verdict
{
  bool has_zero = false;
  std::optional<ZeroCertificate> certificate;
  double floor = 0.0;       ///< smallest |K| met by the scans when no zero was found
  double resolution = 0.0;  ///< scan spacing
  std::vector<Complex> probes;
};

/// Default probes: the component centroid projected onto the cells with
/// d >= fraction * inradius, then random cells from that margin.
inline std::vector<Complex> verdict_probes(const KernelModel& m, const VerdictOptions& opt)
{
  const GridDomain& U = m.domain();
  const auto d = distance_field(U);
  std::vector<Complex> out;
  std::mt19937_64 rng(opt.seed);
  for (int c = 0; c < m.components().count; ++c) {
    double inr = 0, cx = 0, cy = 0;
    std::size_t n = 0;
    for (int j = 0; j < U.lat.ny; ++j)
      for (int i = 0; i < U.lat.nx; ++i) {
        const std::size_t k = U.lat.index(i, j);
        if (m.components().label[k] != c) continue;
        inr = std::max(inr, d[k]);
        cx += U.lat.cx(i);
        cy += U.lat.cy(j);
        ++n;
      }
    cx /= double(n);
    cy /= double(n);
    std::vector<Complex> eligible;
    for (int j = 0; j < U.lat.ny; ++j)
      for (int i = 0; i < U.lat.nx; ++i) {
        const std::size_t k = U.lat.index(i, j);
        if (m.components().label[k] == c && d[k] >= opt.inradius_fraction * inr)
          eligible.push_back(to_complex(U.lat.center(i, j)));
      }
    if (eligible.empty()) continue;
    auto nearest = *std::min_element(eligible.begin(), eligible.end(), [&](Complex a, Complex b) {
      return std::norm(a - Complex(cx, cy)) < std::norm(b - Complex(cx, cy));
    });
    out.push_back(nearest);
    for (int r = 0; r < opt.random_probes; ++r) out.push_back(eligible[std::size_t(rng() % eligible.size())]);
  }
  return out;
}

/// Searches for a certified zero of z -> K(z, w0) over a set of probes w0.
inline Verdict lu_qi_keng_verdict(const KernelModel& m, const VerdictOptions& opt = {})
{
  Verdict v;
  const double h = m.domain().h();
  v.resolution = h * std::max(1, opt.scan.stride);
  v.probes = opt.w0;
  if (opt.auto_probes)
    for (auto p : verdict_probes(m, opt)) v.probes.push_back(p);
  v.floor = std::numeric_limits<double>::infinity();
  const double r0 = std::max(3.0 * h, 1.5 * v.resolution);
  for (Complex w0 : v.probes) {
    const Slice s = model_slice(m, w0);
    ScanOptions so = opt.scan;
    if (so.component < 0) so.component = m.require_component(w0);
    const ScanResult r = scan_min_modulus(s, m.domain(), m.components().label, so);
    if (r.scanned) v.floor = std::min(v.floor, r.min_modulus);
    for (std::size_t c = 0; c < std::min(opt.candidates_per_probe, r.candidates.size()); ++c) {
      auto cert = certify_zero(s, r.candidates[c].z, r0);
      if (cert) {
        v.has_zero = true;
        v.certificate = std::move(cert);
        return v;
      }
    }
  }
  return v;
}

struct TrackRow
{
  double param = 0.0;
  std::optional<int> winding;  ///< empty when the floor was violated
  double min_modulus = 0.0;
  double kernel_error = 0.0;
};

/// Winding numbers of K_j(., w0) on one fixed contour along a sequence of
/// models, with the kernel error against a reference on fixed probes.
template <class Ref>
std::vector<TrackRow> hurwitz_track(const std::vector<const KernelModel*>& models, const std::vector<double>& params,
                                    Complex w0, const std::vector<Complex>& contour, const Ref& reference,
                                    const std::vector<Complex>& probes)
{
  std::vector<TrackRow> rows;
  for (std::size_t j = 0; j < models.size(); ++j) {
    TrackRow row;
    row.param = j < params.size() ? params[j] : double(j);
    try {
      const WindingResult w = winding(model_slice(*models[j], w0), contour);
      row.winding = w.winding;
      row.min_modulus = w.min_modulus;
    } catch (const FloorViolation&) {
    }
    row.kernel_error = probes.empty() ? 0.0 : kernel_error(*models[j], reference, probes);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace blab
