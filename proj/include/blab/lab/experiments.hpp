#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "blab/geom.hpp"
#include "blab/kernel.hpp"
#include "blab/lab/basis_choice.hpp"
#include "blab/lab/config.hpp"
#include "blab/lab/report.hpp"
#include "blab/zeros.hpp"

namespace blab {

namespace detail {

inline GridDomain planar_domain(const ExperimentConfig& c, const std::string& name)
{
  const ShapeSpec& s = c.shape(name);
  if (s.kind != DomainKind::planar) throw ConfigError("shape '" + name + "' must be planar here");
  return make_domain(s.shape, c.h);
}

inline bool nonincreasing(const std::vector<double>& v, std::size_t from = 0, double slack = 0.0)
{
  for (std::size_t i = std::max<std::size_t>(from, 1); i < v.size(); ++i)
    if (v[i] > v[i - 1] * (1 + slack)) return false;
  return true;
}

inline std::string join(const std::vector<double>& v)
{
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt12(v[i]);
  return s;
}

}  // namespace detail

/// Interior exhaustion {d_G > eps_k} of G with fitted kernels compared to
/// the kernel of G on the compact set d_G > compact_margin.
inline ExperimentReport run_exhaustion(const ExperimentConfig& c)
{
  ExperimentReport r;
  r.experiment = "exhaustion";
  const GridDomain G = detail::planar_domain(c, "G");
  std::vector<double> depths = c.schedule.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : c.schedule;
  for (double e : depths)
    if (e >= c.compact_margin) throw ConfigError("every depth must be below compact_margin");
  DomainSequence seq;
  try {
    seq = interior_exhaustion(G, depths);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const auto probes = compact_probes(G, c.compact_margin);
  if (probes.empty()) throw ConfigError("compact set is empty");
  const auto cf = closed_form_for(c.shape("G").shape);
  std::optional<KernelModel> limit;
  if (!cf) limit = fit_kernel(G, default_basis(G, c.nneg, c.npos), {c.threads});

  // annulus targets: certify a zero of every member's slice at a fixed w0
  const bool annular = cf && cf->kind() == ClosedFormKernel::Kind::annulus;
  const Complex w0 = c.w0 ? *c.w0 : (annular ? cf->center() + (cf->inner() + 0.7 * (cf->outer() - cf->inner())) : 0.0);

  r.table.header = {"stage", "epsilon", "rho1", "rho2", "kernel_error", "basis_size", "zero_certified"};
  std::vector<double> errs, r2s;
  bool all_certified = true;
  nlohmann::json certs = nlohmann::json::array();
  for (std::size_t k = 0; k < seq.members.size(); ++k) {
    const auto M = std::make_shared<const GridDomain>(seq.members[k]);
    const double p1 = rho1(*M, G), p2 = rho2(*M, G);
    r2s.push_back(p2);
    std::optional<KernelModel> m;
    try {
      m = fit_kernel(M, default_basis(*M, c.nneg, c.npos), {c.threads});
    } catch (const FactorizationError& e) {
      errs.push_back(std::numeric_limits<double>::quiet_NaN());
      all_certified = false;
      r.table.rows.push_back({std::to_string(k), fmt12(seq.params[k]), fmt12(p1), fmt12(p2), "factorization_failed",
                              "0", "0"});
      continue;
    }
    const double err = cf ? kernel_error(*m, *cf, probes) : kernel_error(*m, *limit, probes);
    errs.push_back(err);
    std::string cert_col = "";
    if (annular) {
      VerdictOptions vo;
      vo.seed = c.seed;
      vo.w0 = {w0};
      vo.auto_probes = false;
      const Verdict v = m->domain().contains({w0.real(), w0.imag()}) ? lu_qi_keng_verdict(*m, vo) : Verdict{};
      all_certified &= v.has_zero;
      cert_col = v.has_zero ? "1" : "0";
      if (v.certificate) {
        certs.push_back(to_json(*v.certificate));
        certs.back()["stage"] = k;
      }
    }
    r.table.rows.push_back({std::to_string(k), fmt12(seq.params[k]), fmt12(p1), fmt12(p2), fmt12(err),
                            std::to_string(m->total_size()), cert_col});
  }
  r.summary["reference"] = cf ? "closed_form" : "fitted_limit";
  r.summary["kernel_errors"] = errs;
  r.summary["rho2"] = r2s;
  r.summary["final_kernel_error"] = errs.back();
  r.check("rho2_nonincreasing", detail::nonincreasing(r2s), detail::join(r2s));
  const std::size_t from = errs.size() >= 3 ? errs.size() - 3 : 0;
  bool finite = true;
  for (double e : errs) finite &= std::isfinite(e);
  r.check("kernel_error_nonincreasing_final_stages", finite && detail::nonincreasing(errs, from + 1),
          detail::join(errs));
  if (annular) {
    r.summary["w0"] = complex_json(w0);
    r.summary["certificates"] = certs;
    r.check("zero_certified_every_stage", all_certified);
  }
  return r;
}

/// Annulus-type target: returns (w0, certified closed-form zero) when D is
/// an annulus whose kernel slice has a zero.
struct ReferenceZero
{
  Complex w0;
  std::optional<ZeroCertificate> certificate;
};

inline ReferenceZero reference_zero(const ClosedFormKernel& k, const GridDomain& D, std::optional<Complex> w0)
{
  ReferenceZero z;
  z.w0 = w0 ? *w0 : k.center() + (k.inner() + 0.7 * (k.outer() - k.inner()));
  if (k.kind() != ClosedFormKernel::Kind::annulus) return z;
  const Slice s = closed_form_slice(k, z.w0);
  ScanOptions so;
  so.stride = 1;
  const Components comps = components(D);
  const ScanResult sc = scan_min_modulus(s, D, comps.label, so);
  for (std::size_t i = 0; i < std::min<std::size_t>(3, sc.candidates.size()) && !z.certificate; ++i)
    z.certificate = certify_zero(s, sc.candidates[i].z, 3 * D.h());
  return z;
}

/// G and D joined by necks of decreasing width; tracks rho2, the kernel on
/// D and the winding number of K(., w0) about the zero of K_D(., w0).
inline ExperimentReport run_barbell(const ExperimentConfig& c)
{
  ExperimentReport r;
  r.experiment = "barbell";
  const GridDomain G = detail::planar_domain(c, "G"), D = detail::planar_domain(c, "D");
  const std::vector<double> widths = c.schedule.empty() ? std::vector<double>{0.4, 0.2, 0.1, 0.05} : c.schedule;
  Point a, b;
  if (c.segment) {
    a = c.segment->first;
    b = c.segment->second;
  } else {
    const auto bp = closest_boundary_pair(G, D);
    a = bp.on_g;
    b = bp.on_d;
  }
  DomainSequence seq;
  try {
    seq = barbell_sequence(G, D, a, b, widths);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const auto cf = closed_form_for(c.shape("D").shape);
  if (!cf) throw ConfigError("barbell needs a disc or annulus D");
  const ReferenceZero ref = reference_zero(*cf, D, c.w0);
  const Complex w0 = ref.w0;
  std::vector<Complex> contour;
  if (ref.certificate) {
    const double rc = c.contour_radius ? *c.contour_radius : std::max(3 * c.h, 0.2 * (cf->outer() - cf->inner()));
    contour = circle_contour(ref.certificate->z_star, rc);
    r.summary["reference_certificate"] = to_json(*ref.certificate);
  }
  const auto probes = compact_probes(D, std::min(c.compact_margin, 0.25 * (cf->outer() - cf->inner())));

  r.table.header = {"stage", "width", "rho1", "rho2", "winding", "contour_min_modulus", "kernel_error_D", "basis_size"};
  std::vector<double> r2s;
  std::vector<std::optional<int>> windings;
  nlohmann::json certs = nlohmann::json::array();
  for (std::size_t k = 0; k < seq.members.size(); ++k) {
    const auto M = std::make_shared<const GridDomain>(seq.members[k]);
    const KernelModel m = fit_kernel(M, default_basis(*M, c.nneg, c.npos), {c.threads});
    const auto rows = hurwitz_track<ClosedFormKernel>({&m}, {seq.params[k]}, w0,
                                                      contour.empty() ? circle_contour(w0, 3 * c.h) : contour, *cf,
                                                      probes);
    const TrackRow& t = rows.front();
    const double p2 = rho2(*M, seq.target);
    r2s.push_back(p2);
    windings.push_back(contour.empty() ? std::nullopt : t.winding);
    if (!contour.empty() && t.winding && *t.winding > 0) {
      const auto w = winding(model_slice(m, w0), contour);
      certs.push_back(to_json(ZeroCertificate{w0, ref.certificate->z_star, 0.0, contour, w.winding, w.min_modulus,
                                              w.max_error}));
      certs.back()["width"] = seq.params[k];
      certs.back()["radius"] = std::abs(contour.front() - ref.certificate->z_star);
    }
    r.table.rows.push_back({std::to_string(k), fmt12(seq.params[k]), fmt12(rho1(*M, seq.target)), fmt12(p2),
                            windings.back() ? std::to_string(*windings.back()) : "floor",
                            fmt12(t.min_modulus), fmt12(t.kernel_error), std::to_string(m.total_size())});
  }
  r.summary["w0"] = complex_json(w0);
  r.summary["rho2"] = r2s;
  r.summary["certificates"] = certs;
  bool strictly = true;
  for (std::size_t i = 1; i < r2s.size(); ++i) strictly &= r2s[i] < r2s[i - 1];
  r.check("rho2_decreasing", strictly, detail::join(r2s));
  // certification must start somewhere and persist through every thinner neck
  std::vector<std::size_t> order(widths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return widths[x] > widths[y]; });
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < order.size() && !first; ++i)
    if (windings[order[i]] && *windings[order[i]] >= 1) first = i;
  r.summary["first_certified_stage"] = first ? nlohmann::json(order[*first]) : nlohmann::json(nullptr);
  if (widths.size() >= 2) {
    bool persists = first.has_value() && *first + 2 <= order.size();
    for (std::size_t i = first.value_or(order.size()); i < order.size(); ++i)
      persists &= windings[order[i]] && *windings[order[i]] >= 1;
    r.check("zero_certified_thinnest_necks", persists,
            ref.certificate ? "winding about the reference zero" : "reference kernel has no zero for this w0");
  }
  return r;
}

/// Result of placing a small annulus next to an approximant of G.
struct NowhereDensityResult
{
  GridDomain result;
  GridDomain target;
  double epsilon = 0.0;
  Annulus small;
  double rho1 = 0.0;
  std::optional<ZeroCertificate> certificate;
  double floor = 0.0;
};

namespace detail {

inline NowhereDensityResult nowhere_density_planar(const GridDomain& G, double delta, bool connected, int nneg,
                                                   int npos, std::uint64_t seed, unsigned threads)
{
  const double h = G.h();
  if (!(delta > 8 * h)) throw ConfigError("delta too small for the lattice (needs delta > 8h)");
  NowhereDensityResult out;
  out.target = G;
  // (1) interior approximant
  double eps = delta / 8;
  GridDomain member;
  for (;;) {
    if (!(eps > h)) throw ConfigError("delta too small for the lattice");
    member = interior_exhaustion(G, {eps}).members.front();
    if (rho1(member, G) < delta / 4) break;
    eps /= 2;
  }
  out.epsilon = eps;
  // (2) small annulus off the rightmost boundary cell of G
  const auto bnd = extract_sets(G).boundary.points();
  double cy = 0;
  for (const auto& p : bnd) cy += p.y;
  cy /= double(bnd.size());
  Point far = bnd.front();
  for (const auto& p : bnd)
    if (p.x > far.x + 1e-12 || (std::abs(p.x - far.x) <= 1e-12 && std::abs(p.y - cy) < std::abs(far.y - cy))) far = p;
  const double R = 0.99 * delta / 8, rho = 0.2 * R;
  if (R < 8 * h) throw ConfigError("delta too small for the lattice (annulus under eight cells)");
  out.small = Annulus{{far.x + 0.5 * h + delta / 5 + R, far.y}, rho, R};
  const GridDomain Dd = make_domain(Shape(out.small), covering_lattice(G.lat, bounding_box(Shape(out.small))));
  GridDomain result = unite(member, Dd);
  // (3) optional neck of width 3h
  if (connected) {
    const auto bp = closest_boundary_pair(member, Dd);
    result = attach_neck(result, bp.on_g, bp.on_d, 3 * h);
    if (components(result).count != 1) throw Error("neck failed to connect the approximant and the annulus");
  }
  out.rho1 = rho1(result, G);
  out.result = result;
  // (4) certified zero inside the small annulus
  const auto M = std::make_shared<const GridDomain>(result);
  const KernelModel m = fit_kernel(M, default_basis(*M, nneg, npos), {threads});
  VerdictOptions vo;
  vo.seed = seed;
  vo.random_probes = 0;
  vo.auto_probes = false;
  const Complex c0 = to_complex(out.small.center);
  for (Complex d : {Complex(-1, 0), Complex(1, 0), Complex(0, 1), Complex(0, -1)}) vo.w0.push_back(c0 + 0.7 * R * d);
  vo.scan.stride = 1;
  vo.scan.window = Box{c0.real() - R, c0.imag() - R, c0.real() + R, c0.imag() + R};
  const Verdict v = lu_qi_keng_verdict(m, vo);
  out.certificate = v.certificate;
  out.floor = v.floor;
  return out;
}

}  // namespace detail

/// Next to an approximant of G, place a small annulus (optionally joined by
/// a thin neck) so the result is within rho1 < delta of G and its kernel
/// has a certified zero.
inline ExperimentReport run_nowhere_density(const ExperimentConfig& c)
{
  ExperimentReport r;
  r.experiment = "nowhere_density";
  const ShapeSpec& gs = c.shape("G");
  GridDomain G;
  if (c.dimension == 1) {
    if (gs.kind != DomainKind::planar) throw ConfigError("dimension 1 needs a planar G");
    G = make_domain(gs.shape, c.h);
  } else {
    // C^2: G is a Reinhardt profile; work on the slice z2 = 0 of G and on
    // the annulus factor of an annulus x disc product.
    if (gs.kind != DomainKind::reinhardt) throw ConfigError("dimension 2 needs a reinhardt_profile G");
    const GridDomain P = make_domain(gs.shape, c.h, DomainKind::reinhardt);
    r.summary["g_profile_logconvex"] = is_logconvex_profile(P);
    double rmax = 0;
    for (int i = 0; i < P.lat.nx; ++i)
      if (P.mask[P.lat.index(i, 0)]) rmax = std::max(rmax, P.lat.cx(i) + 0.5 * c.h);
    if (!(rmax > 0)) throw ConfigError("profile does not meet the r1 axis slice");
    G = make_domain(Disc{{0, 0}, rmax}, c.h);
  }
  const auto res = detail::nowhere_density_planar(G, c.delta, c.connected, c.nneg, c.npos, c.seed, c.threads);
  if (c.dimension == 2) {
    const double R = res.small.outer, rho = res.small.inner;
    const GridDomain prof = make_domain(Rectangle{{rho, 0}, {R, R}}, c.h, DomainKind::reinhardt);
    r.summary["product_profile_logconvex"] = is_logconvex_profile(prof);
  }
  r.table.header = {"delta", "epsilon", "connected", "rho1", "annulus_center_x", "annulus_center_y",
                    "annulus_inner", "annulus_outer", "certified", "winding", "min_modulus", "floor"};
  r.table.rows.push_back({fmt12(c.delta), fmt12(res.epsilon), c.connected ? "1" : "0", fmt12(res.rho1),
                          fmt12(res.small.center.x), fmt12(res.small.center.y), fmt12(res.small.inner),
                          fmt12(res.small.outer), res.certificate ? "1" : "0",
                          res.certificate ? std::to_string(res.certificate->winding) : "0",
                          res.certificate ? fmt12(res.certificate->min_modulus) : "nan", fmt12(res.floor)});
  r.summary["rho1"] = res.rho1;
  r.summary["epsilon"] = res.epsilon;
  r.summary["components"] = components(res.result).count;
  if (res.certificate) r.summary["certificate"] = to_json(*res.certificate);
  r.check("rho1_below_delta", res.rho1 < c.delta, fmt12(res.rho1));
  r.check("zero_certified", res.certificate.has_value());
  if (c.connected) r.check("connected", components(res.result).count == 1);
  if (c.dimension == 2) {
    r.check("profiles_logconvex",
            r.summary["g_profile_logconvex"].get<bool>() && r.summary["product_profile_logconvex"].get<bool>());
  }
  return r;
}

struct MetricRow
{
  std::string pair;
  double hausdorff_closure = 0, hausdorff_boundary = 0, volume_term = 0, sup_term = 0;
  double rho1() const { return hausdorff_closure + hausdorff_boundary; }
  double rho2() const { return volume_term + sup_term; }
};

inline MetricRow metric_row(const std::string& name, const GridDomain& U, const GridDomain& V)
{
  MetricRow m;
  m.pair = name;
  const auto a = extract_sets(U), b = extract_sets(V);
  m.hausdorff_closure = hausdorff(a.closure, b.closure);
  m.hausdorff_boundary = hausdorff(a.boundary, b.boundary);
  const auto t = rho2_terms(U, V);
  m.volume_term = t.volume_term;
  m.sup_term = t.sup_term;
  return m;
}

/// Slit disc, tailed square, concentric discs and an identical pair, plus
/// the pair (U, V) from the config if present.
inline ExperimentReport run_metric_demo(const ExperimentConfig& c)
{
  ExperimentReport r;
  r.experiment = "metric_demo";
  const double h = c.h;
  const Shape disc = Disc{{0, 0}, 1.0};
  const Shape slit = make_difference(disc, Rectangle{{-1.5, 0}, {1.5, h}});
  const Shape square = Rectangle{{0, 0}, {1, 1}};
  const double tw = 0.05;
  const Shape tailed = make_union(square, Rectangle{{0.5, 0}, {2, tw}});
  std::vector<MetricRow> rows;
  rows.push_back(metric_row("slit_disc", make_domain(disc, h), make_domain(slit, h)));
  rows.push_back(metric_row("tailed_square", make_domain(square, h), make_domain(tailed, h)));
  rows.push_back(metric_row("concentric_discs", make_domain(disc, h), make_domain(Disc{{0, 0}, 1.1}, h)));
  rows.push_back(metric_row("identical", make_domain(disc, h), make_domain(disc, h)));
  if (c.shapes.count("U") && c.shapes.count("V")) {
    const ShapeSpec &u = c.shape("U"), &v = c.shape("V");
    if (u.kind != v.kind) throw ConfigError("U and V must be of the same kind");
    rows.push_back(metric_row("U_V", make_domain(u.shape, h, u.kind), make_domain(v.shape, h, v.kind)));
  }
  r.table.header = {"pair", "hausdorff_closure", "hausdorff_boundary", "rho1", "volume_term", "sup_term", "rho2"};
  for (const auto& m : rows)
    r.table.rows.push_back({m.pair, fmt12(m.hausdorff_closure), fmt12(m.hausdorff_boundary), fmt12(m.rho1()),
                            fmt12(m.volume_term), fmt12(m.sup_term), fmt12(m.rho2())});
  const auto& s = rows[0];
  const auto& t = rows[1];
  const auto& id = rows[3];
  r.check("slit_rho1_large", s.rho1() >= 0.5, fmt12(s.rho1()));
  r.check("slit_volume_small", s.volume_term <= 0.05, fmt12(s.volume_term));
  r.check("tail_rho2_small", t.rho2() <= 0.2, fmt12(t.rho2()));
  r.check("tail_rho1_large", t.rho1() >= 0.9, fmt12(t.rho1()));
  r.check("identical_zero", id.rho1() == 0 && id.rho2() == 0);
  for (const auto& m : rows)
    r.summary["pairs"][m.pair] = {{"rho1", m.rho1()}, {"rho2", m.rho2()}, {"volume_term", m.volume_term},
                                  {"sup_term", m.sup_term}};
  return r;
}

inline ExperimentReport run_experiment(const ExperimentConfig& c)
{
  ExperimentReport r;
  if (c.experiment == "exhaustion") r = run_exhaustion(c);
  else if (c.experiment == "barbell") r = run_barbell(c);
  else if (c.experiment == "nowhere_density") r = run_nowhere_density(c);
  else if (c.experiment == "metric_demo") r = run_metric_demo(c);
  else throw ConfigError("unknown experiment '" + c.experiment + "'");
  r.summary["environment"] = {{"h", c.h}, {"basis_window", {c.nneg, c.npos}}, {"seed", c.seed}, {"threads", c.threads}};
  return r;
}

}  // namespace blab
