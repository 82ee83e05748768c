// blab: command-line front end.
//   blab metric|kernel|zeros|experiment <config.json> [--h H] [--seed S] [--out DIR] [--threads N]
// Exit status: 0 success, 2 a run assertion failed, 3 invalid configuration.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "blab/geom.hpp"
#include "blab/kernel.hpp"
#include "blab/lab.hpp"
#include "blab/zeros.hpp"

using namespace blab;

namespace {

ExperimentReport run_metric(const ExperimentConfig& c)
{
  if (!c.shapes.count("U") || !c.shapes.count("V")) return run_metric_demo(c);
  const ShapeSpec &u = c.shape("U"), &v = c.shape("V");
  if (u.kind != v.kind) throw ConfigError("U and V must be of the same kind");
  ExperimentReport r;
  r.experiment = "metric";
  const auto m = metric_row("U_V", make_domain(u.shape, c.h, u.kind), make_domain(v.shape, c.h, v.kind));
  r.table.header = {"pair", "hausdorff_closure", "hausdorff_boundary", "rho1", "volume_term", "sup_term", "rho2"};
  r.table.rows.push_back({m.pair, fmt12(m.hausdorff_closure), fmt12(m.hausdorff_boundary), fmt12(m.rho1()),
                          fmt12(m.volume_term), fmt12(m.sup_term), fmt12(m.rho2())});
  r.summary = {{"rho1", m.rho1()}, {"rho2", m.rho2()}};
  return r;
}

// Fits the kernel of U, exports the Gram of the first component and a
// field of K(., w0) on the compact set.
ExperimentReport run_kernel(const ExperimentConfig& c)
{
  const ShapeSpec& u = c.shape("U");
  if (u.kind != DomainKind::planar) throw ConfigError("kernel command needs a planar U");
  const auto U = std::make_shared<const GridDomain>(make_domain(u.shape, c.h));
  const KernelModel m = fit_kernel(U, default_basis(*U, c.nneg, c.npos), {c.threads});
  std::filesystem::create_directories(c.output_dir);
  {
    std::ofstream g(std::filesystem::path(c.output_dir) / "gram.txt");
    write_gram(g, m.fit(0).gram);
  }
  {
    std::ofstream g(std::filesystem::path(c.output_dir) / "domain.grid");
    write_grid(g, *U);
  }
  const auto probes = compact_probes(*U, c.compact_margin);
  if (probes.empty()) throw ConfigError("compact set is empty");
  const Complex w0 = c.w0 ? *c.w0 : probes[probes.size() / 2];
  ExperimentReport r;
  r.experiment = "kernel";
  r.table.header = {"re_z", "im_z", "re_k", "im_k", "abs_k"};
  const Eigen::MatrixXcd K = m.eval_matrix(probes, {w0});
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Complex k = K(Eigen::Index(i), 0);
    r.table.rows.push_back({fmt12(probes[i].real()), fmt12(probes[i].imag()), fmt12(k.real()), fmt12(k.imag()),
                            fmt12(std::abs(k))});
  }
  r.summary["w0"] = complex_json(w0);
  r.summary["components"] = m.components().count;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : m.fits())
    fits.push_back({{"size", f.size()},
                    {"condition_estimate", f.factor.condition_estimate},
                    {"regularization", f.factor.regularization},
                    {"dropped_terms", f.dropped.size()}});
  r.summary["fits"] = fits;
  if (auto cf = closed_form_for(u.shape)) {
    const double e = kernel_error(m, *cf, probes);
    r.summary["closed_form_error"] = e;
  }
  return r;
}

ExperimentReport run_zeros(const ExperimentConfig& c)
{
  const ShapeSpec& u = c.shape("U");
  if (u.kind != DomainKind::planar) throw ConfigError("zeros command needs a planar U");
  const auto U = std::make_shared<const GridDomain>(make_domain(u.shape, c.h));
  const KernelModel m = fit_kernel(U, default_basis(*U, c.nneg, c.npos), {c.threads});
  VerdictOptions vo;
  vo.seed = c.seed;
  if (c.w0) vo.w0.push_back(*c.w0);
  const Verdict v = lu_qi_keng_verdict(m, vo);
  ExperimentReport r;
  r.experiment = "zeros";
  r.table.header = {"has_zero", "re_w0", "im_w0", "re_z", "im_z", "winding", "min_modulus", "floor", "resolution"};
  const auto& cert = v.certificate;
  r.table.rows.push_back({v.has_zero ? "1" : "0", cert ? fmt12(cert->w0.real()) : "nan",
                          cert ? fmt12(cert->w0.imag()) : "nan", cert ? fmt12(cert->z_star.real()) : "nan",
                          cert ? fmt12(cert->z_star.imag()) : "nan", cert ? std::to_string(cert->winding) : "0",
                          cert ? fmt12(cert->min_modulus) : "nan", fmt12(v.floor), fmt12(v.resolution)});
  r.summary["has_zero"] = v.has_zero;
  r.summary["floor"] = v.floor;
  r.summary["resolution"] = v.resolution;
  r.summary["probes"] = v.probes.size();
  if (cert) r.summary["certificate"] = to_json(*cert);
  return r;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Bergman kernel lab"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print usage");
  std::string config_path;
  std::optional<double> h;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  app.add_option("--h", h, "lattice spacing override");
  app.add_option("--seed", seed, "random seed override");
  app.add_option("--out", out, "output directory override");
  app.add_option("--threads", threads, "worker threads");
  for (const char* name : {"metric", "kernel", "zeros", "experiment"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "JSON configuration")->required();
    sub->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }
  try {
    ExperimentConfig c = load_config(config_path);
    if (h) c.h = *h;
    if (seed) c.seed = *seed;
    if (out) c.output_dir = *out;
    if (threads) c.threads = std::max(1u, *threads);
    if (!(c.h > 0)) throw ConfigError("h must be positive");
    const std::string cmd = app.get_subcommands().front()->get_name();
    ExperimentReport r = cmd == "metric"   ? run_metric(c)
                         : cmd == "kernel" ? run_kernel(c)
                         : cmd == "zeros"  ? run_zeros(c)
                                           : run_experiment(c);
    write_report(r, c.output_dir);
    for (const auto& a : r.assertions)
      std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : "  [" + a.detail + "]") << '\n';
    std::cout << "wrote " << c.output_dir << '/' << r.experiment << ".{csv,json}\n";
    return r.passed() ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
