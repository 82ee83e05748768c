#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blab/lab.hpp"

using namespace blab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("blab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args)
{
  const int s = std::system((std::string(BLAB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j)
{
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json kDisc = {{"disc", {{"center", {0, 0}}, {"radius", 1}}}};

}  // namespace

TEST(Config, ParsesEveryShape)
{
  const json j = {{"experiment", "nowhere-density"},
                  {"shapes",
                   {{"a", kDisc},
                    {"b", {{"annulus", {{"center", {2, 0}}, {"inner", 0.5}, {"outer", 1}}}}},
                    {"c", {{"rectangle", {{"lo", {0, 0}}, {"hi", {1, 2}}}}}},
                    {"d", {{"tube", {{"from", {0, 0}}, {"to", {1, 0}}, {"width", 0.1}}}}},
                    {"e", {{"union", {kDisc, {{"rectangle", {{"lo", {0, 0}}, {"hi", {2, 0.1}}}}}}}}},
                    {"f", {{"difference", {kDisc, {{"disc", {{"center", {0, 0}}, {"radius", 0.5}}}}}}}},
                    {"g", {{"reinhardt_profile", kDisc}}}}},
                  {"basis_window", {3, 12}},
                  {"h", 0.02},
                  {"schedule", {0.4, 0.2}},
                  {"w0", {0.8, 0}}};
  const ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.experiment, "nowhere_density");
  EXPECT_EQ(c.shapes.size(), 7u);
  EXPECT_EQ(c.nneg, 3);
  EXPECT_EQ(c.npos, 12);
  EXPECT_EQ(c.shape("g").kind, DomainKind::reinhardt);
  EXPECT_TRUE(contains(c.shape("f").shape, {0.7, 0}));
  EXPECT_FALSE(contains(c.shape("f").shape, {0.2, 0}));
  EXPECT_EQ(*c.w0, Complex(0.8, 0));
  EXPECT_THROW(c.shape("missing"), ConfigError);
}

TEST(Config, RejectsInvalidInput)
{
  const json base = {{"experiment", "exhaustion"}, {"shapes", {{"G", kDisc}}}};
  auto with = [&](const std::string& k, const json& v) {
    json j = base;
    j[k] = v;
    return j;
  };
  EXPECT_NO_THROW(parse_config(base));
  EXPECT_THROW(parse_config(with("bogus", 1)), ConfigError);
  EXPECT_THROW(parse_config(with("h", 0)), ConfigError);
  EXPECT_THROW(parse_config(with("h", "small")), ConfigError);
  EXPECT_THROW(parse_config(with("schedule", {0.1, 0.2, 0.15})), ConfigError);
  EXPECT_THROW(parse_config(with("schedule", {0.1, 0.1})), ConfigError);
  EXPECT_THROW(parse_config(with("basis_window", {-1, 4})), ConfigError);
  EXPECT_THROW(parse_config(with("basis_window", {4})), ConfigError);
  EXPECT_THROW(parse_config(with("experiment", "teleport")), ConfigError);
  EXPECT_THROW(parse_config(with("shapes", {{"G", {{"disc", {{"radius", 1}, {"colour", 2}}}}}})), ConfigError);
  EXPECT_THROW(parse_config(with("shapes", {{"G", {{"hexagon", json::object()}}}})), ConfigError);
  EXPECT_THROW(parse_config(with("shapes", {{"G", {{"disc", {{"radius", -1}}}}}})), ConfigError);
  EXPECT_THROW(parse_config(with("dimension", 3)), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Report, CsvAndJsonLayout)
{
  ExperimentReport r;
  r.experiment = "unit";
  r.table.header = {"a", "b"};
  r.table.rows.push_back({fmt12(1.0 / 3.0), fmt12(2e-20)});
  r.check("fine", true);
  r.check("broken", false, "why");
  const fs::path d = scratch("report");
  write_report(r, d.string());
  EXPECT_EQ(slurp(d / "unit.csv"), "a,b\n0.333333333333,2e-20\n");
  const json j = json::parse(slurp(d / "unit.json"));
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["assertions"].size(), 2u);
  EXPECT_EQ(j["assertions"][1]["detail"], "why");
}

TEST(Experiments, MetricDemoSeparations)
{
  ExperimentConfig c;
  c.experiment = "metric_demo";
  c.h = 0.01;
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.table.rows.size(), 4u);
  const auto& p = r.summary["pairs"];
  EXPECT_GT(p["concentric_discs"]["rho1"].get<double>(), 0.1);
  EXPECT_LT(p["concentric_discs"]["rho1"].get<double>(), 0.3);
  EXPECT_EQ(r.summary["environment"]["h"].get<double>(), 0.01);
}

TEST(Experiments, DiscExhaustionDecreases)
{
  ExperimentConfig c = parse_config({{"experiment", "exhaustion"},
                                     {"shapes", {{"G", kDisc}}},
                                     {"basis_window", {0, 30}},
                                     {"h", 0.01},
                                     {"schedule", {0.2, 0.1, 0.05}},
                                     {"compact_margin", 0.3}});
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.table.rows.size(), 3u);
  const auto e = r.summary["kernel_errors"].get<std::vector<double>>();
  EXPECT_LT(e[1], e[0]);
  EXPECT_LT(e[2], e[1]);
}

TEST(Experiments, AnnulusExhaustionKeepsItsZero)
{
  ExperimentConfig c = parse_config({{"experiment", "exhaustion"},
                                     {"shapes", {{"G", {{"annulus", {{"inner", 0.5}, {"outer", 1}}}}}}},
                                     {"basis_window", {20, 36}},
                                     {"h", 0.01},
                                     {"schedule", {0.1, 0.05}},
                                     {"compact_margin", 0.15}});
  const ExperimentReport r = run_experiment(c);
  for (const auto& a : r.assertions) EXPECT_TRUE(a.passed) << a.name << " " << a.detail;
  EXPECT_EQ(r.summary["certificates"].size(), 2u);
}

TEST(Experiments, SingleStageSchedule)
{
  ExperimentConfig c = parse_config({{"experiment", "exhaustion"},
                                     {"shapes", {{"G", kDisc}}},
                                     {"basis_window", {0, 10}},
                                     {"h", 0.02},
                                     {"schedule", {0.1}}});
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.table.rows.size(), 1u);
  EXPECT_TRUE(r.passed());
}

TEST(Experiments, NowhereDensityNeedsResolution)
{
  ExperimentConfig c = parse_config({{"experiment", "nowhere_density"}, {"shapes", {{"G", kDisc}}}, {"h", 0.05},
                                     {"delta", 0.4}});
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiments, ReportsAreReproducible)
{
  ExperimentConfig c = parse_config({{"experiment", "exhaustion"},
                                     {"shapes", {{"G", {{"rectangle", {{"lo", {0, 0}}, {"hi", {1, 1}}}}}}}},
                                     {"basis_window", {0, 8}},
                                     {"h", 0.02},
                                     {"schedule", {0.2, 0.1}},
                                     {"threads", 1}});
  const ExperimentReport a = run_experiment(c);
  c.threads = 4;
  const ExperimentReport b = run_experiment(c);
  EXPECT_EQ(a.table.rows, b.table.rows);
  EXPECT_EQ(a.summary["reference"], "fitted_limit");
}

TEST(Cli, ExitCodes)
{
  const fs::path d = scratch("cli");
  const auto metric = write_json(d, "metric.json", {{"experiment", "metric_demo"}, {"h", 0.02}});
  EXPECT_EQ(run_cli("metric " + metric.string() + " --out " + (d / "m").string()), 0);
  EXPECT_TRUE(fs::exists(d / "m" / "metric_demo.csv"));
  EXPECT_TRUE(fs::exists(d / "m" / "metric_demo.json"));

  const auto bad = write_json(d, "bad.json", {{"experiment", "metric_demo"}, {"colour", "red"}});
  EXPECT_EQ(run_cli("metric " + bad.string()), 3);
  std::ofstream(d / "garbage.json") << "{ not json";
  EXPECT_EQ(run_cli("experiment " + (d / "garbage.json").string()), 3);
  EXPECT_EQ(run_cli("experiment " + metric.string() + " --h -1"), 3);
  EXPECT_EQ(run_cli("frobnicate"), 3);

  // a volume threshold that the coarse slit cannot meet fails an assertion
  EXPECT_EQ(run_cli("experiment " + metric.string() + " --h 0.1 --out " + (d / "coarse").string()), 2);
}

TEST(Cli, KernelAndZerosCommands)
{
  const fs::path d = scratch("cli_kz");
  const auto cfg = write_json(d, "ann.json",
                              {{"shapes", {{"U", {{"annulus", {{"inner", 0.5}, {"outer", 1}}}}}}},
                               {"basis_window", {16, 30}},
                               {"h", 0.01},
                               {"compact_margin", 0.1},
                               {"w0", {0.8, 0}},
                               {"output_dir", (d / "out").string()}});
  ASSERT_EQ(run_cli("kernel " + cfg.string()), 0);
  const std::string field = slurp(d / "out" / "kernel.csv");
  EXPECT_EQ(field.substr(0, field.find('\n')), "re_z,im_z,re_k,im_k,abs_k");
  std::ifstream g(d / "out" / "gram.txt");
  const GramMatrix G = read_gram(g);
  EXPECT_EQ(G.values.rows(), 47);
  std::ifstream gr(d / "out" / "domain.grid");
  const GridDomain U = read_grid(gr);
  const GridDomain A = make_domain(Annulus{{0, 0}, 0.5, 1.0}, 0.01);
  EXPECT_EQ(U.mask, A.mask);
  EXPECT_EQ(U.cover, A.cover);

  ASSERT_EQ(run_cli("zeros " + cfg.string()), 0);
  const json z = json::parse(slurp(d / "out" / "zeros.json"));
  EXPECT_TRUE(z["has_zero"].get<bool>());
  EXPECT_EQ(z["certificate"]["winding"].get<int>(), 1);
}

TEST(Golden, MetricDemoTable)
{
  // frozen output of the metric demo at h = 0.05; any numerical drift shows up here
  const fs::path d = scratch("golden");
  const auto cfg = write_json(d, "m.json", {{"experiment", "metric-demo"}, {"h", 0.05}});
  run_cli("experiment " + cfg.string() + " --out " + d.string());
  EXPECT_EQ(slurp(d / "metric_demo.csv"), slurp(fs::path(BLAB_GOLDEN_DIR) / "metric_demo_h0.05.csv"));
}
