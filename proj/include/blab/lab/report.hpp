#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "blab/zeros/verdict.hpp"
#include "json.hpp"

namespace blab {

inline std::string fmt12(double v)
{
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

struct Assertion
{
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& os) const
  {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

struct ExperimentReport
{
  std::string experiment;
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Assertion> assertions;

  bool passed() const
  {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }
  void check(const std::string& name, bool ok, const std::string& detail = {})
  {
    assertions.push_back({name, ok, detail});
  }
};

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json to_json(const ZeroCertificate& c)
{
  nlohmann::json pts = nlohmann::json::array();
  for (auto z : c.contour) pts.push_back(complex_json(z));
  return {{"w0", complex_json(c.w0)},       {"z_star", complex_json(c.z_star)}, {"radius", c.radius},
          {"winding", c.winding},           {"min_modulus", c.min_modulus},    {"eval_error", c.eval_error},
          {"contour", std::move(pts)}};
}

/// <dir>/<experiment>.csv and <dir>/<experiment>.json.
inline void write_report(const ExperimentReport& r, const std::string& dir)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(std::filesystem::path(dir) / (r.experiment + ".csv"));
    r.table.write_csv(os);
  }
  nlohmann::json j = r.summary;
  j["experiment"] = r.experiment;
  j["passed"] = r.passed();
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : r.assertions) j["assertions"].push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  std::ofstream os(std::filesystem::path(dir) / (r.experiment + ".json"));
  os << j.dump(2) << '\n';
}

}  // namespace blab
