#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "blab/geom/grid.hpp"
#include "blab/geom/shape.hpp"
#include "json.hpp"

namespace blab {

using json = nlohmann::json;

struct ShapeSpec
{
  Shape shape;
  DomainKind kind = DomainKind::planar;
};

struct ExperimentConfig
{
  std::string experiment;
  std::map<std::string, ShapeSpec> shapes;
  int nneg = 0;  ///< basis window: Laurent terms per hole
  int npos = 20; ///< basis window: polynomial degree
  double h = 0.01;
  std::vector<double> schedule;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  double delta = 0.5;
  bool connected = true;
  int dimension = 1;
  unsigned threads = 1;
  double compact_margin = 0.3;
  std::optional<Complex> w0;
  std::optional<std::pair<Point, Point>> segment;
  std::optional<double> contour_radius;

  const ShapeSpec& shape(const std::string& name) const
  {
    auto it = shapes.find(name);
    if (it == shapes.end()) throw ConfigError("config is missing shape '" + name + "'");
    return it->second;
  }
};

namespace detail {

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

inline Point point(const json& j, const std::string& what)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(what + " must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline double number(const json& j, const std::string& key, const std::string& where)
{
  if (!j.contains(key) || !j[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j[key].get<double>();
}

}  // namespace detail

/// Shapes are single-key objects:
///   {"disc": {"center": [x, y], "radius": r}}
///   {"annulus": {"center": [x, y], "inner": rho, "outer": R}}
///   {"rectangle": {"lo": [x, y], "hi": [x, y]}}
///   {"tube": {"from": [x, y], "to": [x, y], "width": w}}
///   {"union": [shape, ...]}, {"difference": [shape, shape, ...]}
///   {"reinhardt_profile": shape}
inline ShapeSpec parse_shape(const json& j)
{
  if (!j.is_object() || j.size() != 1) throw ConfigError("shape must be an object with exactly one key");
  const std::string k = j.begin().key();
  const json& v = j.begin().value();
  auto list = [&](const std::string& what) {
    if (!v.is_array() || v.empty()) throw ConfigError(what + " needs a non-empty list of shapes");
    std::vector<Shape> parts;
    for (const auto& e : v) {
      const ShapeSpec s = parse_shape(e);
      if (s.kind != DomainKind::planar) throw ConfigError("profiles cannot be nested in " + what);
      parts.push_back(s.shape);
    }
    return parts;
  };
  ShapeSpec out;
  if (k == "disc") {
    detail::only_keys(v, {"center", "radius"}, "disc");
    out.shape = Disc{detail::point(v.value("center", json::array({0, 0})), "disc.center"),
                     detail::number(v, "radius", "disc")};
  } else if (k == "annulus") {
    detail::only_keys(v, {"center", "inner", "outer"}, "annulus");
    out.shape = Annulus{detail::point(v.value("center", json::array({0, 0})), "annulus.center"),
                        detail::number(v, "inner", "annulus"), detail::number(v, "outer", "annulus")};
  } else if (k == "rectangle") {
    detail::only_keys(v, {"lo", "hi"}, "rectangle");
    if (!v.contains("lo") || !v.contains("hi")) throw ConfigError("rectangle needs lo and hi");
    out.shape = Rectangle{detail::point(v["lo"], "rectangle.lo"), detail::point(v["hi"], "rectangle.hi")};
  } else if (k == "tube") {
    detail::only_keys(v, {"from", "to", "width"}, "tube");
    if (!v.contains("from") || !v.contains("to")) throw ConfigError("tube needs from and to");
    out.shape = Tube{detail::point(v["from"], "tube.from"), detail::point(v["to"], "tube.to"),
                     detail::number(v, "width", "tube")};
  } else if (k == "union") {
    out.shape = Union{list("union")};
  } else if (k == "difference") {
    auto parts = list("difference");
    if (parts.size() < 2) throw ConfigError("difference needs at least two shapes");
    out.shape = Difference{std::move(parts)};
  } else if (k == "reinhardt_profile") {
    out = parse_shape(v);
    if (out.kind != DomainKind::planar) throw ConfigError("nested reinhardt_profile");
    out.kind = DomainKind::reinhardt;
  } else {
    throw ConfigError("unknown shape kind '" + k + "'");
  }
  try {
    validate(out.shape);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

inline ExperimentConfig parse_config(const json& j)
{
  detail::only_keys(j,
                    {"experiment", "shapes", "basis_window", "h", "schedule", "seed", "output_dir", "delta",
                     "connected", "dimension", "threads", "compact_margin", "w0", "segment", "contour_radius"},
                    "config");
  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
    if (j.contains("shapes")) {
      if (!j["shapes"].is_object()) throw ConfigError("shapes must be an object of named shapes");
      for (auto it = j["shapes"].begin(); it != j["shapes"].end(); ++it) c.shapes[it.key()] = parse_shape(it.value());
    }
    if (j.contains("basis_window")) {
      const auto& w = j["basis_window"];
      if (!w.is_array() || w.size() != 2) throw ConfigError("basis_window must be [N-, N+]");
      c.nneg = w[0].get<int>();
      c.npos = w[1].get<int>();
      if (c.nneg < 0 || c.npos < 0) throw ConfigError("basis_window entries must be non-negative");
    }
    if (j.contains("h")) c.h = j["h"].get<double>();
    if (j.contains("schedule")) c.schedule = j["schedule"].get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("connected")) c.connected = j["connected"].get<bool>();
    if (j.contains("dimension")) c.dimension = j["dimension"].get<int>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("compact_margin")) c.compact_margin = j["compact_margin"].get<double>();
    if (j.contains("w0")) {
      const Point p = detail::point(j["w0"], "w0");
      c.w0 = Complex(p.x, p.y);
    }
    if (j.contains("segment")) {
      const auto& s = j["segment"];
      if (!s.is_array() || s.size() != 2) throw ConfigError("segment must be [[ax, ay], [bx, by]]");
      c.segment = {detail::point(s[0], "segment[0]"), detail::point(s[1], "segment[1]")};
    }
    if (j.contains("contour_radius")) c.contour_radius = j["contour_radius"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  std::replace(c.experiment.begin(), c.experiment.end(), '-', '_');
  if (!c.experiment.empty() && c.experiment != "exhaustion" && c.experiment != "barbell" &&
      c.experiment != "nowhere_density" && c.experiment != "metric_demo")
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  if (!(c.h > 0)) throw ConfigError("h must be positive");
  for (std::size_t i = 2; i < c.schedule.size(); ++i)
    if ((c.schedule[i] - c.schedule[i - 1]) * (c.schedule[1] - c.schedule[0]) <= 0)
      throw ConfigError("schedule must be strictly monotone");
  if (c.schedule.size() == 2 && c.schedule[0] == c.schedule[1]) throw ConfigError("schedule must be strictly monotone");
  for (double x : c.schedule)
    if (!(x > 0)) throw ConfigError("schedule entries must be positive");
  if (c.dimension != 1 && c.dimension != 2) throw ConfigError("dimension must be 1 or 2");
  if (!(c.delta > 0)) throw ConfigError("delta must be positive");
  if (!(c.compact_margin > 0)) throw ConfigError("compact_margin must be positive");
  if (c.contour_radius && !(*c.contour_radius > 0)) throw ConfigError("contour_radius must be positive");
  if (c.threads == 0) c.threads = 1;
  return c;
}

inline ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace blab
