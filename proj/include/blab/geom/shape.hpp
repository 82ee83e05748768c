#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <variant>
#include <vector>

#include "blab/core.hpp"

namespace blab {

struct Box
{
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void grow(const Box& o)
  {
    xmin = std::min(xmin, o.xmin);
    ymin = std::min(ymin, o.ymin);
    xmax = std::max(xmax, o.xmax);
    ymax = std::max(ymax, o.ymax);
  }
  bool empty() const { return !(xmin <= xmax && ymin <= ymax); }
};

struct Disc
{
  Point center;
  double radius = 1.0;
};

struct Annulus
{
  Point center;
  double inner = 0.5;
  double outer = 1.0;
};

struct Rectangle
{
  Point lo;
  Point hi;
};

/// Open width-neighbourhood of a segment. A slit is a tube one cell wide.
struct Tube
{
  Point from;
  Point to;
  double width = 0.0;
};

struct Shape;

struct Union
{
  std::vector<Shape> parts;
};

/// parts[0] minus every later part.
struct Difference
{
  std::vector<Shape> parts;
};

struct Shape
{
  using Variant = std::variant<Disc, Annulus, Rectangle, Tube, Union, Difference>;
  Variant v;

  Shape() : v(Disc{}) {}
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Shape> && std::is_constructible_v<Variant, T>)
  Shape(T s) : v(std::move(s))
  {
  }
};

inline Shape make_union(Shape a, Shape b) { return Union{{std::move(a), std::move(b)}}; }
inline Shape make_difference(Shape a, Shape b) { return Difference{{std::move(a), std::move(b)}}; }

inline double segment_distance(Point p, Point a, Point b)
{
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Every primitive is an open set; lattice points exactly on an edge are out.
inline bool contains(const Shape& s, Point p)
{
  struct V
  {
    Point p;
    bool operator()(const Disc& d) const { return std::hypot(p.x - d.center.x, p.y - d.center.y) < d.radius; }
    bool operator()(const Annulus& a) const
    {
      const double r = std::hypot(p.x - a.center.x, p.y - a.center.y);
      return r > a.inner && r < a.outer;
    }
    bool operator()(const Rectangle& r) const
    {
      return p.x > r.lo.x && p.x < r.hi.x && p.y > r.lo.y && p.y < r.hi.y;
    }
    bool operator()(const Tube& t) const { return segment_distance(p, t.from, t.to) < 0.5 * t.width; }
    bool operator()(const Union& u) const
    {
      for (const auto& s : u.parts)
        if (contains(s, p)) return true;
      return false;
    }
    bool operator()(const Difference& d) const
    {
      if (d.parts.empty() || !contains(d.parts[0], p)) return false;
      for (std::size_t i = 1; i < d.parts.size(); ++i)
        if (contains(d.parts[i], p)) return false;
      return true;
    }
  };
  return std::visit(V{p}, s.v);
}

inline Box bounding_box(const Shape& s)
{
  struct V
  {
    Box operator()(const Disc& d) const
    {
      return {d.center.x - d.radius, d.center.y - d.radius, d.center.x + d.radius, d.center.y + d.radius};
    }
    Box operator()(const Annulus& a) const
    {
      return {a.center.x - a.outer, a.center.y - a.outer, a.center.x + a.outer, a.center.y + a.outer};
    }
    Box operator()(const Rectangle& r) const { return {r.lo.x, r.lo.y, r.hi.x, r.hi.y}; }
    Box operator()(const Tube& t) const
    {
      const double w = 0.5 * t.width;
      return {std::min(t.from.x, t.to.x) - w, std::min(t.from.y, t.to.y) - w, std::max(t.from.x, t.to.x) + w,
              std::max(t.from.y, t.to.y) + w};
    }
    Box operator()(const Union& u) const
    {
      Box b;
      for (const auto& s : u.parts) b.grow(bounding_box(s));
      return b;
    }
    Box operator()(const Difference& d) const { return d.parts.empty() ? Box{} : bounding_box(d.parts[0]); }
  };
  return std::visit(V{}, s.v);
}

inline void validate(const Shape& s)
{
  struct V
  {
    void operator()(const Disc& d) const
    {
      if (!(d.radius > 0)) throw DomainError("disc radius must be positive");
    }
    void operator()(const Annulus& a) const
    {
      if (!(a.inner >= 0 && a.outer > a.inner)) throw DomainError("annulus needs 0 <= inner < outer");
    }
    void operator()(const Rectangle& r) const
    {
      if (!(r.hi.x > r.lo.x && r.hi.y > r.lo.y)) throw DomainError("rectangle corners out of order");
    }
    void operator()(const Tube& t) const
    {
      if (!(t.width > 0)) throw DomainError("tube width must be positive");
    }
    void operator()(const Union& u) const
    {
      if (u.parts.empty()) throw DomainError("empty union");
      for (const auto& s : u.parts) validate(s);
    }
    void operator()(const Difference& d) const
    {
      if (d.parts.size() < 2) throw DomainError("difference needs at least two parts");
      for (const auto& s : d.parts) validate(s);
    }
  };
  std::visit(V{}, s.v);
}

}  // namespace blab
