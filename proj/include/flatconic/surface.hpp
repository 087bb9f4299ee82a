#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flatconic/subconic.hpp"

namespace flatconic {

struct EdgeRef {
  int poly = -1, edge = -1;
  bool operator==(const EdgeRef& o) const { return poly == o.poly && edge == o.edge; }
};

struct Gluing {
  EdgeRef a, b;
};

/// Surface as read from disk, coordinates kept exact.
struct RawSurface {
  std::vector<std::string> ids;
  std::vector<std::vector<Vec2<Rational>>> polygons;
  std::vector<Gluing> gluings;
};

RawSurface parse_raw_surface(const std::string& json_text);
RawSurface read_raw_surface(const std::string& path);
std::string raw_surface_json(const RawSurface& s);
RawSurface transform(const RawSurface& s, const Mat2<Rational>& g);

struct ConeClass {
  int k = 1;  // cone angle is 2 pi k
  double angle = 0.0;
  std::vector<std::pair<int, int>> corners;  // (polygon, vertex)
};

template <class T>
struct TriNeighbor {
  int tri = -1, edge = -1;
  Vec2<T> shift;    // local coords of the source = target coords + shift
  int crossing = 0;  // +-(gluing + 1) for polygon edges, 0 for diagonals
};

template <class T>
struct Tri {
  int poly = -1;
  std::array<Vec2<T>, 3> p;
  std::array<int, 3> cone{};
  std::array<TriNeighbor<T>, 3> nb;
};

template <class T>
struct Surface {
  RawSurface raw;
  std::vector<std::vector<Vec2<T>>> polygons;
  std::vector<std::vector<int>> corner_class;
  std::vector<ConeClass> cones;
  int genus = 0;
  std::vector<Tri<T>> tris;
};

using AnySurface = std::variant<Surface<Rational>, Surface<double>>;

/// Exact when the gluings close up exactly, float mode when they only close up within tolerance.
AnySurface build_any(const RawSurface& raw);
AnySurface load_surface(const std::string& path);

template <class T>
Surface<T> build_surface(const RawSurface& raw);

/// Location of a point of the universal cover: triangle, local coordinates, developed coordinates.
template <class T>
struct BaseLocation {
  int tri = -1;
  Vec2<T> local;
  Vec2<T> dev;
};

template <class T>
struct DevPoint {
  Vec2<T> pos;
  int cone = -1;
  std::vector<int> path;  // signed gluing crossings from the base
};

/// Visible piece of one developed triangle: directions from the base strictly between lo and hi.
template <class T>
struct Sector {
  int tri = -1;
  Vec2<T> offset;
  std::array<Vec2<T>, 3> corners;  // developed triangle
  Vec2<T> lo, hi;
  bool root = false;
  int parent = -1;
  int crossing = 0;
};

template <class T>
struct Chart {
  Vec2<T> base;
  BaseLocation<T> loc;
  T radius{};
  std::vector<DevPoint<T>> points;
  std::vector<Sector<T>> sectors;
  std::map<std::pair<Rational, Rational>, int> index;  // exact mode lookup by position
  const Surface<T>* surface = nullptr;

  std::optional<BaseLocation<T>> locate(const Vec2<T>& p) const;
  std::vector<int> path_of(int sector) const;
  int find(const Vec2<T>& p) const;  // index of the cone point at p, or -1
};

template <class T>
Vec2<T> polygon_centroid(const std::vector<Vec2<T>>& v);

template <class T>
BaseLocation<T> locate_in_polygon(const Surface<T>& s, int poly, const Vec2<T>& p);

template <class T>
BaseLocation<T> default_base(const Surface<T>& s);

template <class T>
Chart<T> develop(const Surface<T>& s, const BaseLocation<T>& base, const T& radius);

template <class T>
Chart<T> develop(const Surface<T>& s, const T& radius) {
  return develop(s, default_base(s), radius);
}

struct InradiusBound {
  double value = 0.0;  // largest distance to the frontier found
  double upper = 0.0;  // per-triangle bound, never smaller than the true maximum
};

template <class T>
InradiusBound inradius_bound(const Surface<T>& s);

enum class Fit { Fits, DoesNotFit, Inconclusive };
std::string fit_name(Fit f);

struct FitResult {
  Fit verdict = Fit::Inconclusive;
  bool truncated = false;  // only the part inside the chart radius was checked
};

/// Largest distance from b to the closed ellipse {q <= 0}.
double ellipse_max_distance(const QForm3<double>& q, const Vec2<double>& b);

template <class T>
FitResult subconic_fits(const Chart<T>& chart, const Subconic<T>& u);

/// Also collects the cone points on the boundary, taken from a chart that sees the whole region.
template <class T>
FitResult subconic_fits(const Chart<T>& chart, const Subconic<T>& u, std::vector<Vec2<T>>* boundary);

/// Closed disc of radius r around c contains the closed ellipse, decided with a relative margin.
/// Returns +1 inside, -1 outside, 0 too close to call.
int ellipse_in_disc(const QForm3<double>& q, const Vec2<double>& c, double r);

}  // namespace flatconic

#include "flatconic/surface_impl.hpp"
