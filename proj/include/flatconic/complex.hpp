#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flatconic/surface.hpp"

namespace flatconic {

template <class T>
std::string point_key(const Vec2<T>& p) {
  if constexpr (Scalar<T>::exact) {
    return to_string(p.x) + "," + to_string(p.y);
  } else {
    auto r = [](double v) {
      double k = std::round(v * 1e7) / 1e7;
      if (k == 0) k = 0;
      return Scalar<double>::str(k);
    };
    return r(p.x) + "," + r(p.y);
  }
}

template <class T>
std::string set_key(std::vector<Vec2<T>> pts) {
  std::vector<std::string> keys;
  for (const auto& p : pts) keys.push_back(point_key(p));
  std::sort(keys.begin(), keys.end());
  std::string k;
  for (const auto& s : keys) k += (k.empty() ? "" : ";") + s;
  return k;
}

template <class T>
std::string form_key(const QForm3<T>& q) {
  QForm3<T> c = canonical(q);
  if constexpr (Scalar<T>::exact) {
    return c.str();
  } else {
    std::string s;
    for (double v : c.coeffs()) {
      double k = std::round(v * 1e6) / 1e6;
      if (k == 0) k = 0;
      s += Scalar<double>::str(k) + ";";
    }
    return s;
  }
}

/// Rigid ellipse or strip together with its boundary cone points in successor order.
/// Ellipses have one cyclic component, strips two linear (windowed) components.
template <class T>
struct RigidConic {
  Subconic<T> u;
  std::vector<std::vector<Vec2<T>>> components;
  bool truncated = false;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& c : components) n += c.size();
    return n;
  }
  std::vector<Vec2<T>> all_points() const {
    std::vector<Vec2<T>> v;
    for (const auto& c : components) v.insert(v.end(), c.begin(), c.end());
    return v;
  }
};

/// Arrange boundary points of an ellipse or strip in successor order.
template <class T>
RigidConic<T> make_rigid(const Subconic<T>& u, std::vector<Vec2<T>> pts, bool truncated);

/// Successor of p on the boundary of U, if it lies in the known window.
template <class T>
std::optional<Vec2<T>> successor(const RigidConic<T>& u, const Vec2<T>& p);
template <class T>
std::optional<Vec2<T>> predecessor(const RigidConic<T>& u, const Vec2<T>& p);

template <class T>
std::vector<RigidConic<T>> rigid_conics(const Chart<T>& chart);

struct CellOptions {
  double radius_factor = 2.0;
  int max_doublings = 3;
};

/// Surface with a chart and the data needed to re-base charts inside cells.
template <class T>
struct Context {
  const Surface<T>* surface = nullptr;
  Chart<T> chart;
  InradiusBound inradius;
  CellOptions options;
};

template <class T>
Context<T> make_context(const Surface<T>& s, const T& radius, std::optional<BaseLocation<T>> base = std::nullopt);

enum class CellStatus { Realized, NotRealizable, WindowTooSmall };
std::string cell_status_name(CellStatus s);

template <class T>
struct CellVertex {
  std::array<T, 3> t;
  RigidConic<T> conic;
  bool certified = false;  // ellipse lies inside the local chart, so its emptiness is proven
};

template <class T>
struct TwoCell {
  NaturalBasis<T> basis;                  // triple in counterclockwise order
  std::vector<CellVertex<T>> vertices;    // counterclockwise in the T-plane
  std::vector<Vec2<T>> edge_points;       // edge i (vertex i to i+1) is the quadruple triple + edge_points[i]
  BaseLocation<T> base;
  T radius{};
  std::shared_ptr<const Chart<T>> local;
};

template <class T>
struct CellResult {
  CellStatus status = CellStatus::NotRealizable;
  TwoCell<T> cell;
  std::string reason;
};

template <class T>
CellResult<T> two_cell(const Context<T>& ctx, const std::array<Vec2<T>, 3>& z, const BaseLocation<T>& inside);

template <class T>
CellResult<T> two_cell(const Context<T>& ctx, const std::array<Vec2<T>, 3>& z);

template <class T>
struct QuadrupleResult {
  CellStatus status = CellStatus::NotRealizable;
  std::array<QForm3<T>, 2> ends;  // forms at the two ends of the feasible segment
  std::string reason;
};

template <class T>
QuadrupleResult<T> realizable_quadruple(const Context<T>& ctx, const std::array<Vec2<T>, 4>& q);

template <class T>
bool realizable_triple(const Context<T>& ctx, const std::array<Vec2<T>, 3>& z) {
  return two_cell(ctx, z).status == CellStatus::Realized;
}

/// Criteria in terms of the successor on a containing rigid conic.
template <class T>
bool adjacent(const RigidConic<T>& u, const Vec2<T>& a, const Vec2<T>& b);
template <class T>
bool realizable_quadruple_combinatorial(const RigidConic<T>& u, const std::array<Vec2<T>, 4>& q);
template <class T>
bool realizable_triple_combinatorial(const RigidConic<T>& u, const std::array<Vec2<T>, 3>& z);

/// True iff the 1-cell of quadruple a follows that of quadruple b around the cell of a and b's common triple.
template <class T>
bool follows(const RigidConic<T>& u, const std::array<Vec2<T>, 4>& a, const std::array<Vec2<T>, 4>& b);

/// Directed graph on quadruples; an edge (i, j) means vertex j follows vertex i.
template <class T>
struct LinkGraph {
  std::vector<std::array<Vec2<T>, 4>> vertices;
  std::vector<std::pair<int, int>> edges;
  int find(const std::array<Vec2<T>, 4>& q) const;
};

template <class T>
LinkGraph<T> link(const RigidConic<T>& u);

/// Link built from the actual 2-cells of the triples on U; directions read off the cell polygons.
template <class T>
LinkGraph<T> link_from_cells(const Context<T>& ctx, const RigidConic<T>& u);

template <class T>
struct VertexRec {
  std::string key;
  RigidConic<T> conic;
  bool certified = false;
};

template <class T>
struct EdgeRec {
  std::string key;
  std::array<Vec2<T>, 4> quad;
  std::array<int, 2> ends{-1, -1};
};

template <class T>
struct FaceRec {
  std::string key;
  std::array<Vec2<T>, 3> triple;
  std::vector<int> vertices;  // counterclockwise
  std::vector<int> edges;     // edge i joins vertices i and i+1
  std::vector<std::array<T, 3>> t;
  bool complete = true;
};

template <class T>
struct ComplexWindow {
  Vec2<T> base;
  T radius{};
  int budget = 0;
  bool truncated = false;
  int skipped_cells = 0;
  std::vector<VertexRec<T>> vertices;
  std::vector<EdgeRec<T>> edges;
  std::vector<FaceRec<T>> faces;
  std::map<std::string, int> vertex_index, edge_index, face_index;
};

template <class T>
std::array<Vec2<T>, 3> default_seed(const Context<T>& ctx);

template <class T>
ComplexWindow<T> build_complex(const Context<T>& ctx, const std::array<Vec2<T>, 3>& seed, int budget,
                               int threads = 1);

/// Cell-level matching between two windows (indices into faces, edges, vertices).
struct CellMatching {
  std::map<int, int> face, edge, vertex;
};

template <class T>
struct AffineMap {
  Mat2<T> g = Mat2<T>::identity();
  Vec2<T> c;
  Vec2<T> operator()(const Vec2<T>& p) const { return g * p + c; }
};

/// Cells of A whose image under F is a cell of B.
template <class T>
CellMatching match_cells(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const AffineMap<T>& f);

/// Frontier map on the cone points of matched vertices.
template <class T>
struct FrontierBijection {
  std::map<std::string, Vec2<T>> image;  // keyed by point_key of the source point
  std::map<std::string, Vec2<T>> source;
  int conjugacy_checks = 0;
};

template <class T>
FrontierBijection<T> frontier_bijection(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const CellMatching& phi);

template <class T>
std::string complex_json(const ComplexWindow<T>& w);

}  // namespace flatconic

#include "flatconic/complex_impl.hpp"
