#pragma once

// Template bodies for surface.hpp.

#include <algorithm>
#include <deque>
#include <numbers>

namespace flatconic {

struct GluingMismatch : InputError {
  using InputError::InputError;
};

namespace detail {

template <class T>
int cross_sign(const Vec2<T>& u, const Vec2<T>& v) {
  double scale = 1.0;
  if constexpr (!Scalar<T>::exact) scale = std::sqrt(to_double(norm2(u)) * to_double(norm2(v)));
  return sign(cross(u, v), scale);
}

template <class T>
bool in_closed_triangle(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& c, const Vec2<T>& p) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

template <class T>
bool on_segment(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& p) {
  if (orient(a, b, p) != 0) return false;
  Vec2<T> d = b - a;
  T t = dot(p - a, d);
  double sc = to_double(norm2(d));
  return sign(t, sc) >= 0 && sign(T(norm2(d) - t), sc) >= 0;
}

template <class T>
T dist2_to_segment(const Vec2<T>& b, const Vec2<T>& p, const Vec2<T>& q) {
  Vec2<T> d = q - p;
  T len = norm2(d);
  T t = dot(b - p, d);
  if (sign(t) <= 0) return norm2(b - p);
  if (sign(T(t - len)) >= 0) return norm2(b - q);
  Vec2<T> c = p + T(t / len) * d;
  return norm2(b - c);
}

template <class T>
bool same_point(const Vec2<T>& a, const Vec2<T>& b) {
  if constexpr (Scalar<T>::exact)
    return a == b;
  else {
    double s = 1.0 + std::fabs(a.x) + std::fabs(a.y);
    return std::fabs(a.x - b.x) <= tolerance() * s && std::fabs(a.y - b.y) <= tolerance() * s;
  }
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

template <class T>
Vec2<T> polygon_centroid(const std::vector<Vec2<T>>& v) {
  T a(0), cx(0), cy(0);
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<T>& p = v[i];
    const Vec2<T>& q = v[(i + 1) % n];
    T c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {T(cx / (3 * a)), T(cy / (3 * a))};
}

template <class T>
Surface<T> build_surface(const RawSurface& raw) {
  Surface<T> s;
  s.raw = raw;
  const int P = static_cast<int>(raw.polygons.size());
  if (P == 0) throw InputError("surface has no polygons");
  for (int p = 0; p < P; ++p) {
    std::vector<Vec2<T>> poly;
    for (const auto& v : raw.polygons[p]) poly.push_back({Scalar<T>::from(v.x), Scalar<T>::from(v.y)});
    const std::size_t n = poly.size();
    if (n < 3) throw InputError("polygon '" + raw.ids[p] + "' has fewer than three vertices");
    T area(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::same_point(poly[i], poly[(i + 1) % n]))
        throw InputError("polygon '" + raw.ids[p] + "' repeats a vertex");
      area += cross(poly[i], poly[(i + 1) % n]);
    }
    if (sign(area) <= 0) throw InputError("polygon '" + raw.ids[p] + "' is not counterclockwise");
    s.polygons.push_back(std::move(poly));
  }

  std::vector<std::vector<int>> used(P);
  std::vector<int> offset(P + 1, 0);
  for (int p = 0; p < P; ++p) {
    used[p].assign(s.polygons[p].size(), -1);
    offset[p + 1] = offset[p] + static_cast<int>(s.polygons[p].size());
  }
  auto edge_vec = [&](const EdgeRef& e) {
    const auto& poly = s.polygons[e.poly];
    return poly[(e.edge + 1) % poly.size()] - poly[e.edge];
  };
  for (std::size_t g = 0; g < raw.gluings.size(); ++g) {
    const Gluing& gl = raw.gluings[g];
    for (const EdgeRef* e : {&gl.a, &gl.b}) {
      if (e->poly < 0 || e->poly >= P || e->edge < 0 || e->edge >= static_cast<int>(s.polygons[e->poly].size()))
        throw InputError("gluing " + std::to_string(g) + " refers to a missing edge");
      if (used[e->poly][e->edge] >= 0)
        throw InputError("edge " + std::to_string(e->edge) + " of polygon '" + raw.ids[e->poly] +
                         "' is glued twice");
      used[e->poly][e->edge] = static_cast<int>(g);
    }
    Vec2<T> ea = edge_vec(gl.a), eb = edge_vec(gl.b);
    Vec2<T> sum = ea + eb;
    double sc = std::sqrt(to_double(norm2(ea)));
    if (sign(sum.x, sc) != 0 || sign(sum.y, sc) != 0) {
      if (detail::cross_sign(ea, eb) != 0)
        throw GluingMismatch("gluing " + std::to_string(g) + ": edges are not parallel");
      throw GluingMismatch("gluing " + std::to_string(g) + ": edge lengths differ or edges are not opposite");
    }
  }
  for (int p = 0; p < P; ++p)
    for (std::size_t i = 0; i < used[p].size(); ++i)
      if (used[p][i] < 0)
        throw InputError("edge " + std::to_string(i) + " of polygon '" + raw.ids[p] + "' is not glued");

  detail::UnionFind uf(offset[P]);
  for (const Gluing& gl : raw.gluings) {
    int na = static_cast<int>(s.polygons[gl.a.poly].size());
    int nb = static_cast<int>(s.polygons[gl.b.poly].size());
    uf.unite(offset[gl.a.poly] + gl.a.edge, offset[gl.b.poly] + (gl.b.edge + 1) % nb);
    uf.unite(offset[gl.a.poly] + (gl.a.edge + 1) % na, offset[gl.b.poly] + gl.b.edge);
  }
  std::map<int, int> class_of_root;
  s.corner_class.resize(P);
  for (int p = 0; p < P; ++p) {
    const auto& poly = s.polygons[p];
    const std::size_t n = poly.size();
    s.corner_class[p].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      int r = uf.find(offset[p] + static_cast<int>(i));
      auto it = class_of_root.find(r);
      if (it == class_of_root.end()) {
        it = class_of_root.emplace(r, static_cast<int>(s.cones.size())).first;
        s.cones.emplace_back();
      }
      int c = it->second;
      s.corner_class[p][i] = c;
      Vec2<double> a = to_double(poly[(i + 1) % n] - poly[i]);
      Vec2<double> b = to_double(poly[(i + n - 1) % n] - poly[i]);
      double ang = std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
      if (ang <= 0) ang += 2 * std::numbers::pi;
      s.cones[c].angle += ang;
      s.cones[c].corners.push_back({p, static_cast<int>(i)});
    }
  }
  for (auto& c : s.cones) {
    double k = std::round(c.angle / (2 * std::numbers::pi));
    if (k < 1 || std::fabs(c.angle - 2 * std::numbers::pi * k) > 1e-6)
      throw InputError("cone angle is not a positive multiple of 2 pi");
    c.k = static_cast<int>(k);
  }
  int chi = static_cast<int>(s.cones.size()) - static_cast<int>(raw.gluings.size()) + P;
  if (chi > 2 || (2 - chi) % 2 != 0) throw InputError("gluing does not give a closed orientable surface");
  s.genus = (2 - chi) / 2;

  // Ear clipping. Polygon edge (p, i) and diagonals are mapped to triangle edges.
  std::map<std::pair<int, int>, std::pair<int, int>> poly_edge;
  for (int p = 0; p < P; ++p) {
    const auto& poly = s.polygons[p];
    const int n = static_cast<int>(poly.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<std::array<int, 3>> out;
    while (idx.size() > 3) {
      const int m = static_cast<int>(idx.size());
      bool found = false;
      for (int i = 0; i < m && !found; ++i) {
        int a = idx[(i + m - 1) % m], b = idx[i], c = idx[(i + 1) % m];
        if (orient(poly[a], poly[b], poly[c]) <= 0) continue;
        bool blocked = false;
        for (int j : idx) {
          if (j == a || j == b || j == c) continue;
          if (detail::in_closed_triangle(poly[a], poly[b], poly[c], poly[j])) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
        out.push_back({a, b, c});
        idx.erase(idx.begin() + i);
        found = true;
      }
      if (!found) throw InputError("could not triangulate polygon '" + raw.ids[p] + "'");
    }
    if (orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) <= 0)
      throw InputError("could not triangulate polygon '" + raw.ids[p] + "'");
    out.push_back({idx[0], idx[1], idx[2]});

    std::map<std::pair<int, int>, std::pair<int, int>> diag;
    for (const auto& t : out) {
      Tri<T> tri;
      tri.poly = p;
      const int k = static_cast<int>(s.tris.size());
      for (int e = 0; e < 3; ++e) {
        tri.p[e] = poly[t[e]];
        tri.cone[e] = s.corner_class[p][t[e]];
      }
      s.tris.push_back(tri);
      for (int e = 0; e < 3; ++e) {
        int u = t[e], v = t[(e + 1) % 3];
        if (v == (u + 1) % n) {
          poly_edge[{p, u}] = {k, e};
        } else {
          auto it = diag.find({v, u});
          if (it != diag.end()) {
            auto [k2, e2] = it->second;
            s.tris[k].nb[e] = {k2, e2, Vec2<T>{T(0), T(0)}, 0};
            s.tris[k2].nb[e2] = {k, e, Vec2<T>{T(0), T(0)}, 0};
            diag.erase(it);
          } else {
            diag[{u, v}] = {k, e};
          }
        }
      }
    }
    if (!diag.empty()) throw InputError("inconsistent triangulation of polygon '" + raw.ids[p] + "'");
  }
  for (std::size_t g = 0; g < raw.gluings.size(); ++g) {
    const Gluing& gl = raw.gluings[g];
    auto [ka, ea] = poly_edge.at({gl.a.poly, gl.a.edge});
    auto [kb, eb] = poly_edge.at({gl.b.poly, gl.b.edge});
    const int code = static_cast<int>(g) + 1;
    s.tris[ka].nb[ea] = {kb, eb, s.tris[ka].p[ea] - s.tris[kb].p[(eb + 1) % 3], code};
    s.tris[kb].nb[eb] = {ka, ea, s.tris[kb].p[eb] - s.tris[ka].p[(ea + 1) % 3], -code};
  }
  return s;
}

template <class T>
BaseLocation<T> locate_in_polygon(const Surface<T>& s, int poly, const Vec2<T>& p) {
  for (std::size_t k = 0; k < s.tris.size(); ++k) {
    const Tri<T>& t = s.tris[k];
    if (t.poly != poly) continue;
    for (const auto& v : t.p)
      if (detail::same_point(v, p)) throw InputError("base point is a cone point");
    if (detail::in_closed_triangle(t.p[0], t.p[1], t.p[2], p)) return {static_cast<int>(k), p, p};
  }
  throw InputError("base point lies outside the polygon");
}

template <class T>
BaseLocation<T> default_base(const Surface<T>& s) {
  Vec2<T> c = polygon_centroid(s.polygons[0]);
  try {
    return locate_in_polygon(s, 0, c);
  } catch (const InputError&) {
    for (const auto& t : s.tris)
      if (t.poly == 0) {
        Vec2<T> g{T((t.p[0].x + t.p[1].x + t.p[2].x) / 3), T((t.p[0].y + t.p[1].y + t.p[2].y) / 3)};
        return locate_in_polygon(s, 0, g);
      }
  }
  throw InputError("no base point available");
}

template <class T>
std::optional<BaseLocation<T>> Chart<T>::locate(const Vec2<T>& p) const {
  if (find(p) >= 0) return std::nullopt;
  Vec2<T> d = p - base;
  for (const auto& sec : sectors) {
    if (!sec.root && !(detail::cross_sign(sec.lo, d) > 0 && detail::cross_sign(d, sec.hi) > 0)) continue;
    if (!detail::in_closed_triangle(sec.corners[0], sec.corners[1], sec.corners[2], p)) continue;
    return BaseLocation<T>{sec.tri, p - sec.offset, p};
  }
  return std::nullopt;
}

template <class T>
std::vector<int> Chart<T>::path_of(int sector) const {
  std::vector<int> path;
  for (int s = sector; s >= 0; s = sectors[s].parent)
    if (sectors[s].crossing != 0) path.push_back(sectors[s].crossing);
  std::reverse(path.begin(), path.end());
  return path;
}

template <class T>
int Chart<T>::find(const Vec2<T>& p) const {
  if constexpr (Scalar<T>::exact) {
    auto it = index.find({Rational(p.x), Rational(p.y)});
    return it == index.end() ? -1 : it->second;
  } else {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (detail::same_point(points[i].pos, p)) return static_cast<int>(i);
    return -1;
  }
}

template <class T>
Chart<T> develop(const Surface<T>& s, const BaseLocation<T>& base, const T& radius) {
  Chart<T> ch;
  ch.base = base.dev;
  ch.loc = base;
  ch.radius = radius;
  ch.surface = &s;
  const Vec2<T> b = base.dev;
  const T r2 = T(radius * radius);
  if (sign(radius) < 0) throw InputError("negative radius");

  struct Found {
    Vec2<T> pos;
    int cone;
    int sector;
  };
  std::vector<Found> found;
  auto record = [&](const Vec2<T>& p, int cone, int sector) {
    if (sign(T(norm2(p - b) - r2), to_double(r2)) > 0) return;
    found.push_back({p, cone, sector});
  };

  struct State {
    int tri, edge;
    Vec2<T> off, lo, hi;
    int parent;
  };
  std::deque<State> queue;

  // Root triangles: the one holding the base, and its neighbour if the base sits on an edge.
  const Tri<T>& t0 = s.tris.at(base.tri);
  Vec2<T> off0 = base.dev - base.local;
  std::vector<std::pair<int, Vec2<T>>> roots{{base.tri, off0}};
  std::vector<int> skip_edge{-1};
  for (int e = 0; e < 3; ++e) {
    if (detail::same_point(t0.p[e], base.local)) throw InputError("base point is a cone point");
    if (detail::on_segment(t0.p[e], t0.p[(e + 1) % 3], base.local)) {
      if (skip_edge[0] >= 0) throw InputError("base point is a cone point");
      skip_edge[0] = e;
    }
  }
  if (skip_edge[0] >= 0) {
    const auto& nb = t0.nb[skip_edge[0]];
    roots.push_back({nb.tri, off0 + nb.shift});
    skip_edge.push_back(nb.edge);
  }
  for (std::size_t r = 0; r < roots.size(); ++r) {
    auto [k, off] = roots[r];
    const Tri<T>& t = s.tris[k];
    Sector<T> sec;
    sec.tri = k;
    sec.offset = off;
    for (int e = 0; e < 3; ++e) sec.corners[e] = t.p[e] + off;
    sec.root = true;
    if (r == 1) sec.crossing = t0.nb[skip_edge[0]].crossing;
    const int sid = static_cast<int>(ch.sectors.size());
    ch.sectors.push_back(sec);
    for (int e = 0; e < 3; ++e) record(sec.corners[e], t.cone[e], sid);
    for (int e = 0; e < 3; ++e) {
      if (e == skip_edge[r]) continue;
      Vec2<T> u = sec.corners[e] - b, v = sec.corners[(e + 1) % 3] - b;
      int c = detail::cross_sign(u, v);
      if (c == 0) continue;
      if (c < 0) std::swap(u, v);
      queue.push_back({k, e, off, u, v, sid});
    }
  }

  while (!queue.empty()) {
    State st = queue.front();
    queue.pop_front();
    const Tri<T>& t = s.tris[st.tri];
    Vec2<T> P = t.p[st.edge] + st.off, Q = t.p[(st.edge + 1) % 3] + st.off;
    if (sign(T(detail::dist2_to_segment(b, P, Q) - r2), to_double(r2)) > 0) continue;
    const TriNeighbor<T>& nb = t.nb[st.edge];
    const Tri<T>& t2 = s.tris[nb.tri];
    Sector<T> sec;
    sec.tri = nb.tri;
    sec.offset = st.off + nb.shift;
    for (int e = 0; e < 3; ++e) sec.corners[e] = t2.p[e] + sec.offset;
    sec.lo = st.lo;
    sec.hi = st.hi;
    sec.parent = st.parent;
    sec.crossing = nb.crossing;
    const int sid = static_cast<int>(ch.sectors.size());
    ch.sectors.push_back(sec);

    const int apex = (nb.edge + 2) % 3;
    Vec2<T> da = sec.corners[apex] - b;
    if (detail::cross_sign(st.lo, da) > 0 && detail::cross_sign(da, st.hi) > 0)
      record(sec.corners[apex], t2.cone[apex], sid);
    for (int step = 1; step <= 2; ++step) {
      const int e2 = (nb.edge + step) % 3;
      Vec2<T> u = sec.corners[e2] - b, v = sec.corners[(e2 + 1) % 3] - b;
      int c = detail::cross_sign(u, v);
      if (c == 0) continue;
      if (c < 0) std::swap(u, v);
      Vec2<T> lo = detail::cross_sign(st.lo, u) > 0 ? u : st.lo;
      Vec2<T> hi = detail::cross_sign(v, st.hi) > 0 ? v : st.hi;
      if (detail::cross_sign(lo, hi) <= 0) continue;
      queue.push_back({nb.tri, e2, sec.offset, lo, hi, sid});
    }
  }

  std::sort(found.begin(), found.end(), [&](const Found& x, const Found& y) {
    T dx = norm2(x.pos - b), dy = norm2(y.pos - b);
    if (dx != dy) return dx < dy;
    return lex_less(x.pos, y.pos);
  });
  for (const auto& f : found) {
    if (!ch.points.empty()) {
      bool dup = false;
      for (std::size_t i = ch.points.size(); i-- > 0;) {
        if (detail::same_point(ch.points[i].pos, f.pos)) {
          dup = true;
          break;
        }
        if constexpr (Scalar<T>::exact) break;
      }
      if constexpr (Scalar<T>::exact) dup = ch.index.count({Rational(f.pos.x), Rational(f.pos.y)}) > 0;
      if (dup) continue;
    }
    DevPoint<T> dp{f.pos, f.cone, ch.path_of(f.sector)};
    if constexpr (Scalar<T>::exact) ch.index[{Rational(f.pos.x), Rational(f.pos.y)}] = static_cast<int>(ch.points.size());
    ch.points.push_back(std::move(dp));
  }
  return ch;
}

namespace detail {

template <class T>
std::optional<BaseLocation<T>> interior_base(const Chart<T>& chart, const Subconic<T>& u) {
  const QForm3<T>& q = u.q;
  Mat2<T> L = q.lower();
  Vec2<T> c = -(L.inverse() * Vec2<T>{q.a13, q.a23});
  std::vector<Vec2<T>> tries{c};
  std::vector<Vec2<T>> rim;
  for (const auto& z : chart.points)
    if (contains(u, z.pos) == 0) rim.push_back(z.pos);
  for (const auto& z : rim)
    for (int k = 1; k <= 10; ++k) {
      T t = T(1) / T(1 << k);
      tries.push_back(z + t * (c - z));
    }
  for (std::size_t i = 0; i < rim.size(); ++i)
    for (std::size_t j = i + 1; j < rim.size(); ++j) tries.push_back(T(T(1) / T(2)) * (rim[i] + rim[j]));
  for (const auto& p : tries) {
    if (contains(u, p) >= 0) continue;
    if (auto loc = chart.locate(p)) return loc;
  }
  return std::nullopt;
}

}  // namespace detail

template <class T>
FitResult subconic_fits(const Chart<T>& chart, const Subconic<T>& u) {
  return subconic_fits(chart, u, static_cast<std::vector<Vec2<T>>*>(nullptr));
}

template <class T>
FitResult subconic_fits(const Chart<T>& chart, const Subconic<T>& u, std::vector<Vec2<T>>* boundary) {
  FitResult res;
  if (u.kind != Kind::EllipseInterior && u.kind != Kind::Strip) {
    res.verdict = Fit::DoesNotFit;
    return res;
  }
  const QForm3<T>& q = u.q;
  for (const auto& z : chart.points)
    if (contains(u, z.pos) < 0) {
      res.verdict = Fit::DoesNotFit;
      return res;
    }
  const Vec2<T>& b = chart.base;
  if (u.kind == Kind::EllipseInterior && contains(u, b) >= 0) {
    // redevelop from a visible point inside the ellipse
    if (!chart.surface) {
      res.verdict = Fit::Inconclusive;
      return res;
    }
    if (ellipse_in_disc(to_double(q), to_double(b), to_double(chart.radius)) <= 0) {
      res.verdict = Fit::Inconclusive;
      return res;
    }
    std::optional<BaseLocation<T>> loc = detail::interior_base(chart, u);
    if (!loc) {
      res.verdict = Fit::Inconclusive;
      return res;
    }
    double reach = ellipse_max_distance(to_double(q), to_double(loc->dev));
    T radius = T(static_cast<long>(std::ceil(reach)) + 1);
    Chart<T> inner = develop(*chart.surface, *loc, radius);
    return subconic_fits(inner, u, boundary);
  }
  if (contains(u, b) >= 0) {
    // Rays hidden behind cone points must stay out of the open region.
    for (const auto& z : chart.points) {
      Vec2<T> d = z.pos - b;
      T A = T(q.a11 * d.x * d.x + 2 * q.a12 * d.x * d.y + q.a22 * d.y * d.y);
      T B = T(2 * q.polar(Vec3<T>(z.pos), Vec3<T>{d.x, d.y, T(0)}));
      T C = q(z.pos);
      double sc = eval_scale(q, z.pos);
      int sa = sign(A, sc), sb = sign(B, sc);
      bool enters = false;
      if (sa < 0)
        enters = true;
      else if (sa == 0)
        enters = sb < 0;
      else
        enters = sb < 0 && sign(T(B * B - 4 * A * C), sc * sc) > 0;
      if (enters) {
        res.verdict = Fit::DoesNotFit;
        return res;
      }
    }
  }
  if (boundary)
    for (const auto& z : chart.points)
      if (contains(u, z.pos) == 0) boundary->push_back(z.pos);
  if (u.kind == Kind::Strip) {
    res.verdict = Fit::Fits;
    res.truncated = true;
    return res;
  }
  QForm3<double> qd{to_double(q.a11), to_double(q.a22), to_double(q.a33),
                    to_double(q.a12), to_double(q.a13), to_double(q.a23)};
  int in = ellipse_in_disc(qd, to_double(b), to_double(chart.radius));
  res.verdict = in > 0 ? Fit::Fits : Fit::Inconclusive;
  return res;
}

InradiusBound inradius_bound_double(const Surface<double>& s);

template <class T>
InradiusBound inradius_bound(const Surface<T>& s) {
  if constexpr (Scalar<T>::exact)
    return inradius_bound_double(build_surface<double>(s.raw));
  else
    return inradius_bound_double(s);
}

template <class T>
QForm3<double> to_double(const QForm3<T>& q) {
  return {to_double(q.a11), to_double(q.a22), to_double(q.a33), to_double(q.a12), to_double(q.a13), to_double(q.a23)};
}

}  // namespace flatconic
