#pragma once

// Template bodies for complex.hpp.

#include <algorithm>
#include <deque>
#include <functional>
#include <thread>

namespace flatconic {

namespace detail {

template <class T>
T rational_above(double v) {
  if constexpr (Scalar<T>::exact) {
    Rational r(static_cast<long>(std::ceil(v * 64.0)));
    r /= 64;
    return r;
  } else
    return v;
}

/// Bucket grid over a point set for box queries.
template <class T>
struct PointIndex {
  std::vector<Vec2<T>> pts;
  std::vector<Vec2<double>> d;
  double x0 = 0, y0 = 0, cell = 1;
  int nx = 1, ny = 1;
  std::vector<std::vector<int>> buckets;

  explicit PointIndex(std::vector<Vec2<T>> p) : pts(std::move(p)) {
    double x1 = 0, y1 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d.push_back(to_double(pts[i]));
      if (i == 0) {
        x0 = x1 = d[0].x;
        y0 = y1 = d[0].y;
      }
      x0 = std::min(x0, d[i].x);
      y0 = std::min(y0, d[i].y);
      x1 = std::max(x1, d[i].x);
      y1 = std::max(y1, d[i].y);
    }
    double span = std::max({x1 - x0, y1 - y0, 1e-9});
    int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
    cell = span / side;
    nx = static_cast<int>((x1 - x0) / cell) + 1;
    ny = static_cast<int>((y1 - y0) / cell) + 1;
    buckets.assign(static_cast<std::size_t>(nx) * ny, {});
    for (std::size_t i = 0; i < pts.size(); ++i) buckets[bucket(d[i].x, d[i].y)].push_back(static_cast<int>(i));
  }

  std::size_t bucket(double x, double y) const {
    int i = std::clamp(static_cast<int>((x - x0) / cell), 0, nx - 1);
    int j = std::clamp(static_cast<int>((y - y0) / cell), 0, ny - 1);
    return static_cast<std::size_t>(j) * nx + i;
  }

  template <class F>
  bool any_in_box(double ax, double ay, double bx, double by, F&& f) const {
    double e = 1e-9 * (1 + std::fabs(ax) + std::fabs(ay) + std::fabs(bx) + std::fabs(by));
    int i0 = std::clamp(static_cast<int>((ax - e - x0) / cell), 0, nx - 1);
    int i1 = std::clamp(static_cast<int>((bx + e - x0) / cell), 0, nx - 1);
    int j0 = std::clamp(static_cast<int>((ay - e - y0) / cell), 0, ny - 1);
    int j1 = std::clamp(static_cast<int>((by + e - y0) / cell), 0, ny - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        for (int k : buckets[static_cast<std::size_t>(j) * nx + i]) {
          const auto& q = d[k];
          if (q.x < ax - e || q.x > bx + e || q.y < ay - e || q.y > by + e) continue;
          if (f(k)) return true;
        }
    return false;
  }

  int orient_idx(int i, int j, int k) const {
    const auto &a = d[i], &b = d[j], &c = d[k];
    double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    double s = (std::fabs(b.x - a.x) + std::fabs(b.y - a.y)) * (std::fabs(c.x - a.x) + std::fabs(c.y - a.y));
    if constexpr (Scalar<T>::exact) {
      if (std::fabs(v) > 1e-9 * s) return v > 0 ? 1 : -1;
    }
    return orient(pts[i], pts[j], pts[k]);
  }

  /// Closed triangle (i, j, k), counterclockwise, contains no point other than its corners.
  bool triangle_empty(int i, int j, int k) const {
    double ax = std::min({d[i].x, d[j].x, d[k].x}), bx = std::max({d[i].x, d[j].x, d[k].x});
    double ay = std::min({d[i].y, d[j].y, d[k].y}), by = std::max({d[i].y, d[j].y, d[k].y});
    return !any_in_box(ax, ay, bx, by, [&](int m) {
      if (m == i || m == j || m == k) return false;
      return orient_idx(i, j, m) >= 0 && orient_idx(j, k, m) >= 0 && orient_idx(k, i, m) >= 0;
    });
  }

  /// For a strictly convex counterclockwise polygon, the edge beyond which m lies if m
  /// extends it to a strictly convex polygon, else -1.
  int beyond_one_edge(const std::vector<int>& poly, int m) const {
    int neg = -1, n = static_cast<int>(poly.size());
    for (int e = 0; e < n; ++e) {
      int o = orient_idx(poly[e], poly[(e + 1) % n], m);
      if (o == 0) return -1;
      if (o < 0) {
        if (neg >= 0) return -1;
        neg = e;
      }
    }
    if (neg < 0) return -1;
    // also the neighbouring edges must see m strictly on their inner side
    return neg;
  }
};

template <class T>
bool contains_point(const std::vector<Vec2<T>>& v, const Vec2<T>& p) {
  for (const auto& q : v)
    if (same_point(q, p)) return true;
  return false;
}

template <class T>
std::vector<Vec2<T>> unique_points(std::vector<Vec2<T>> v) {
  std::sort(v.begin(), v.end(), [](const Vec2<T>& a, const Vec2<T>& b) { return lex_less(a, b); });
  std::vector<Vec2<T>> out;
  for (const auto& p : v)
    if (out.empty() || !same_point(out.back(), p)) out.push_back(p);
  return out;
}

template <class T>
std::vector<Vec2<T>> boundary_points(const Chart<T>& ch, const Subconic<T>& u) {
  std::vector<Vec2<T>> out;
  for (const auto& z : ch.points)
    if (contains(u, z.pos) == 0) out.push_back(z.pos);
  return out;
}

template <class T>
Vec2<T> centroid(const std::vector<Vec2<T>>& v) {
  T sx(0), sy(0);
  for (const auto& p : v) {
    sx += p.x;
    sy += p.y;
  }
  T n(static_cast<int>(v.size()));
  return {T(sx / n), T(sy / n)};
}

// A point inside the triangle of the first three points that the chart sees, centroid first.
template <class T>
std::optional<BaseLocation<T>> locate_inside(const Chart<T>& ch, const std::vector<Vec2<T>>& z) {
  auto loc = ch.locate(centroid(z));
  for (int total = 4; !loc && total <= 9; ++total)
    for (int i = 1; !loc && i < total - 1; ++i)
      for (int j = 1; !loc && i + j < total; ++j) {
        int k = total - i - j;
        T w(total);
        Vec2<T> p{T((i * z[0].x + j * z[1].x + k * z[2].x) / w), T((i * z[0].y + j * z[1].y + k * z[2].y) / w)};
        loc = ch.locate(p);
      }
  return loc;
}

template <class T>
double max_dist(const Vec2<T>& c, const std::vector<Vec2<T>>& v) {
  double m = 0;
  for (const auto& p : v) m = std::max(m, std::sqrt(to_double(norm2(p - c))));
  return m;
}

template <class T>
std::string coeff_key(const T& a, const T& b, const T& c) {
  T m(0);
  for (const T* x : {&a, &b, &c})
    if (sign(*x) != 0) {
      m = Scalar<T>::abs(*x);
      break;
    }
  if constexpr (Scalar<T>::exact) {
    return to_string(T(a / m)) + "|" + to_string(T(b / m)) + "|" + to_string(T(c / m));
  } else {
    double s = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
    auto r = [&](double v) {
      double k = std::round(v / s * 1e7) / 1e7;
      if (k == 0) k = 0;
      return Scalar<double>::str(k);
    };
    return r(a) + "|" + r(b) + "|" + r(c);
  }
}

/// Half-plane a*t2 + b*t3 + c >= 0 in the T-plane, with the cone points that produced it.
template <class T>
struct HalfPlane {
  T a, b, c;
  std::vector<Vec2<T>> who;
  int bound = -1;  // 0, 1, 2 for t1, t2, t3 >= 0
  T at(const T& u, const T& v) const { return T(a * u + b * v + c); }
  double scale() const { return std::max({std::fabs(to_double(a)), std::fabs(to_double(b)), std::fabs(to_double(c))}); }
  int side(const T& u, const T& v) const { return sign(at(u, v), scale() * (1 + std::fabs(to_double(u)) + std::fabs(to_double(v)))); }
};

template <class T>
struct PolyVertex {
  T u, v;
  int label;  // half-plane carrying the edge to the next vertex
};

template <class T>
std::vector<HalfPlane<T>> t_constraints(const NaturalBasis<T>& nb, const Chart<T>& ch, bool& infeasible) {
  std::vector<HalfPlane<T>> hs;
  std::map<std::string, int> by_key;
  auto add = [&](HalfPlane<T> h) {
    std::string k = coeff_key(h.a, h.b, h.c);
    auto it = by_key.find(k);
    if (it == by_key.end()) {
      by_key[k] = static_cast<int>(hs.size());
      hs.push_back(std::move(h));
    } else {
      auto& g = hs[it->second];
      g.who.insert(g.who.end(), h.who.begin(), h.who.end());
      if (h.bound >= 0) g.bound = h.bound;
    }
  };
  add({T(-1), T(-1), T(1), {}, 0});
  add({T(1), T(0), T(0), {}, 1});
  add({T(0), T(1), T(0), {}, 2});
  infeasible = false;
  for (const auto& zp : ch.points) {
    const Vec2<T>& w = zp.pos;
    if (contains_point(std::vector<Vec2<T>>(nb.z.begin(), nb.z.end()), w)) continue;
    T d1 = nb.d[0](w), d2 = nb.d[1](w), d3 = nb.d[2](w);
    HalfPlane<T> h{T(d2 - d1), T(d3 - d1), d1, {w}, -1};
    double sc = h.scale();
    if (sign(h.a, sc) == 0 && sign(h.b, sc) == 0) {
      if (sign(h.c) < 0) infeasible = true;
      continue;
    }
    add(std::move(h));
  }
  return hs;
}

template <class T>
std::vector<PolyVertex<T>> clip(std::vector<PolyVertex<T>> poly, const HalfPlane<T>& h, int label) {
  std::size_t n = poly.size();
  if (n == 0) return poly;
  std::vector<int> s(n);
  std::vector<T> f(n);
  bool any_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = h.at(poly[i].u, poly[i].v);
    s[i] = h.side(poly[i].u, poly[i].v);
    if (s[i] < 0) any_neg = true;
  }
  if (!any_neg) return poly;
  std::vector<PolyVertex<T>> out;
  auto cut = [&](std::size_t i, std::size_t j, int lab) {
    T r = T(f[i] / (f[i] - f[j]));
    out.push_back({T(poly[i].u + r * (poly[j].u - poly[i].u)), T(poly[i].v + r * (poly[j].v - poly[i].v)), lab});
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    if (s[i] >= 0) {
      if (s[j] >= 0) {
        out.push_back(poly[i]);
      } else if (s[i] > 0) {
        out.push_back(poly[i]);
        cut(i, j, label);
      } else {
        out.push_back({poly[i].u, poly[i].v, label});
      }
    } else if (s[j] > 0) {
      cut(i, j, poly[i].label);
    }
  }
  return out;
}

template <class T>
int polygon_area_sign(const std::vector<PolyVertex<T>>& p) {
  if (p.size() < 3) return 0;
  T a(0);
  double sc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& x = p[i];
    const auto& y = p[(i + 1) % p.size()];
    a += x.u * y.v - x.v * y.u;
    sc = std::max(sc, std::fabs(to_double(x.u)) + std::fabs(to_double(x.v)));
  }
  return sign(a, sc * sc);
}

template <class T>
bool same_set(std::vector<Vec2<T>> a, std::vector<Vec2<T>> b) {
  return set_key(std::move(a)) == set_key(std::move(b));
}

}  // namespace detail

/// Half the gradient of q at p.
template <class T>
Vec2<T> L_times(const QForm3<T>& q, const Vec2<T>& p) {
  return {T(q.a11 * p.x + q.a12 * p.y + q.a13), T(q.a12 * p.x + q.a22 * p.y + q.a23)};
}

template <class T>
RigidConic<T> make_rigid(const Subconic<T>& u, std::vector<Vec2<T>> pts, bool truncated) {
  RigidConic<T> rc;
  rc.u = u;
  rc.truncated = truncated;
  pts = detail::unique_points(std::move(pts));
  const QForm3<T>& q = u.q;
  if (u.kind == Kind::EllipseInterior && !pts.empty()) {
    Mat2<T> L = q.lower();
    Vec2<T> c = -(L.inverse() * Vec2<T>{q.a13, q.a23});
    auto half = [](const Vec2<T>& v) { return (sign(v.y) > 0 || (sign(v.y) == 0 && sign(v.x) > 0)) ? 0 : 1; };
    std::sort(pts.begin(), pts.end(), [&](const Vec2<T>& a, const Vec2<T>& b) {
      Vec2<T> da = a - c, db = b - c;
      int ha = half(da), hb = half(db);
      if (ha != hb) return ha < hb;
      return detail::cross_sign(da, db) > 0;
    });
    auto first = std::min_element(pts.begin(), pts.end(), [](const Vec2<T>& a, const Vec2<T>& b) { return lex_less(a, b); });
    std::rotate(pts.begin(), first, pts.end());
    rc.components.push_back(pts);
  } else if (u.kind == Kind::Strip && !pts.empty()) {
    Vec2<T> n = sign(q.a11, q.scale()) != 0 ? Vec2<T>{q.a11, q.a12} : Vec2<T>{q.a12, q.a22};
    Vec2<T> v{T(-n.y), n.x};
    std::vector<std::pair<T, std::vector<Vec2<T>>>> groups;
    double sc = std::sqrt(to_double(norm2(n)));
    for (const auto& p : pts) {
      T h = dot(n, p);
      bool placed = false;
      for (auto& g : groups)
        if (sign(T(g.first - h), sc * (1 + std::fabs(to_double(h)))) == 0) {
          g.second.push_back(p);
          placed = true;
          break;
        }
      if (!placed) groups.push_back({h, {p}});
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& g : groups) {
      const Vec2<T>& p = g.second.front();
      Vec2<T> grad = L_times(q, p);
      Vec2<T> inward = sign(dot(grad, n), q.scale() * sc) < 0 ? n : -n;
      Vec2<T> d = detail::cross_sign(v, inward) > 0 ? v : -v;
      std::sort(g.second.begin(), g.second.end(),
                [&](const Vec2<T>& a, const Vec2<T>& b) { return dot(d, a) < dot(d, b); });
      rc.components.push_back(g.second);
    }
  } else {
    rc.components.push_back(pts);
  }
  return rc;
}

namespace detail {
template <class T>
std::optional<std::pair<int, int>> position(const RigidConic<T>& u, const Vec2<T>& p) {
  for (std::size_t c = 0; c < u.components.size(); ++c)
    for (std::size_t i = 0; i < u.components[c].size(); ++i)
      if (same_point(u.components[c][i], p)) return std::pair<int, int>{static_cast<int>(c), static_cast<int>(i)};
  return std::nullopt;
}
}  // namespace detail

template <class T>
std::optional<Vec2<T>> successor(const RigidConic<T>& u, const Vec2<T>& p) {
  auto pos = detail::position(u, p);
  if (!pos) return std::nullopt;
  const auto& comp = u.components[pos->first];
  int n = static_cast<int>(comp.size());
  if (u.u.kind == Kind::EllipseInterior) return comp[(pos->second + 1) % n];
  if (pos->second + 1 < n) return comp[pos->second + 1];
  return std::nullopt;
}

template <class T>
std::optional<Vec2<T>> predecessor(const RigidConic<T>& u, const Vec2<T>& p) {
  auto pos = detail::position(u, p);
  if (!pos) return std::nullopt;
  const auto& comp = u.components[pos->first];
  int n = static_cast<int>(comp.size());
  if (u.u.kind == Kind::EllipseInterior) return comp[(pos->second + n - 1) % n];
  if (pos->second > 0) return comp[pos->second - 1];
  return std::nullopt;
}

template <class T>
std::vector<RigidConic<T>> rigid_conics(const Chart<T>& chart) {
  std::vector<Vec2<T>> P;
  for (const auto& z : chart.points) P.push_back(z.pos);
  detail::PointIndex<T> idx(P);
  const int n = static_cast<int>(P.size());
  std::map<std::string, RigidConic<T>> found;
  std::set<std::string> rejected;

  auto consider = [&](const Subconic<T>& u, bool strip) {
    std::string key = form_key(u.q);
    if (found.count(key) || rejected.count(key)) return;
    std::vector<Vec2<T>> rim;
    FitResult fr = subconic_fits(chart, u, &rim);
    if (fr.verdict != Fit::Fits) {
      rejected.insert(key);
      return;
    }
    found[key] = make_rigid(u, rim, strip || fr.truncated);
  };

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        int o = idx.orient_idx(i, j, k);
        if (o == 0) continue;
        std::vector<int> tri = o > 0 ? std::vector<int>{i, j, k} : std::vector<int>{i, k, j};
        if (!idx.triangle_empty(tri[0], tri[1], tri[2])) continue;
        for (int l = k + 1; l < n; ++l) {
          int e = idx.beyond_one_edge(tri, l);
          if (e < 0) continue;
          if (!idx.triangle_empty(tri[e], l, tri[(e + 1) % 3])) continue;
          std::vector<int> quad = tri;
          quad.insert(quad.begin() + e + 1, l);
          for (int m = l + 1; m < n; ++m) {
            int e2 = idx.beyond_one_edge(quad, m);
            if (e2 < 0) continue;
            if (!idx.triangle_empty(quad[e2], m, quad[(e2 + 1) % 4])) continue;
            std::array<Vec2<T>, 5> five{P[quad[0]], P[quad[1]], P[quad[2]], P[quad[3]], P[m]};
            Subconic<T> u;
            try {
              u = conic_through_five(five);
            } catch (const InputError&) {
              continue;
            }
            if (u.kind != Kind::EllipseInterior) continue;
            consider(u, false);
          }
        }
      }

  // Strips: for each direction, consecutive parallel lines through chart points.
  std::map<std::string, Vec2<T>> dirs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec2<T> v = P[j] - P[i];
      Vec2<T> c;
      if constexpr (Scalar<T>::exact) {
        c = sign(v.x) != 0 ? Vec2<T>{T(1), T(v.y / v.x)} : Vec2<T>{T(0), T(1)};
      } else {
        double len = std::hypot(v.x, v.y);
        c = {v.x / len, v.y / len};
        if (c.y < -1e-12 || (std::fabs(c.y) <= 1e-12 && c.x < 0)) c = -c;
      }
      dirs.emplace(point_key(c), c);
    }
  const Vec2<T>& b = chart.base;
  for (const auto& [key, v] : dirs) {
    Vec2<T> nn{T(-v.y), v.x};
    double sc = std::sqrt(to_double(norm2(nn)));
    std::vector<std::pair<T, int>> h;
    for (int i = 0; i < n; ++i) h.push_back({dot(nn, P[i]), i});
    std::sort(h.begin(), h.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
    std::vector<std::pair<T, std::vector<int>>> groups;
    for (const auto& [val, i] : h) {
      if (!groups.empty() && sign(T(val - groups.back().first), sc * (1 + std::fabs(to_double(val)))) == 0)
        groups.back().second.push_back(i);
      else
        groups.push_back({val, {i}});
    }
    T hb = dot(nn, b);
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      const T& h0 = groups[g].first;
      const T& h1 = groups[g + 1].first;
      // a strip missing the base is crossed by a ray through a near boundary point
      if (sign(T(hb - h0), sc) < 0 || sign(T(h1 - hb), sc) < 0) continue;
      if (groups[g].second.size() < 2 || groups[g + 1].second.size() < 2) continue;
      T s = T(h0 + h1);
      QForm3<T> q{T(nn.x * nn.x), T(nn.y * nn.y), T(h0 * h1), T(nn.x * nn.y), T(-s * nn.x / 2), T(-s * nn.y / 2)};
      Subconic<T> u = make_subconic(canonical(q));
      if (u.kind != Kind::Strip) continue;
      consider(u, true);
    }
  }
  std::vector<RigidConic<T>> out;
  for (auto& [k, rc] : found) out.push_back(std::move(rc));
  std::stable_sort(out.begin(), out.end(), [](const RigidConic<T>& a, const RigidConic<T>& c) {
    return static_cast<int>(a.u.kind) < static_cast<int>(c.u.kind);
  });
  return out;
}

template <class T>
Context<T> make_context(const Surface<T>& s, const T& radius, std::optional<BaseLocation<T>> base) {
  Context<T> ctx;
  ctx.surface = &s;
  ctx.chart = develop(s, base ? *base : default_base(s), radius);
  ctx.inradius = inradius_bound(s);
  return ctx;
}

template <class T>
CellResult<T> two_cell(const Context<T>& ctx, const std::array<Vec2<T>, 3>& zin, const BaseLocation<T>& x) {
  CellResult<T> res;
  if (orient(zin[0], zin[1], zin[2]) == 0) {
    res.reason = "collinear triple";
    return res;
  }
  NaturalBasis<T> nb = natural_basis(zin);
  std::vector<Vec2<T>> zv(nb.z.begin(), nb.z.end());
  double r = ctx.options.radius_factor * (detail::max_dist(x.dev, zv) + ctx.inradius.upper);
  for (int attempt = 0; attempt <= ctx.options.max_doublings; ++attempt, r *= 2) {
    T R = detail::rational_above<T>(r);
    auto local = std::make_shared<Chart<T>>(develop(*ctx.surface, x, R));
    for (const auto& z : zv)
      if (local->find(z) < 0) {
        res.status = CellStatus::NotRealizable;
        res.reason = "triple point " + point_key(z) + " is hidden from the triangle";
        return res;
      }
    for (const auto& zp : local->points) {
      if (detail::contains_point(zv, zp.pos)) continue;
      if (detail::in_closed_triangle(nb.z[0], nb.z[1], nb.z[2], zp.pos)) {
        res.status = CellStatus::NotRealizable;
        res.reason = "cone point " + point_key(zp.pos) + " lies in the closed triangle";
        return res;
      }
    }
    bool infeasible = false;
    auto hs = detail::t_constraints(nb, *local, infeasible);
    std::vector<detail::PolyVertex<T>> poly{{T(0), T(0), 2}, {T(1), T(0), 0}, {T(0), T(1), 1}};
    if (!infeasible)
      for (std::size_t i = 0; i < hs.size() && !poly.empty(); ++i)
        if (hs[i].bound < 0) poly = detail::clip(poly, hs[i], static_cast<int>(i));
    if (infeasible || detail::polygon_area_sign(poly) <= 0) {
      res.status = CellStatus::NotRealizable;
      res.reason = "empty feasible set";
      return res;
    }
    // canonical starting vertex
    auto first = std::min_element(poly.begin(), poly.end(), [](const auto& a, const auto& b) {
      return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    std::rotate(poly.begin(), first, poly.end());

    TwoCell<T> cell;
    cell.basis = nb;
    cell.base = x;
    cell.radius = R;
    cell.local = local;
    std::string problem;
    for (const auto& pv : poly) {
      CellVertex<T> cv;
      cv.t = {T(1 - pv.u - pv.v), pv.u, pv.v};
      Subconic<T> u = make_subconic(canonical(from_t(nb, cv.t)));
      if (u.kind == Kind::EllipseInterior) {
        cv.certified = ellipse_in_disc(to_double(u.q), to_double(x.dev), to_double(R)) > 0;
        if (!cv.certified && problem.empty()) problem = "vertex ellipse reaches the local chart boundary";
      } else if (u.kind != Kind::Strip) {
        if (problem.empty()) problem = "vertex form of kind " + kind_name(u.kind);
      }
      cv.conic = make_rigid(u, detail::boundary_points(*local, u), u.kind == Kind::Strip);
      if (cv.conic.size() < 5 && u.kind == Kind::EllipseInterior && problem.empty())
        problem = "vertex ellipse meets fewer than five cone points";
      cell.vertices.push_back(std::move(cv));
      const auto& h = hs[pv.label];
      if (h.bound >= 0 || h.who.size() != 1) {
        if (problem.empty()) problem = "cell edge on the boundary of the triangle of forms";
        cell.edge_points.push_back(h.who.empty() ? Vec2<T>{} : h.who.front());
      } else {
        cell.edge_points.push_back(h.who.front());
      }
    }
    res.cell = std::move(cell);
    if (problem.empty()) {
      res.status = CellStatus::Realized;
      res.reason.clear();
      return res;
    }
    res.status = CellStatus::WindowTooSmall;
    res.reason = problem;
  }
  return res;
}

template <class T>
CellResult<T> two_cell(const Context<T>& ctx, const std::array<Vec2<T>, 3>& z) {
  if (orient(z[0], z[1], z[2]) == 0) {
    CellResult<T> res;
    res.status = CellStatus::NotRealizable;
    res.reason = "triple is collinear";
    return res;
  }
  auto loc = detail::locate_inside(ctx.chart, std::vector<Vec2<T>>(z.begin(), z.end()));
  if (!loc) {
    CellResult<T> res;
    res.status = CellStatus::WindowTooSmall;
    res.reason = "no point of the triangle is visible from the chart base";
    return res;
  }
  return two_cell(ctx, z, *loc);
}

template <class T>
QuadrupleResult<T> realizable_quadruple(const Context<T>& ctx, const std::array<Vec2<T>, 4>& q) {
  QuadrupleResult<T> res;
  std::vector<Vec2<T>> pts(q.begin(), q.end());
  if (detail::unique_points(pts).size() != 4) {
    res.reason = "repeated point";
    return res;
  }
  int o = orient(q[0], q[1], q[2]);
  if (o == 0) {
    res.reason = "three collinear points";
    return res;
  }
  std::vector<Vec2<T>> tri = o > 0 ? std::vector<Vec2<T>>{q[0], q[1], q[2]} : std::vector<Vec2<T>>{q[0], q[2], q[1]};
  int neg = 0;
  for (int e = 0; e < 3; ++e) {
    int s = orient(tri[e], tri[(e + 1) % 3], q[3]);
    if (s == 0) {
      res.reason = "three collinear points";
      return res;
    }
    if (s < 0) ++neg;
  }
  if (neg != 1) {
    res.reason = "not in convex position";
    return res;
  }
  auto loc = detail::locate_inside(ctx.chart, pts);
  if (!loc) {
    res.status = CellStatus::WindowTooSmall;
    res.reason = "no inner point is visible from the chart base";
    return res;
  }
  NaturalBasis<T> nb = natural_basis(std::array<Vec2<T>, 3>{q[0], q[1], q[2]});
  const Vec2<T>& w = q[3];
  double r = ctx.options.radius_factor * (detail::max_dist(loc->dev, pts) + ctx.inradius.upper);
  for (int attempt = 0; attempt <= ctx.options.max_doublings; ++attempt, r *= 2) {
    T R = detail::rational_above<T>(r);
    Chart<T> local = develop(*ctx.surface, *loc, R);
    for (const auto& z : pts)
      if (local.find(z) < 0) {
        res.status = CellStatus::NotRealizable;
        res.reason = "point " + point_key(z) + " is hidden from an inner point";
        return res;
      }
    bool infeasible = false;
    auto hs = detail::t_constraints(nb, local, infeasible);
    if (infeasible) {
      res.status = CellStatus::NotRealizable;
      res.reason = "empty feasible set";
      return res;
    }
    T a = T(nb.d[1](w) - nb.d[0](w)), b = T(nb.d[2](w) - nb.d[0](w)), cc = nb.d[0](w);
    if (sign(a, 1.0) == 0 && sign(b, 1.0) == 0) {
      res.status = CellStatus::NotRealizable;
      res.reason = "degenerate quadruple";
      return res;
    }
    Vec2<T> p0 = Scalar<T>::abs(a) >= Scalar<T>::abs(b) ? Vec2<T>{T(-cc / a), T(0)} : Vec2<T>{T(0), T(-cc / b)};
    Vec2<T> dir{T(-b), a};
    std::optional<T> lo, hi;
    for (const auto& h : hs) {
      if (detail::contains_point(h.who, w)) continue;
      T al = h.at(p0.x, p0.y);
      T be = T(h.a * dir.x + h.b * dir.y);
      double sc = h.scale() * (1 + std::fabs(to_double(p0.x)) + std::fabs(to_double(p0.y)) + std::fabs(to_double(dir.x)) +
                               std::fabs(to_double(dir.y)));
      if (sign(be, sc) == 0) {
        if (sign(al, sc) < 0) infeasible = true;
        continue;
      }
      T s = T(-al / be);
      if (sign(be, sc) > 0) {
        if (!lo || *lo < s) lo = s;
      } else {
        if (!hi || s < *hi) hi = s;
      }
    }
    if (infeasible || !lo || !hi || sign(T(*hi - *lo), 1.0) <= 0) {
      res.status = CellStatus::NotRealizable;
      res.reason = "empty feasible segment";
      return res;
    }
    bool ok = true;
    std::array<T, 2> ends{*lo, *hi};
    for (int e = 0; e < 2; ++e) {
      T u = T(p0.x + ends[e] * dir.x), v = T(p0.y + ends[e] * dir.y);
      QForm3<T> f = canonical(from_t(nb, std::array<T, 3>{T(1 - u - v), u, v}));
      res.ends[e] = f;
      Kind k = classify(f);
      if (k == Kind::EllipseInterior)
        ok = ok && ellipse_in_disc(to_double(f), to_double(loc->dev), to_double(R)) > 0;
      else if (k != Kind::Strip)
        ok = false;
    }
    if (ok) {
      res.status = CellStatus::Realized;
      res.reason.clear();
      return res;
    }
    res.status = CellStatus::WindowTooSmall;
    res.reason = "segment end not certified inside the local chart";
  }
  return res;
}

template <class T>
bool adjacent(const RigidConic<T>& u, const Vec2<T>& a, const Vec2<T>& b) {
  auto sa = successor(u, a);
  auto sb = successor(u, b);
  return (sa && detail::same_point(*sa, b)) || (sb && detail::same_point(*sb, a));
}

template <class T>
bool realizable_quadruple_combinatorial(const RigidConic<T>& u, const std::array<Vec2<T>, 4>& q) {
  const int parts[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& p : parts)
    if (adjacent(u, q[p[0]], q[p[1]]) && adjacent(u, q[p[2]], q[p[3]])) return true;
  return false;
}

template <class T>
bool realizable_triple_combinatorial(const RigidConic<T>& u, const std::array<Vec2<T>, 3>& z) {
  return adjacent(u, z[0], z[1]) || adjacent(u, z[1], z[2]) || adjacent(u, z[0], z[2]);
}

namespace detail {
template <class T>
std::vector<Vec2<T>> minus(const std::array<Vec2<T>, 4>& a, const std::vector<Vec2<T>>& b) {
  std::vector<Vec2<T>> out;
  for (const auto& p : a)
    if (!contains_point(b, p)) out.push_back(p);
  return out;
}
}  // namespace detail

template <class T>
bool follows(const RigidConic<T>& u, const std::array<Vec2<T>, 4>& a, const std::array<Vec2<T>, 4>& b) {
  std::vector<Vec2<T>> common;
  for (const auto& p : a)
    if (detail::contains_point(std::vector<Vec2<T>>(b.begin(), b.end()), p)) common.push_back(p);
  if (common.size() != 3) throw InputError("quadruples do not share a triple");
  Vec2<T> wa = detail::minus(a, common).front();
  Vec2<T> wb = detail::minus(b, common).front();
  // consecutive triple {x, sx, s^2 x}
  for (const auto& x : common) {
    auto s1 = successor(u, x);
    if (!s1 || !detail::contains_point(common, *s1)) continue;
    auto s2 = successor(u, *s1);
    if (!s2 || detail::same_point(*s2, x) || !detail::contains_point(common, *s2)) continue;
    auto s3 = successor(u, *s2);
    auto p1 = predecessor(u, x);
    return s3 && p1 && detail::same_point(wa, *s3) && detail::same_point(wb, *p1);
  }
  for (const auto& x : common) {
    auto s1 = successor(u, x);
    if (!s1 || !detail::contains_point(common, *s1)) continue;
    Vec2<T> y;
    for (const auto& p : common)
      if (!detail::same_point(p, x) && !detail::same_point(p, *s1)) y = p;
    auto sy = successor(u, y);
    auto py = predecessor(u, y);
    return sy && py && detail::same_point(wa, *sy) && detail::same_point(wb, *py);
  }
  throw InputError("shared triple is not realizable on this conic");
}

template <class T>
int LinkGraph<T>::find(const std::array<Vec2<T>, 4>& q) const {
  std::string k = set_key(std::vector<Vec2<T>>(q.begin(), q.end()));
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (set_key(std::vector<Vec2<T>>(vertices[i].begin(), vertices[i].end())) == k) return static_cast<int>(i);
  return -1;
}

namespace detail {
template <class T>
void link_edges(const RigidConic<T>& u, LinkGraph<T>& g) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    index[set_key(std::vector<Vec2<T>>(g.vertices[i].begin(), g.vertices[i].end()))] = static_cast<int>(i);
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& q = g.vertices[i];
    for (int drop = 0; drop < 4; ++drop) {
      std::vector<Vec2<T>> tri;
      for (int k = 0; k < 4; ++k)
        if (k != drop) tri.push_back(q[k]);
      for (const auto& p : u.all_points()) {
        if (contains_point(tri, p) || same_point(p, q[drop])) continue;
        std::vector<Vec2<T>> other = tri;
        other.push_back(p);
        auto it = index.find(set_key(other));
        if (it == index.end()) continue;
        int j = it->second;
        std::pair<int, int> e = follows(u, g.vertices[j], q) ? std::pair<int, int>{static_cast<int>(i), j}
                                                             : std::pair<int, int>{j, static_cast<int>(i)};
        if (seen.insert(e).second) g.edges.push_back(e);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
}
}  // namespace detail

template <class T>
LinkGraph<T> link(const RigidConic<T>& u) {
  LinkGraph<T> g;
  if (u.u.kind == Kind::EllipseInterior) {
    const auto& c = u.components.front();
    int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        g.vertices.push_back({c[i], c[(i + 1) % n], c[j], c[(j + 1) % n]});
      }
  } else if (u.components.size() == 2) {
    const auto& a = u.components[0];
    const auto& b = u.components[1];
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
      for (std::size_t j = 0; j + 1 < b.size(); ++j) g.vertices.push_back({a[i], a[i + 1], b[j], b[j + 1]});
  }
  detail::link_edges(u, g);
  return g;
}

template <class T>
LinkGraph<T> link_from_cells(const Context<T>& ctx, const RigidConic<T>& u) {
  LinkGraph<T> g;
  std::map<std::string, int> index;
  auto vid = [&](const std::array<Vec2<T>, 4>& q) {
    std::string k = set_key(std::vector<Vec2<T>>(q.begin(), q.end()));
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    index[k] = static_cast<int>(g.vertices.size());
    g.vertices.push_back(q);
    return static_cast<int>(g.vertices.size()) - 1;
  };
  const std::string ukey = form_key(u.u.q);
  auto pts = u.all_points();
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        std::array<Vec2<T>, 3> z{pts[i], pts[j], pts[k]};
        if (!realizable_triple_combinatorial(u, z)) continue;
        if (orient(z[0], z[1], z[2]) == 0) continue;
        auto res = two_cell(ctx, z);
        if (res.status != CellStatus::Realized) continue;
        const auto& cell = res.cell;
        int m = static_cast<int>(cell.vertices.size());
        for (int v = 0; v < m; ++v) {
          if (form_key(cell.vertices[v].conic.u.q) != ukey) continue;
          const auto& zz = cell.basis.z;
          std::array<Vec2<T>, 4> qin{zz[0], zz[1], zz[2], cell.edge_points[(v + m - 1) % m]};
          std::array<Vec2<T>, 4> qout{zz[0], zz[1], zz[2], cell.edge_points[v]};
          std::pair<int, int> e{vid(qin), vid(qout)};
          if (seen.insert(e).second) g.edges.push_back(e);
        }
      }
  return g;
}

template <class T>
std::array<Vec2<T>, 3> default_seed(const Context<T>& ctx) {
  const auto& ch = ctx.chart;
  int n = std::min<int>(static_cast<int>(ch.points.size()), 10);
  if (n < 3) throw InfeasibleError("chart has fewer than three cone points");
  struct Cand {
    double score;
    std::array<int, 3> idx;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        double s = 0;
        for (int m : {i, j, k}) s += std::sqrt(to_double(norm2(ch.points[m].pos - ch.base)));
        cands.push_back({s, {i, j, k}});
      }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score < b.score - 1e-12; });
  for (const auto& c : cands) {
    std::array<Vec2<T>, 3> z{ch.points[c.idx[0]].pos, ch.points[c.idx[1]].pos, ch.points[c.idx[2]].pos};
    if (orient(z[0], z[1], z[2]) == 0) continue;
    if (two_cell(ctx, z).status == CellStatus::Realized) return z;
  }
  throw InfeasibleError("no realizable triple among the cone points nearest the base");
}

template <class T>
ComplexWindow<T> build_complex(const Context<T>& ctx, const std::array<Vec2<T>, 3>& seed, int budget, int threads) {
  ComplexWindow<T> w;
  w.base = ctx.chart.base;
  w.radius = ctx.chart.radius;
  w.budget = budget;
  struct Job {
    std::string key;
    std::array<Vec2<T>, 3> z;
    BaseLocation<T> loc;
  };
  auto seed_loc = detail::locate_inside(ctx.chart, std::vector<Vec2<T>>(seed.begin(), seed.end()));
  if (!seed_loc) throw InfeasibleError("seed triangle is not visible from the chart base");
  {
    auto r = two_cell(ctx, seed, *seed_loc);
    if (r.status == CellStatus::NotRealizable) throw InfeasibleError("seed triple is not realizable: " + r.reason);
    if (r.status == CellStatus::WindowTooSmall) throw ToleranceError("seed cell needs a larger window: " + r.reason);
  }
  std::set<std::string> seen;
  std::vector<Job> layer{{set_key(std::vector<Vec2<T>>(seed.begin(), seed.end())), seed, *seed_loc}};
  seen.insert(layer.front().key);
  const double margin = to_double(w.radius);
  const Vec2<double> bd = to_double(w.base);
  threads = std::max(1, threads);

  while (!layer.empty() && static_cast<int>(w.faces.size()) < budget) {
    std::sort(layer.begin(), layer.end(), [](const Job& a, const Job& b) { return a.key < b.key; });
    std::vector<CellResult<T>> results(layer.size());
    std::size_t done = 0;
    std::vector<Job> next;
    while (done < layer.size() && static_cast<int>(w.faces.size()) < budget) {
      std::size_t want = std::min(layer.size() - done, static_cast<std::size_t>(budget - w.faces.size()));
      std::size_t chunk = std::min(layer.size() - done, std::max(want, static_cast<std::size_t>(threads)));
      auto work = [&](std::size_t from, std::size_t step) {
        for (std::size_t i = from; i < chunk; i += step) results[done + i] = two_cell(ctx, layer[done + i].z, layer[done + i].loc);
      };
      if (threads == 1 || chunk == 1) {
        work(0, 1);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<std::size_t>(t), static_cast<std::size_t>(threads));
        for (auto& th : pool) th.join();
      }
      for (std::size_t i = done; i < done + chunk && static_cast<int>(w.faces.size()) < budget; ++i) {
        const auto& res = results[i];
        if (res.status != CellStatus::Realized) {
          if (res.status == CellStatus::WindowTooSmall) {
            w.truncated = true;
            ++w.skipped_cells;
          }
          continue;
        }
        const auto& cell = res.cell;
        FaceRec<T> f;
        f.key = layer[i].key;
        f.triple = cell.basis.z;
        int m = static_cast<int>(cell.vertices.size());
        for (const auto& cv : cell.vertices) {
          std::string vk = form_key(cv.conic.u.q);
          auto it = w.vertex_index.find(vk);
          if (it == w.vertex_index.end()) {
            w.vertex_index[vk] = static_cast<int>(w.vertices.size());
            w.vertices.push_back({vk, cv.conic, cv.certified});
            f.vertices.push_back(static_cast<int>(w.vertices.size()) - 1);
          } else {
            auto& vr = w.vertices[it->second];
            auto pts = vr.conic.all_points();
            auto more = cv.conic.all_points();
            pts.insert(pts.end(), more.begin(), more.end());
            vr.conic = make_rigid(vr.conic.u, pts, vr.conic.truncated);
            vr.certified = vr.certified || cv.certified;
            f.vertices.push_back(it->second);
          }
          f.t.push_back(cv.t);
          if (cv.conic.u.kind == Kind::EllipseInterior && !cv.certified) f.complete = false;
        }
        for (int e = 0; e < m; ++e) {
          std::array<Vec2<T>, 4> quad{f.triple[0], f.triple[1], f.triple[2], cell.edge_points[e]};
          std::string ek = set_key(std::vector<Vec2<T>>(quad.begin(), quad.end()));
          auto it = w.edge_index.find(ek);
          if (it == w.edge_index.end()) {
            w.edge_index[ek] = static_cast<int>(w.edges.size());
            std::array<int, 2> ends{f.vertices[e], f.vertices[(e + 1) % m]};
            if (ends[1] < ends[0]) std::swap(ends[0], ends[1]);
            w.edges.push_back({ek, quad, ends});
            f.edges.push_back(static_cast<int>(w.edges.size()) - 1);
          } else {
            f.edges.push_back(it->second);
          }
          for (int drop = 0; drop < 3; ++drop) {
            std::array<Vec2<T>, 3> z2;
            for (int k = 0, o = 0; k < 3; ++k)
              if (k != drop) z2[o++] = f.triple[k];
            z2[2] = cell.edge_points[e];
            std::string k2 = set_key(std::vector<Vec2<T>>(z2.begin(), z2.end()));
            if (seen.count(k2)) continue;
            Vec2<T> c2 = detail::centroid(std::vector<Vec2<T>>(z2.begin(), z2.end()));
            Vec2<double> cd = to_double(c2);
            if (std::hypot(cd.x - bd.x, cd.y - bd.y) > margin) {
              w.truncated = true;
              continue;
            }
            auto loc = detail::locate_inside(*cell.local, std::vector<Vec2<T>>(z2.begin(), z2.end()));
            if (!loc) loc = detail::locate_inside(ctx.chart, std::vector<Vec2<T>>(z2.begin(), z2.end()));
            if (!loc) {
              w.truncated = true;
              continue;
            }
            seen.insert(k2);
            next.push_back({k2, z2, *loc});
          }
        }
        w.face_index[f.key] = static_cast<int>(w.faces.size());
        w.faces.push_back(std::move(f));
      }
      done += chunk;
    }
    if (static_cast<int>(w.faces.size()) >= budget && (done < layer.size() || !next.empty())) w.truncated = true;
    layer = std::move(next);
  }
  return w;
}

}  // namespace flatconic

namespace flatconic {

template <class T>
CellMatching match_cells(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const AffineMap<T>& f) {
  CellMatching m;
  auto img = [&](auto const& pts) {
    std::vector<Vec2<T>> v;
    for (const auto& p : pts) v.push_back(f(p));
    return set_key(v);
  };
  for (std::size_t i = 0; i < a.faces.size(); ++i) {
    auto it = b.face_index.find(img(a.faces[i].triple));
    if (it != b.face_index.end()) m.face[static_cast<int>(i)] = it->second;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    auto it = b.edge_index.find(img(a.edges[i].quad));
    if (it != b.edge_index.end()) m.edge[static_cast<int>(i)] = it->second;
  }
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    QForm3<T> q = a.vertices[i].conic.u.q.compose_affine(f.g, f.c);
    auto it = b.vertex_index.find(form_key(q));
    if (it != b.vertex_index.end()) m.vertex[static_cast<int>(i)] = it->second;
  }
  return m;
}

template <class T>
FrontierBijection<T> frontier_bijection(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const CellMatching& phi) {
  FrontierBijection<T> out;
  for (const auto& [fa, fb] : phi.face) {
    const auto& ea = a.faces[fa].edges;
    const auto& eb = b.faces[fb].edges;
    std::vector<int> mapped;
    for (int e : ea) {
      auto it = phi.edge.find(e);
      if (it == phi.edge.end()) break;
      mapped.push_back(it->second);
    }
    if (mapped.size() != ea.size() || eb.size() != ea.size())
      throw InfeasibleError("matching is inconsistent on face " + a.faces[fa].key);
    std::size_t n = eb.size();
    auto start = std::find(eb.begin(), eb.end(), mapped[0]);
    if (start == eb.end()) throw InfeasibleError("matching is inconsistent on face " + a.faces[fa].key);
    std::size_t s = static_cast<std::size_t>(start - eb.begin());
    bool fwd = true, bwd = true;
    for (std::size_t i = 0; i < n; ++i) {
      fwd = fwd && eb[(s + i) % n] == mapped[i];
      bwd = bwd && eb[(s + n - i) % n] == mapped[i];
    }
    if (!fwd) {
      if (bwd) throw InfeasibleError("matching reverses the orientation of face " + a.faces[fa].key);
      throw InfeasibleError("matching is inconsistent on face " + a.faces[fa].key);
    }
  }

  auto assign = [&](const Vec2<T>& x, const Vec2<T>& y, int vid) {
    std::string k = point_key(x);
    auto it = out.image.find(k);
    if (it != out.image.end()) {
      if (!detail::same_point(it->second, y))
        throw InfeasibleError("frontier bijection is inconsistent at vertex " + std::to_string(vid) + ", point " + k);
      return;
    }
    out.image[k] = y;
    out.source[point_key(y)] = x;
  };
  auto edge_image = [&](const std::vector<Vec2<T>>& pts) -> const EdgeRec<T>* {
    auto it = a.edge_index.find(set_key(pts));
    if (it == a.edge_index.end()) return nullptr;
    auto jt = phi.edge.find(it->second);
    if (jt == phi.edge.end()) return nullptr;
    return &b.edges[jt->second];
  };

  for (const auto& [va, vb] : phi.vertex) {
    const RigidConic<T>& ua = a.vertices[va].conic;
    const RigidConic<T>& ub = b.vertices[vb].conic;
    if (ua.u.kind != ub.u.kind) throw InfeasibleError("matched vertices have different kinds at vertex " + std::to_string(va));
    if (ua.u.kind == Kind::EllipseInterior) {
      const auto& c = ua.components.front();
      int n = static_cast<int>(c.size());
      const auto& cb = ub.components.front();
      int nb = static_cast<int>(cb.size());
      for (int i = 0; i < n; ++i) {
        const EdgeRec<T>* e = edge_image({c[i], c[(i + 1) % n], c[(i + 2) % n], c[(i + 3) % n]});
        if (!e) continue;
        std::string target = set_key(std::vector<Vec2<T>>(e->quad.begin(), e->quad.end()));
        bool found = false;
        for (int j = 0; j < nb && !found; ++j)
          if (set_key(std::vector<Vec2<T>>{cb[j], cb[(j + 1) % nb], cb[(j + 2) % nb], cb[(j + 3) % nb]}) == target) {
            assign(c[i], cb[j], va);
            found = true;
          }
        if (!found) throw InfeasibleError("consecutive quadruple maps to a nonconsecutive one at vertex " + std::to_string(va));
      }
    } else if (ua.u.kind == Kind::Strip && ua.components.size() == 2) {
      for (int side = 0; side < 2; ++side) {
        const auto& cx = ua.components[side];
        const auto& cy = ua.components[1 - side];
        for (std::size_t i = 0; i + 1 < cx.size(); ++i) {
          std::vector<Vec2<T>> common;
          int lines = 0;
          for (std::size_t j = 0; j + 1 < cy.size(); ++j) {
            const EdgeRec<T>* e = edge_image({cx[i], cx[i + 1], cy[j], cy[j + 1]});
            if (!e) continue;
            std::vector<Vec2<T>> q(e->quad.begin(), e->quad.end());
            if (lines == 0) {
              common = q;
            } else {
              std::vector<Vec2<T>> keep;
              for (const auto& p : common)
                if (detail::contains_point(q, p)) keep.push_back(p);
              common = keep;
            }
            ++lines;
          }
          if (lines < 2 || common.size() != 2) continue;
          auto s0 = successor(ub, common[0]);
          if (s0 && detail::same_point(*s0, common[1]))
            assign(cx[i], common[0], va);
          else
            assign(cx[i], common[1], va);
        }
      }
    }
    // conjugacy with the successors
    for (const auto& x : ua.all_points()) {
      auto bx = out.image.find(point_key(x));
      auto sx = successor(ua, x);
      if (bx == out.image.end() || !sx) continue;
      auto bsx = out.image.find(point_key(*sx));
      if (bsx == out.image.end()) continue;
      auto sbx = successor(ub, bx->second);
      ++out.conjugacy_checks;
      if (!sbx || !detail::same_point(*sbx, bsx->second))
        throw InfeasibleError("frontier bijection does not commute with the successor at vertex " + std::to_string(va));
    }
  }
  return out;
}

}  // namespace flatconic
