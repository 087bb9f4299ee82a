#pragma once

// Hand-rolled generators and small independent oracles shared by the tests.

#include <random>
#include <string>
#include <vector>

#include "flatconic/veech.hpp"

namespace gen {

using flatconic::Mat2;
using flatconic::QForm3;
using flatconic::Rational;
using flatconic::Vec2;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  Rational rational(long range = 20, long den = 7) {
    Rational r(integer(-range * den, range * den));
    r /= integer(1, den);
    return r;
  }
  Vec2<Rational> point(long range = 20, long den = 7) { return {rational(range, den), rational(range, den)}; }
  QForm3<Rational> form(long range = 9) {
    return {rational(range, 3), rational(range, 3), rational(range, 3),
            rational(range, 3), rational(range, 3), rational(range, 3)};
  }
  Mat2<Rational> sl2z(int steps = 4) {
    Mat2<Rational> g = Mat2<Rational>::identity();
    for (int i = 0; i < steps; ++i) {
      long k = integer(-2, 2);
      Mat2<Rational> e = integer(0, 1) ? Mat2<Rational>{1, k, 0, 1} : Mat2<Rational>{1, 0, k, 1};
      g = g * e;
    }
    return g;
  }
};

// Points in general position: no three collinear, no repeats.
inline std::vector<Vec2<Rational>> general_position(Rng& rng, int k) {
  std::vector<Vec2<Rational>> pts;
  while (static_cast<int>(pts.size()) < k) {
    Vec2<Rational> p = rng.point(5, 3);
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i) {
      if (pts[i] == p) ok = false;
      for (std::size_t j = i + 1; j < pts.size() && ok; ++j)
        if (flatconic::orient(pts[i], pts[j], p) == 0) ok = false;
    }
    if (ok) pts.push_back(p);
  }
  return pts;
}

// Rank of a rational matrix by plain row reduction.
inline int rank(std::vector<std::vector<Rational>> m) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

// Conic monomials x^2, y^2, 1, 2xy, 2x, 2y at p, matching the coefficient order of QForm3.
inline std::vector<Rational> monomials(const Vec2<Rational>& p) {
  return {p.x * p.x, p.y * p.y, Rational(1), 2 * p.x * p.y, 2 * p.x, 2 * p.y};
}

// Signature of a symmetric 3x3 rational matrix from the signs of its characteristic polynomial
// (Descartes' rule is exact for real-rooted polynomials).
struct Sig {
  int pos = 0, neg = 0, zero = 0;
};

inline Sig descartes_signature(const QForm3<Rational>& q) {
  Rational tr = q.a11 + q.a22 + q.a33;
  Rational c2 = q.a11 * q.a22 - q.a12 * q.a12 + q.a11 * q.a33 - q.a13 * q.a13 + q.a22 * q.a33 - q.a23 * q.a23;
  Rational det = q.det();
  // p(l) = l^3 - tr l^2 + c2 l - det
  std::vector<Rational> c{Rational(1), -tr, c2, -det};
  Sig s;
  while (!c.empty() && c.back() == 0) {
    c.pop_back();
    ++s.zero;
  }
  auto changes = [](const std::vector<Rational>& v) {
    int n = 0, last = 0;
    for (const auto& x : v) {
      int sg = sgn(x);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++n;
      last = sg;
    }
    return n;
  };
  s.pos = changes(c);
  std::vector<Rational> m = c;
  for (std::size_t i = 0; i < m.size(); ++i)
    if ((c.size() - 1 - i) % 2 == 1) m[i] = -m[i];
  s.neg = changes(m);
  return s;
}

inline bool proportional(const QForm3<Rational>& a, const QForm3<Rational>& b) {
  auto x = a.coeffs(), y = b.coeffs();
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (x[i] * y[j] != x[j] * y[i]) return false;
  return !a.is_zero() && !b.is_zero();
}

// Rational point on the unit circle from the stereographic parameter t.
inline Vec2<Rational> circle_point(const Rational& t) {
  Rational d = 1 + t * t;
  return {Rational((1 - t * t) / d), Rational(2 * t / d)};
}

inline std::string data(const std::string& name) { return std::string(FLATCONIC_DATA_DIR) + "/" + name; }

inline flatconic::Surface<Rational> exact_surface(const std::string& name) {
  return flatconic::build_surface<Rational>(flatconic::read_raw_surface(data(name)));
}

// Cone points of a lattice-periodic set visible from b within radius r: no other cone point on the open segment.
inline std::vector<Vec2<Rational>> visible_lattice_points(const std::vector<Vec2<Rational>>& offsets,
                                                          const Vec2<Rational>& b, const Rational& r) {
  std::vector<Vec2<Rational>> all;
  long span = static_cast<long>(r.get_d()) + 3;
  for (long i = -span; i <= span; ++i)
    for (long j = -span; j <= span; ++j)
      for (const auto& o : offsets) {
        Vec2<Rational> p{Rational(o.x + i), Rational(o.y + j)};
        if (flatconic::norm2(p - b) <= r * r) all.push_back(p);
      }
  std::vector<Vec2<Rational>> vis;
  for (const auto& p : all) {
    bool blocked = false;
    for (const auto& q : all) {
      if (q == p) continue;
      if (flatconic::orient(b, p, q) != 0) continue;
      Rational t = flatconic::dot(q - b, p - b) / flatconic::norm2(p - b);
      if (t > 0 && t < 1) blocked = true;
    }
    if (!blocked) vis.push_back(p);
  }
  return vis;
}

// Every five-subset of pts in convex position whose conic is an ellipse interior with no point of
// `all` strictly inside and with closure inside the disc (c, r). Returned as canonical forms.
inline std::vector<QForm3<Rational>> empty_ellipses_brute(const std::vector<Vec2<Rational>>& pts,
                                                          const std::vector<Vec2<Rational>>& all,
                                                          const Vec2<Rational>& c, double r) {
  using namespace flatconic;
  std::vector<QForm3<Rational>> out;
  int n = static_cast<int>(pts.size());
  std::array<int, 5> idx{};
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == 5) {
      std::array<Vec2<Rational>, 5> five;
      for (int k = 0; k < 5; ++k) five[k] = pts[idx[k]];
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
          for (int k = j + 1; k < 5; ++k)
            if (orient(five[i], five[j], five[k]) == 0) return;
      Subconic<Rational> u = conic_through_five(five);
      if (u.kind != Kind::EllipseInterior) return;
      for (const auto& p : all)
        if (contains(u, p) < 0) return;
      QForm3<double> qd{u.q.a11.get_d(), u.q.a22.get_d(), u.q.a33.get_d(),
                        u.q.a12.get_d(), u.q.a13.get_d(), u.q.a23.get_d()};
      if (ellipse_in_disc(qd, to_double(c), r) <= 0) return;
      QForm3<Rational> k = canonical(u.q);
      for (const auto& e : out)
        if (e == k) return;
      out.push_back(k);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace gen
