#pragma once

#include <array>
#include <string>
#include <vector>

#include "flatconic/linalg.hpp"

namespace flatconic {

/// Quadratic form on R^3 stored by its Gram matrix:
/// q = a11 x^2 + a22 y^2 + a33 z^2 + 2 a12 xy + 2 a13 xz + 2 a23 yz.
template <class T>
struct QForm3 {
  T a11{}, a22{}, a33{}, a12{}, a13{}, a23{};

  static QForm3 from_coeffs(const std::array<T, 6>& c) { return {c[0], c[1], c[2], c[3], c[4], c[5]}; }
  std::array<T, 6> coeffs() const { return {a11, a22, a33, a12, a13, a23}; }

  T entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == j) return i == 0 ? a11 : (i == 1 ? a22 : a33);
    if (i == 0) return j == 1 ? a12 : a13;
    return a23;
  }

  T operator()(const Vec3<T>& v) const {
    return T(a11 * v.x * v.x + a22 * v.y * v.y + a33 * v.z * v.z +
             2 * (a12 * v.x * v.y + a13 * v.x * v.z + a23 * v.y * v.z));
  }
  /// Value at the lift (x, y, 1).
  T operator()(const Vec2<T>& p) const {
    return T(a11 * p.x * p.x + a22 * p.y * p.y + a33 + 2 * (a12 * p.x * p.y + a13 * p.x + a23 * p.y));
  }
  /// Symmetric bilinear form q(v, w).
  T polar(const Vec3<T>& v, const Vec3<T>& w) const {
    T s(0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += entry(i, j) * v[i] * w[j];
    return s;
  }

  QForm3 operator+(const QForm3& o) const {
    return {T(a11 + o.a11), T(a22 + o.a22), T(a33 + o.a33), T(a12 + o.a12), T(a13 + o.a13), T(a23 + o.a23)};
  }
  QForm3 operator-(const QForm3& o) const {
    return {T(a11 - o.a11), T(a22 - o.a22), T(a33 - o.a33), T(a12 - o.a12), T(a13 - o.a13), T(a23 - o.a23)};
  }
  QForm3 operator-() const { return {T(-a11), T(-a22), T(-a33), T(-a12), T(-a13), T(-a23)}; }
  QForm3 scaled(const T& s) const {
    return {T(s * a11), T(s * a22), T(s * a33), T(s * a12), T(s * a13), T(s * a23)};
  }
  bool operator==(const QForm3& o) const { return coeffs() == o.coeffs(); }

  double scale() const {
    double s = 0.0;
    for (const T& c : coeffs()) s = std::max(s, std::fabs(to_double(c)));
    return s;
  }
  bool is_zero() const {
    for (const T& c : coeffs())
      if (sign(c, scale()) != 0) return false;
    return true;
  }

  /// Upper-left 2x2 block as [[a11, a12], [a12, a22]].
  Mat2<T> lower() const { return {a11, a12, a12, a22}; }
  T det() const {
    return T(a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) + a13 * (a12 * a23 - a22 * a13));
  }
  T det_lower() const { return T(a11 * a22 - a12 * a12); }

  /// Form of the image region under F(p) = M p + c, that is q o F^{-1}.
  QForm3 compose_affine(const Mat2<T>& M, const Vec2<T>& c) const;

  std::string str() const;
};

struct Signature {
  int pos = 0, neg = 0, zero = 0;
  bool near_degenerate = false;
  bool is(int p, int n) const { return pos == p && neg == n; }
  bool operator==(const Signature& o) const { return pos == o.pos && neg == o.neg && zero == o.zero; }
};

Signature signature_exact(std::vector<std::vector<Rational>> a);
Signature signature_float(const std::vector<std::vector<double>>& a);

template <class T>
Signature signature(const QForm3<T>& q) {
  std::vector<std::vector<T>> a(3, std::vector<T>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = q.entry(i, j);
  if constexpr (Scalar<T>::exact)
    return signature_exact(std::move(a));
  else
    return signature_float(a);
}

template <class T>
Signature signature(const Mat2<T>& m) {
  std::vector<std::vector<T>> a{{m.a, m.b}, {m.c, m.d}};
  if constexpr (Scalar<T>::exact)
    return signature_exact(std::move(a));
  else
    return signature_float(a);
}

/// Nullspace of the Gram matrix.
template <class T>
std::vector<Vec3<T>> radical(const QForm3<T>& q) {
  Matrix<T> m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = q.entry(i, j);
  std::vector<Vec3<T>> out;
  for (auto& v : nullspace(m)) out.push_back({v[0], v[1], v[2]});
  return out;
}

/// Row of the evaluation map q -> q(v) in coefficient order (a11,a22,a33,a12,a13,a23).
template <class T>
std::array<T, 6> evaluation_row(const Vec3<T>& v) {
  return {T(v.x * v.x), T(v.y * v.y), T(v.z * v.z), T(2 * v.x * v.y), T(2 * v.x * v.z), T(2 * v.y * v.z)};
}

/// Row of the map q -> q(v, w).
template <class T>
std::array<T, 6> polar_row(const Vec3<T>& v, const Vec3<T>& w) {
  return {T(v.x * w.x), T(v.y * w.y), T(v.z * w.z), T(v.x * w.y + v.y * w.x), T(v.x * w.z + v.z * w.x),
          T(v.y * w.z + v.z * w.y)};
}

template <class T>
std::vector<QForm3<T>> kernel_forms(const std::vector<std::array<T, 6>>& rows) {
  Matrix<T> m(static_cast<int>(rows.size()), 6);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 6; ++j) m(static_cast<int>(i), j) = rows[i][j];
  std::vector<QForm3<T>> out;
  for (auto& v : nullspace(m)) out.push_back(QForm3<T>::from_coeffs({v[0], v[1], v[2], v[3], v[4], v[5]}));
  return out;
}

/// Basis of the forms vanishing on every point.
template <class T>
std::vector<QForm3<T>> forms_vanishing_on(const std::vector<Vec3<T>>& pts) {
  std::vector<std::array<T, 6>> rows;
  for (const auto& p : pts) rows.push_back(evaluation_row(p));
  return kernel_forms(rows);
}

template <class T>
std::vector<QForm3<T>> forms_vanishing_on(const std::vector<Vec2<T>>& pts) {
  std::vector<Vec3<T>> lifted;
  for (const auto& p : pts) lifted.emplace_back(p);
  return forms_vanishing_on(lifted);
}

template <class T>
struct Tangency {
  int index;      // which point the direction is attached to
  Vec3<T> dir;    // dq_v(dir) = 0 is imposed
};

template <class T>
struct TangentForms {
  std::vector<QForm3<T>> basis;
  bool flagged = false;  // some direction lies in a plane spanned by its point and another point
};

template <class T>
TangentForms<T> forms_with_tangency(const std::vector<Vec3<T>>& pts, const std::vector<Tangency<T>>& tangents) {
  std::vector<std::array<T, 6>> rows;
  for (const auto& p : pts) rows.push_back(evaluation_row(p));
  TangentForms<T> out;
  for (const auto& t : tangents) {
    if (t.index < 0 || t.index >= static_cast<int>(pts.size())) throw InputError("tangency index out of range");
    rows.push_back(polar_row(pts[t.index], t.dir));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (static_cast<int>(i) == t.index) continue;
      if (sign(det3(pts[t.index], t.dir, pts[i])) == 0) out.flagged = true;
    }
  }
  out.basis = kernel_forms(rows);
  return out;
}

/// Affine linear form l(p) = a x + b y + c.
template <class T>
struct Line {
  T a{}, b{}, c{};
  T operator()(const Vec2<T>& p) const { return T(a * p.x + b * p.y + c); }
};

/// Line through p and q scaled so that it takes the value 1 at r.
template <class T>
Line<T> line_through(const Vec2<T>& p, const Vec2<T>& q, const Vec2<T>& r) {
  Vec2<T> d = q - p;
  Line<T> l{T(-d.y), d.x, T(d.y * p.x - d.x * p.y)};
  T v = l(r);
  if (sign(v) == 0) throw InputError("collinear points where a triangle was expected");
  return {T(l.a / v), T(l.b / v), T(l.c / v)};
}

template <class T>
Line<T> line_through(const Vec2<T>& p, const Vec2<T>& q) {
  Vec2<T> d = q - p;
  return {T(-d.y), d.x, T(d.y * p.x - d.x * p.y)};
}

template <class T>
QForm3<T> product(const Line<T>& l, const Line<T>& m) {
  return {T(l.a * m.a), T(l.b * m.b), T(l.c * m.c), T((l.a * m.b + l.b * m.a) / 2), T((l.a * m.c + l.c * m.a) / 2),
          T((l.b * m.c + l.c * m.b) / 2)};
}

/// Basis (d1, d2, d3) of the forms through a triple, with d_i negative inside the
/// triangle and the triple listed in counterclockwise order starting at the first input.
template <class T>
struct NaturalBasis {
  std::array<Vec2<T>, 3> z;
  std::array<QForm3<T>, 3> d;
};

template <class T>
NaturalBasis<T> natural_basis(const std::array<Vec2<T>, 3>& zin) {
  int o = orient(zin[0], zin[1], zin[2]);
  if (o == 0) throw InputError("natural basis needs a non-collinear triple");
  NaturalBasis<T> nb;
  nb.z = o > 0 ? zin : std::array<Vec2<T>, 3>{zin[0], zin[2], zin[1]};
  for (int i = 0; i < 3; ++i) {
    const Vec2<T>& zi = nb.z[i];
    const Vec2<T>& zj = nb.z[(i + 1) % 3];
    const Vec2<T>& zk = nb.z[(i + 2) % 3];
    nb.d[i] = -product(line_through(zi, zj, zk), line_through(zi, zk, zj));
  }
  return nb;
}

/// Form with T-coordinates t in the natural basis.
template <class T>
QForm3<T> from_t(const NaturalBasis<T>& nb, const std::array<T, 3>& t) {
  return nb.d[0].scaled(t[0]) + nb.d[1].scaled(t[1]) + nb.d[2].scaled(t[2]);
}

/// The three line-pair members of the pencil through four points in general position.
template <class T>
struct LinePair {
  std::array<int, 4> partition;  // {a, b | c, d}
  QForm3<T> form;
};

template <class T>
std::array<LinePair<T>, 3> degenerate_members(const std::array<Vec2<T>, 4>& f) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k)
        if (orient(f[i], f[j], f[k]) == 0) throw InputError("four points not in general position");
  const int parts[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  std::array<LinePair<T>, 3> out;
  for (int p = 0; p < 3; ++p) {
    const int* s = parts[p];
    out[p].partition = {s[0], s[1], s[2], s[3]};
    out[p].form = product(line_through(f[s[0]], f[s[1]]), line_through(f[s[2]], f[s[3]]));
  }
  return out;
}

template <class T>
QForm3<T> QForm3<T>::compose_affine(const Mat2<T>& M, const Vec2<T>& c) const {
  // q'(p) = q(M^{-1}(p - c)); write N = M^{-1}, s = -N c, so q'(p) = q(N p + s).
  Mat2<T> N = M.inverse();
  Vec2<T> s = -(N * c);
  // Homogeneous matrix H = [[N, s], [0, 1]]; result Gram is H^T A H.
  T H[3][3] = {{N.a, N.b, s.x}, {N.c, N.d, s.y}, {T(0), T(0), T(1)}};
  T G[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T acc(0);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) acc += H[k][i] * entry(k, l) * H[l][j];
      G[i][j] = acc;
    }
  return {G[0][0], G[1][1], G[2][2], G[0][1], G[0][2], G[1][2]};
}

template <class T>
std::string QForm3<T>::str() const {
  std::string s = "[";
  auto c = coeffs();
  for (int i = 0; i < 6; ++i) {
    if (i) s += ", ";
    s += Scalar<T>::str(c[i]);
  }
  return s + "]";
}

}  // namespace flatconic
