#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "flatconic/scalar.hpp"

namespace flatconic {

template <class T>
struct Vec2 {
  T x{}, y{};
  Vec2() = default;
  Vec2(T a, T b) : x(std::move(a)), y(std::move(b)) {}
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
};

template <class T>
Vec2<T> operator+(const Vec2<T>& a, const Vec2<T>& b) {
  return {T(a.x + b.x), T(a.y + b.y)};
}
template <class T>
Vec2<T> operator-(const Vec2<T>& a, const Vec2<T>& b) {
  return {T(a.x - b.x), T(a.y - b.y)};
}
template <class T>
Vec2<T> operator-(const Vec2<T>& a) {
  return {T(-a.x), T(-a.y)};
}
template <class T>
Vec2<T> operator*(const T& s, const Vec2<T>& a) {
  return {T(s * a.x), T(s * a.y)};
}
template <class T>
T cross(const Vec2<T>& a, const Vec2<T>& b) {
  return T(a.x * b.y - a.y * b.x);
}
template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return T(a.x * b.x + a.y * b.y);
}
template <class T>
T norm2(const Vec2<T>& a) {
  return dot(a, a);
}

/// Lexicographic order, exact for rationals.
template <class T>
bool lex_less(const Vec2<T>& a, const Vec2<T>& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

template <class T>
int orient(const Vec2<T>& a, const Vec2<T>& b, const Vec2<T>& c) {
  Vec2<T> u = b - a, v = c - a;
  double scale = 1.0;
  if constexpr (!Scalar<T>::exact) scale = std::sqrt(to_double(norm2(u)) * to_double(norm2(v)));
  return sign(cross(u, v), scale);
}

template <class T>
Vec2<double> to_double(const Vec2<T>& v) {
  return {to_double(v.x), to_double(v.y)};
}

template <class T>
struct Vec3 {
  T x{}, y{}, z{};
  Vec3() = default;
  Vec3(T a, T b, T c) : x(std::move(a)), y(std::move(b)), z(std::move(c)) {}
  explicit Vec3(const Vec2<T>& p) : x(p.x), y(p.y), z(T(1)) {}
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

template <class T>
T det3(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return T(a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x));
}

/// 2x2 matrix acting on column vectors.
template <class T>
struct Mat2 {
  T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]
  Vec2<T> operator*(const Vec2<T>& v) const { return {T(a * v.x + b * v.y), T(c * v.x + d * v.y)}; }
  Mat2 operator*(const Mat2& m) const {
    return {T(a * m.a + b * m.c), T(a * m.b + b * m.d), T(c * m.a + d * m.c), T(c * m.b + d * m.d)};
  }
  T det() const { return T(a * d - b * c); }
  Mat2 inverse() const {
    T k = det();
    return {T(d / k), T(-b / k), T(-c / k), T(a / k)};
  }
  Mat2 transpose() const { return {a, c, b, d}; }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
};

/// Dense row-major matrix used by the elimination routines.
template <class T>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<T> data;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), T(0)) {}
  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
};

/// Kernel basis of M. Exact scalars use fraction-free (Bareiss) elimination,
/// floats use ordinary elimination; both pivot over the whole remaining block.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m) {
  const int R = m.rows, C = m.cols;
  std::vector<int> perm(C);
  for (int j = 0; j < C; ++j) perm[j] = j;
  double scale = 0.0;
  if constexpr (!Scalar<T>::exact)
    for (const T& v : m.data) scale = std::max(scale, std::fabs(to_double(v)));

  int rank = 0;
  T prev(1);
  for (int k = 0; k < std::min(R, C); ++k) {
    int pi = -1, pj = -1;
    if constexpr (Scalar<T>::exact) {
      for (int i = k; i < R && pi < 0; ++i)
        for (int j = k; j < C; ++j)
          if (sgn(m(i, j)) != 0) {
            pi = i;
            pj = j;
            break;
          }
    } else {
      double best = tolerance() * std::max(1.0, scale);
      for (int i = k; i < R; ++i)
        for (int j = k; j < C; ++j)
          if (std::fabs(m(i, j)) > best) {
            best = std::fabs(m(i, j));
            pi = i;
            pj = j;
          }
    }
    if (pi < 0) break;
    if (pi != k)
      for (int j = 0; j < C; ++j) std::swap(m(pi, j), m(k, j));
    if (pj != k) {
      for (int i = 0; i < R; ++i) std::swap(m(i, pj), m(i, k));
      std::swap(perm[pj], perm[k]);
    }
    for (int i = k + 1; i < R; ++i) {
      if constexpr (Scalar<T>::exact) {
        for (int j = k + 1; j < C; ++j) m(i, j) = T((m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev);
      } else {
        T f = m(i, k) / m(k, k);
        for (int j = k + 1; j < C; ++j) m(i, j) -= f * m(k, j);
      }
      m(i, k) = T(0);
    }
    if constexpr (Scalar<T>::exact) {
      for (int i = k + 1; i < R; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = T(0);
      prev = m(k, k);
    }
    rank = k + 1;
  }

  std::vector<std::vector<T>> basis;
  for (int f = rank; f < C; ++f) {
    std::vector<T> x(C, T(0));
    x[f] = T(1);
    for (int i = rank - 1; i >= 0; --i) {
      T s(0);
      for (int j = i + 1; j < C; ++j) s += m(i, j) * x[j];
      x[i] = T(-s / m(i, i));
    }
    std::vector<T> v(C, T(0));
    for (int j = 0; j < C; ++j) v[perm[j]] = x[j];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
int rank_of(const Matrix<T>& m) {
  return m.cols - static_cast<int>(nullspace(m).size());
}

}  // namespace flatconic
