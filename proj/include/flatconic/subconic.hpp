#pragma once

#include <optional>
#include <string>

#include "flatconic/quadform.hpp"

namespace flatconic {

enum class Kind { EllipseInterior, Strip, HalfPlane, ParabolaInterior, Other };

std::string kind_name(Kind k);

template <class T>
Kind classify(const QForm3<T>& q) {
  Signature s = signature(q);
  Signature s2 = signature(q.lower());
  if (s.is(2, 1) && s2.is(2, 0)) return Kind::EllipseInterior;
  if (s.is(1, 1) && s2.is(1, 0)) return Kind::Strip;
  if (s.is(1, 1) && s2.is(0, 0)) return Kind::HalfPlane;
  if (s.is(2, 1) && s2.is(1, 0)) return Kind::ParabolaInterior;
  return Kind::Other;
}

inline bool is_convex_kind(Kind k) { return k != Kind::Other; }

/// Region {p : q(p, 1) < 0}.
template <class T>
struct Subconic {
  QForm3<T> q;
  Kind kind = Kind::Other;
  bool near_degenerate = false;
};

template <class T>
Subconic<T> make_subconic(const QForm3<T>& q) {
  Subconic<T> u;
  u.q = q;
  u.kind = classify(q);
  if constexpr (!Scalar<T>::exact) u.near_degenerate = signature(q).near_degenerate || signature(q.lower()).near_degenerate;
  return u;
}

template <class T>
double eval_scale(const QForm3<T>& q, const Vec2<T>& p) {
  double r = 1.0 + std::fabs(to_double(p.x)) + std::fabs(to_double(p.y));
  return q.scale() * r * r;
}

/// -1 inside, 0 on the boundary, +1 outside.
template <class T>
int contains(const Subconic<T>& u, const Vec2<T>& p) {
  return sign(u.q(p), eval_scale(u.q, p));
}

/// Leading nonzero coefficient becomes +-1 for rationals; floats are scaled to unit max-norm.
template <class T>
QForm3<T> canonical(const QForm3<T>& q) {
  if constexpr (Scalar<T>::exact) {
    for (const T& c : q.coeffs())
      if (sgn(c) != 0) return q.scaled(T(1 / Scalar<T>::abs(c)));
    return q;
  } else {
    double s = q.scale();
    return s > 0 ? q.scaled(1.0 / s) : q;
  }
}

/// Sign convention: prefer the sign whose region is one of the convex kinds,
/// otherwise make the leading coefficient positive.
template <class T>
QForm3<T> normalize_sign(const QForm3<T>& q) {
  if (is_convex_kind(classify(q))) return q;
  QForm3<T> m = -q;
  if (is_convex_kind(classify(m))) return m;
  double s = q.scale();
  for (const T& c : q.coeffs()) {
    int sg = sign(c, s);
    if (sg != 0) return sg > 0 ? q : m;
  }
  return q;
}

template <class T>
Subconic<T> conic_through_five(const std::array<Vec2<T>, 5>& pts) {
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      if (pts[i] == pts[j]) throw InputError("repeated point in five-point conic");
      for (int k = j + 1; k < 5; ++k)
        if (orient(pts[i], pts[j], pts[k]) == 0) throw InputError("three of the five points are collinear");
    }
  auto basis = forms_vanishing_on(std::vector<Vec2<T>>(pts.begin(), pts.end()));
  if (basis.size() != 1) throw InputError("five points do not determine a unique conic");
  return make_subconic(canonical(normalize_sign(basis[0])));
}

/// Coordinates of q in the affine plane sum(t) = 1 of the natural basis.
template <class T>
std::array<T, 3> t_coordinates(const QForm3<T>& q, const NaturalBasis<T>& nb) {
  Matrix<T> m(6, 4);
  for (int j = 0; j < 3; ++j) {
    auto c = nb.d[j].coeffs();
    for (int i = 0; i < 6; ++i) m(i, j) = c[i];
  }
  auto qc = q.coeffs();
  for (int i = 0; i < 6; ++i) m(i, 3) = T(-qc[i]);
  auto ker = nullspace(m);
  if (ker.size() != 1 || sign(ker[0][3]) == 0) throw InputError("form does not vanish on the triple");
  std::array<T, 3> lam;
  T s(0);
  for (int j = 0; j < 3; ++j) {
    lam[j] = T(ker[0][j] / ker[0][3]);
    s += lam[j];
  }
  if (sign(s) <= 0) throw InputError("form is not a positive combination of the natural basis");
  for (auto& v : lam) v = T(v / s);
  return lam;
}

}  // namespace flatconic
