#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatconic/subconic.hpp"

namespace flatconic {

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;

/// Upper triangular L with q = L^T L.
Mat2d cholesky_upper(const Mat2d& q);

/// One-parameter group of q-rotations, counterclockwise in the coordinates of the Cholesky factor.
Mat2d q_rotation(const Mat2d& q, double theta);

double bilinear(const Mat2d& q, const Vec2d& v, const Vec2d& w);

/// Smallest theta > 0 with e(theta) x = y; x, y on a common q-circle.
double q_angle(const Mat2d& q, const Vec2d& x, const Vec2d& y);

Vec2d oriented_bisector(const Mat2d& q, const Vec2d& x, const Vec2d& y);

struct QuadrupleForm {
  Mat2d qq;  // q_Q as a symmetric 2x2 matrix
  Vec2d l_plus, l_minus;
  double lambda_plus = 0, lambda_minus = 0;
  Vec2d u;  // eigenvector associated to the ordered quadruple
};

QuadrupleForm quadruple_form(const Mat2d& q, const std::array<Vec2d, 4>& x);

/// p -> lambda (p + t) sends the boundary of the ellipse onto {unit(p) = 1}.
struct EllipseNormalization {
  Vec2d t;
  double lambda = 1;
  Mat2d unit;
  Vec2d apply(const Vec2d& p) const { return lambda * (p + t); }
};

EllipseNormalization normalize_ellipse(const QForm3<double>& q);

struct HomothetyClass {
  Kind kind = Kind::Other;
  Mat2d form;               // ellipses: determinant one
  double angle = 0;         // strips: boundary direction in [0, pi)
  Vec2d dir;                // strips: unit boundary direction
};

HomothetyClass homothety_class(const QForm3<double>& q);

template <class T>
HomothetyClass homothety_class(const Subconic<T>& u) {
  return homothety_class(QForm3<double>{to_double(u.q.a11), to_double(u.q.a22), to_double(u.q.a33),
                                        to_double(u.q.a12), to_double(u.q.a13), to_double(u.q.a23)});
}

bool same_class(const HomothetyClass& a, const HomothetyClass& b, double tol = 1e-9);

/// Point of the closed upper half-plane; ideal points have y = 0, and infinity sets the flag.
struct HPoint {
  double x = 0, y = 0;
  bool ideal = false, infinity = false;
};

HPoint h_point(const HomothetyClass& c);

/// Boundary direction of an exact strip as coprime integers (p, q), q > 0 or (1, 0).
/// The ideal point is p/q.
std::pair<long, long> strip_slope(const QForm3<Rational>& q);

struct Config {
  QForm3<double> u;
  std::vector<Vec2d> z;                              // counterclockwise on the boundary of u
  std::map<std::pair<int, int>, QForm3<double>> sub;  // nonsuccessive (i, j), i < j
};

/// U_{x,y} = U - eps * p_{x,y}, where p_{x,y} is the line pair through the chords (x, s x) and (y, s y).
Config make_config(const QForm3<double>& u, const std::vector<Vec2d>& z, double eps = 0.05);

/// Image of a configuration under p -> g p + c.
Config transform_config(const Config& c, const Mat2d& g, const Vec2d& shift);

struct LemmaReport {
  bool preconditions = true;
  std::vector<std::string> violations;
  int parallel = 0, not_parallel = 0;
  double max_parallel_residual = 0;
  double max_alternating_residual = 0;
  double max_bisector_residual = 0;
  bool passed = false;
};

LemmaReport check_geometric_lemma(const Config& a, const Config& b, const std::vector<int>& beta);

}  // namespace flatconic
