#include "flatconic/geom.hpp"

#include <Eigen/Dense>
#include <numbers>
#include <numeric>

namespace flatconic {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Mat2d lower_of(const QForm3<double>& q) { return q.lower(); }

double norm(const Vec2d& v) { return std::hypot(v.x, v.y); }

Vec2d unit(const Vec2d& v) {
  double n = norm(v);
  return {v.x / n, v.y / n};
}

double max_abs(const Mat2d& m) { return std::max({std::fabs(m.a), std::fabs(m.b), std::fabs(m.c), std::fabs(m.d)}); }

}  // namespace

Mat2d cholesky_upper(const Mat2d& q) {
  double s = std::max(max_abs(q), 1e-300);
  if (!(q.a > 1e-14 * s) || !(q.a * q.d - q.b * q.c > 1e-14 * s * s))
    throw InputError("form is not positive definite");
  double l11 = std::sqrt(q.a);
  double l12 = q.b / l11;
  double l22 = std::sqrt(q.d - l12 * l12);
  return {l11, l12, 0.0, l22};
}

Mat2d q_rotation(const Mat2d& q, double theta) {
  Mat2d L = cholesky_upper(q);
  Mat2d R{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
  return L.inverse() * R * L;
}

double bilinear(const Mat2d& q, const Vec2d& v, const Vec2d& w) { return dot(v, q * w); }

double q_angle(const Mat2d& q, const Vec2d& x, const Vec2d& y) {
  Mat2d L = cholesky_upper(q);
  Vec2d X = L * x, Y = L * y;
  double nx = norm2(X), ny = norm2(Y);
  if (std::fabs(nx - ny) > 1e-9 * std::max({nx, ny, 1.0})) throw InputError("points lie on different q-circles");
  double th = std::atan2(cross(X, Y), dot(X, Y));
  if (th <= 0) th += kTwoPi;
  if (std::fabs(th - kTwoPi) < 1e-15 && norm(X - Y) <= 1e-12 * std::sqrt(nx)) throw InputError("points coincide");
  return th;
}

Vec2d oriented_bisector(const Mat2d& q, const Vec2d& x, const Vec2d& y) {
  double th = q_angle(q, x, y);
  return q_rotation(q, th / 2) * x;
}

QuadrupleForm quadruple_form(const Mat2d& q, const std::array<Vec2d, 4>& x) {
  std::array<double, 4> th{0, 0, 0, 0};
  for (int i = 1; i < 4; ++i) {
    th[i] = q_angle(q, x[0], x[i]);
    if (th[i] <= th[i - 1]) throw InputError("quadruple ordering is not compatible with the rotation sense");
  }
  Vec2d v01 = oriented_bisector(q, x[0], x[1]);
  Vec2d v23 = oriented_bisector(q, x[2], x[3]);
  Vec2d a = q * v01, b = q * v23;  // alpha forms as covectors
  QuadrupleForm out;
  out.qq = {-a.x * b.x, -(a.x * b.y + a.y * b.x) / 2, -(a.x * b.y + a.y * b.x) / 2, -a.y * b.y};
  Eigen::Matrix2d A, B;
  A << out.qq.a, out.qq.b, out.qq.c, out.qq.d;
  B << q.a, q.b, q.c, q.d;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(A, B);
  out.lambda_minus = es.eigenvalues()(0);
  out.lambda_plus = es.eigenvalues()(1);
  out.l_minus = unit({es.eigenvectors()(0, 0), es.eigenvectors()(1, 0)});
  out.l_plus = unit({es.eigenvectors()(0, 1), es.eigenvectors()(1, 1)});
  double mean = (th[0] + th[1] + th[2] + th[3]) / 4;
  out.u = q_rotation(q, mean) * x[0];
  return out;
}

EllipseNormalization normalize_ellipse(const QForm3<double>& q) {
  if (classify(q) != Kind::EllipseInterior) throw InputError("normalize_ellipse needs an ellipse interior form");
  Mat2d A = lower_of(q);
  EllipseNormalization n;
  n.t = A.inverse() * Vec2d{q.a13, q.a23};
  double r2 = -q.det() / q.det_lower();
  n.lambda = 1 / std::sqrt(r2);
  n.unit = A;
  return n;
}

HomothetyClass homothety_class(const QForm3<double>& q) {
  HomothetyClass c;
  c.kind = classify(q);
  if (c.kind == Kind::EllipseInterior) {
    Mat2d A = q.lower();
    double k = 1 / std::sqrt(A.det());
    c.form = {k * A.a, k * A.b, k * A.c, k * A.d};
  } else if (c.kind == Kind::Strip) {
    Vec2d n = std::fabs(q.a11) >= std::fabs(q.a22) ? Vec2d{q.a11, q.a12} : Vec2d{q.a12, q.a22};
    Vec2d v = unit({-n.y, n.x});
    if (v.y < 0 || (v.y == 0 && v.x < 0)) v = -v;
    c.dir = v;
    c.angle = std::atan2(v.y, v.x);
    if (c.angle >= std::numbers::pi) c.angle -= std::numbers::pi;
  } else {
    throw InputError("homothety class is defined for ellipses and strips only");
  }
  return c;
}

bool same_class(const HomothetyClass& a, const HomothetyClass& b, double tol) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::EllipseInterior) {
    Mat2d d{a.form.a - b.form.a, a.form.b - b.form.b, a.form.c - b.form.c, a.form.d - b.form.d};
    return max_abs(d) <= tol * std::max(1.0, max_abs(a.form));
  }
  double da = std::fabs(a.angle - b.angle);
  return std::min(da, std::numbers::pi - da) <= tol;
}

HPoint h_point(const HomothetyClass& c) {
  HPoint p;
  if (c.kind == Kind::EllipseInterior) {
    p.x = -c.form.b / c.form.a;
    p.y = 1 / c.form.a;
  } else if (c.kind == Kind::Strip) {
    p.ideal = true;
    if (std::fabs(c.dir.y) < 1e-15) {
      p.infinity = true;
    } else {
      p.x = c.dir.x / c.dir.y;
    }
  } else {
    throw InputError("no hyperbolic point for this kind");
  }
  return p;
}

std::pair<long, long> strip_slope(const QForm3<Rational>& q) {
  if (classify(q) != Kind::Strip) throw InputError("strip_slope needs a strip");
  Vec2<Rational> n = sgn(q.a11) != 0 ? Vec2<Rational>{q.a11, q.a12} : Vec2<Rational>{q.a12, q.a22};
  Rational vx = -n.y, vy = n.x;
  mpz_class den = lcm(vx.get_den(), vy.get_den());
  mpz_class px = vx.get_num() * (den / vx.get_den());
  mpz_class py = vy.get_num() * (den / vy.get_den());
  mpz_class g = gcd(px, py);
  px /= g;
  py /= g;
  if (py < 0 || (py == 0 && px < 0)) {
    px = -px;
    py = -py;
  }
  if (!px.fits_slong_p() || !py.fits_slong_p()) throw ToleranceError("strip slope out of range");
  return {px.get_si(), py.get_si()};
}

namespace {

QForm3<double> line_pair(const Vec2d& p, const Vec2d& q, const Vec2d& pos1, const Vec2d& r, const Vec2d& s,
                         const Vec2d& pos2) {
  Line<double> l1 = line_through(p, q, pos1);
  Line<double> l2 = line_through(r, s, pos2);
  return -product(l1, l2);
}

}  // namespace

Config make_config(const QForm3<double>& u, const std::vector<Vec2d>& z, double eps) {
  if (classify(u) != Kind::EllipseInterior) throw InputError("configuration needs an ellipse");
  int n = static_cast<int>(z.size());
  if (n < 5) throw InputError("configuration needs at least five boundary points");
  Config c{u, z, {}};
  double us = u.scale();
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      QForm3<double> p = line_pair(z[i], z[(i + 1) % n], z[j], z[j], z[(j + 1) % n], z[i]);
      p = p.scaled(us / p.scale());
      double e = eps;
      QForm3<double> r = u - p.scaled(e);
      while (classify(r) != Kind::EllipseInterior && e > 1e-12) {
        e /= 2;
        r = u - p.scaled(e);
      }
      c.sub[{i, j}] = r;
    }
  return c;
}

Config transform_config(const Config& c, const Mat2d& g, const Vec2d& shift) {
  Config o;
  o.u = c.u.compose_affine(g, shift);
  for (const auto& p : c.z) o.z.push_back(g * p + shift);
  for (const auto& [k, f] : c.sub) o.sub[k] = f.compose_affine(g, shift);
  return o;
}

namespace {

/// Normalized coordinates in which the boundary is {F = 1} with F the determinant-one class form.
struct UnitFrame {
  Vec2d t;
  double lambda;
  Mat2d f;
  Vec2d operator()(const Vec2d& p) const { return lambda * (p + t); }
};

UnitFrame unit_frame(const QForm3<double>& q) {
  EllipseNormalization n = normalize_ellipse(q);
  double k = std::sqrt(n.unit.det());
  double rho2 = 1 / (n.lambda * n.lambda);
  return {n.t, std::sqrt(k / rho2), {n.unit.a / k, n.unit.b / k, n.unit.c / k, n.unit.d / k}};
}

}  // namespace

LemmaReport check_geometric_lemma(const Config& a, const Config& b, const std::vector<int>& beta) {
  LemmaReport rep;
  int n = static_cast<int>(a.z.size());
  auto violate = [&](const std::string& s) {
    rep.preconditions = false;
    rep.violations.push_back(s);
  };
  if (static_cast<int>(b.z.size()) != n || static_cast<int>(beta.size()) != n) {
    violate("configurations have different sizes");
    return rep;
  }
  std::vector<int> seen(n, 0);
  for (int x : beta)
    if (x < 0 || x >= n || seen[x]++) {
      violate("beta is not a bijection");
      return rep;
    }
  for (int i = 0; i < n; ++i)
    if (beta[(i + 1) % n] != (beta[i] + 1) % n) violate("beta does not commute with the successor at " + std::to_string(i));
  if (!same_class(homothety_class(a.u), homothety_class(b.u), 1e-9)) violate("ellipses are in different homothety classes");
  for (const auto& [k, f] : a.sub) {
    int x = beta[k.first], y = beta[k.second];
    std::pair<int, int> kb{std::min(x, y), std::max(x, y)};
    auto it = b.sub.find(kb);
    if (it == b.sub.end()) {
      violate("missing subconic for pair " + std::to_string(k.first) + "," + std::to_string(k.second));
      continue;
    }
    if (!same_class(homothety_class(f), homothety_class(it->second), 1e-9))
      violate("subconic classes differ for pair " + std::to_string(k.first) + "," + std::to_string(k.second));
  }

  for (int i = 0; i < n; ++i) {
    Vec2d da = unit(a.z[(i + 1) % n] - a.z[i]);
    Vec2d db = unit(b.z[(beta[i] + 1) % n] - b.z[beta[i]]);
    double res = std::fabs(cross(da, db)) + (dot(da, db) < 0 ? 2.0 : 0.0);
    rep.max_parallel_residual = std::max(rep.max_parallel_residual, res);
    if (res <= 1e-9)
      ++rep.parallel;
    else
      ++rep.not_parallel;
  }

  // Alternating sum of quadruple mean angles recovers the chord bisector angle.
  auto alternating = [&](const Config& c, int x, double& bis, Vec2d& vx) {
    UnitFrame uf = unit_frame(c.u);
    auto at = [&](int k) { return uf(c.z[((x + k) % n + n) % n]); };
    Vec2d ref = at(-2);
    std::map<int, double> th;
    th[-2] = 0;
    for (int k = -1; k <= 2; ++k) th[k] = q_angle(uf.f, ref, at(k));
    th[3] = n == 5 ? kTwoPi : q_angle(uf.f, ref, at(3));
    double e1 = th[0] + th[1] + th[-2] + th[-1];
    double e2 = th[-2] + th[-1] + th[1] + th[2];
    double e3 = th[0] + th[1] + th[2] + th[3];
    double e4 = th[2] + th[3] + th[-1] + th[0];
    double e5 = th[1] + th[2] + th[-1] + th[0];
    double alt = (e1 - e2 + e3 - e4 + e5) / 4;
    bis = alt;
    vx = oriented_bisector(uf.f, at(0), at(1));
    return std::fabs(alt - (th[0] + th[1]) / 2);
  };
  for (int i = 0; i < n; ++i) {
    double ba = 0, bb = 0;
    Vec2d va, vb;
    rep.max_alternating_residual = std::max(rep.max_alternating_residual, alternating(a, i, ba, va));
    rep.max_alternating_residual = std::max(rep.max_alternating_residual, alternating(b, beta[i], bb, vb));
    rep.max_bisector_residual = std::max(rep.max_bisector_residual, norm(va - vb));
  }
  rep.passed = rep.preconditions && rep.not_parallel == 0;
  return rep;
}

}  // namespace flatconic
