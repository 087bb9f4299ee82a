#pragma once

// Template bodies for veech.hpp.

namespace flatconic {

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& x) {
  if (sgn(x) < 0) return std::nullopt;
  mpz_class n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

template <class T>
bool same_map(const AffineCandidate<T>& a, const AffineCandidate<T>& b) {
  auto eq = [](const T& x, const T& y) { return sign(T(x - y), 1.0 + std::fabs(to_double(x))) == 0; };
  return eq(a.linear.a, b.linear.a) && eq(a.linear.b, b.linear.b) && eq(a.linear.c, b.linear.c) &&
         eq(a.linear.d, b.linear.d) && eq(a.translation.x, b.translation.x) && eq(a.translation.y, b.translation.y);
}

}  // namespace detail

template <class T>
AffineCandidate<T> make_candidate(const Mat2<T>& g, const Vec2<T>& c) {
  AffineCandidate<T> out;
  out.linear = g;
  out.translation = c;
  T det = g.det();
  if (sign(det) <= 0) throw InputError("affine map reverses orientation");
  out.h = std::sqrt(to_double(det));
  if constexpr (Scalar<T>::exact) {
    out.h_exact = detail::rational_sqrt(det);
    if (out.h_exact) {
      const Rational& h = *out.h_exact;
      out.unimodular = Mat2<T>{T(g.a / h), T(g.b / h), T(g.c / h), T(g.d / h)};
    }
  } else {
    double h = out.h;
    out.unimodular = Mat2<T>{g.a / h, g.b / h, g.c / h, g.d / h};
  }
  return out;
}

template <class T>
AffineCandidate<T> psi_of_quadruple(const std::array<Vec2<T>, 4>& z, const std::array<Vec2<T>, 4>& w) {
  Mat2<T> M{T(z[1].x - z[0].x), T(z[2].x - z[0].x), T(z[1].y - z[0].y), T(z[2].y - z[0].y)};
  Mat2<T> N{T(w[1].x - w[0].x), T(w[2].x - w[0].x), T(w[1].y - w[0].y), T(w[2].y - w[0].y)};
  if (sign(M.det()) == 0 || sign(N.det()) == 0) throw InputError("quadruple is not in general position");
  Mat2<T> g = N * M.inverse();
  Vec2<T> c = w[0] - g * z[0];
  AffineCandidate<T> out = make_candidate(g, c);
  Vec2<T> img = g * z[3] + c;
  if (!detail::same_point(img, w[3])) throw InputError("fourth point is inconsistent with the affine map");
  return out;
}

template <class T>
AffineCandidate<T> reconstruct(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const CellMatching& phi) {
  FrontierBijection<T> beta = frontier_bijection(a, b, phi);
  std::optional<AffineCandidate<T>> ref;
  std::string ref_key;
  for (const auto& [ea, eb] : phi.edge) {
    (void)eb;
    const auto& q = a.edges[ea].quad;
    std::array<Vec2<T>, 4> w;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) {
      auto it = beta.image.find(point_key(q[i]));
      if (it == beta.image.end())
        ok = false;
      else
        w[i] = it->second;
    }
    if (!ok) continue;
    AffineCandidate<T> c = psi_of_quadruple(q, w);
    if (!ref) {
      ref = c;
      ref_key = a.edges[ea].key;
    } else if (!detail::same_map(*ref, c)) {
      throw InfeasibleError("quadruples " + ref_key + " and " + a.edges[ea].key + " give different affine maps");
    }
  }
  if (!ref) throw InfeasibleError("no matched quadruple has a complete frontier image");
  return *ref;
}

template <class T>
VeechReport veech_check(const Surface<T>& s, const Mat2<T>& g, const T& radius) {
  if (sign(T(g.det() - 1)) != 0) throw InputError("matrix must have determinant 1");
  VeechReport rep;
  rep.radius = to_double(radius);
  const double R = rep.radius;
  Chart<T> ch = develop(s, radius);
  const Vec2<T>& b = ch.base;
  double D = 0;
  for (const auto& poly : s.polygons) {
    double d = 0;
    for (const auto& p : poly)
      for (const auto& q : poly) d = std::max(d, std::sqrt(to_double(norm2(p - q))));
    D += d;
  }
  D *= 2;
  const double D0 = std::min(R / 2, D);
  if (ch.points.empty()) {
    rep.reason = "no cone points in the window";
    return rep;
  }
  const DevPoint<T>& z0 = ch.points.front();
  const int k0 = s.cones[z0.cone].k;
  const double fro = to_double(T(g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d));
  const double det = to_double(g.det());
  const double gn = std::sqrt((fro + std::sqrt(std::max(fro * fro - 4 * det * det, 0.0))) / 2);  // operator norm
  Mat2<T> gi = g.inverse();
  std::optional<std::vector<RigidConic<T>>> rigid;
  std::string last_reject;

  for (const auto& z : ch.points) {
    if (s.cones[z.cone].k != k0) continue;
    if (std::sqrt(to_double(norm2(z.pos - b))) > D0) continue;
    ++rep.candidates;
    Vec2<T> c = z.pos - g * z0.pos;
    auto F = [&](const Vec2<T>& p) { return g * p + c; };
    auto Finv = [&](const Vec2<T>& p) { return gi * (p - c); };
    Vec2<T> fb = F(b);
    double shift = std::sqrt(to_double(norm2(fb - b)));
    double rs = (R - shift) / gn;
    auto loc = ch.locate(fb);
    if (rs <= 0 || !loc) {
      ++rep.inconclusive;
      continue;
    }
    Chart<T> chf = develop(s, *loc, radius);
    std::string why;
    int inside = 0;
    for (const auto& p : ch.points) {
      if (std::sqrt(to_double(norm2(p.pos - b))) >= rs) continue;
      ++inside;
      int j = chf.find(F(p.pos));
      if (j < 0) {
        why = "image of " + point_key(p.pos) + " is not a cone point";
        break;
      }
      if (s.cones[chf.points[j].cone].k != s.cones[p.cone].k) {
        why = "cone angle changes at " + point_key(p.pos);
        break;
      }
    }
    if (why.empty())
      for (const auto& q : chf.points) {
        Vec2<T> p = Finv(q.pos);
        if (std::sqrt(to_double(norm2(p - b))) >= rs) continue;
        if (ch.find(p) < 0) {
          why = "preimage of " + point_key(q.pos) + " is not a cone point";
          break;
        }
      }
    if (why.empty() && inside >= 3) {
      if (!rigid) rigid = rigid_conics(ch);
      for (const auto& rc : *rigid) {
        if (rc.u.kind != Kind::EllipseInterior) continue;
        if (ellipse_max_distance(to_double(rc.u.q), to_double(b)) >= rs) continue;
        Subconic<T> img = make_subconic(canonical(rc.u.q.compose_affine(g, c)));
        std::vector<Vec2<T>> rim;
        FitResult fr = subconic_fits(chf, img, &rim);
        std::size_t nb = rim.size();
        if (fr.verdict != Fit::Fits || nb != rc.size()) {
          why = "rigid ellipse " + rc.u.q.str() + " is not mapped to a rigid ellipse";
          break;
        }
      }
    }
    if (!why.empty()) {
      ++rep.rejected;
      last_reject = why;
      continue;
    }
    if (inside < 3) {
      ++rep.inconclusive;
      continue;
    }
    rep.verdict = Verdict::MemberInWindow;
    rep.certificate_radius = rs;
    rep.reason = "translation part " + point_key(c);
    return rep;
  }
  if (rep.candidates > 0 && rep.rejected == rep.candidates && R / 2 >= D) {
    rep.verdict = Verdict::Rejected;
    rep.reason = last_reject;
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = rep.rejected == rep.candidates ? "window too small to exhaust the candidates" : "no candidate could be certified";
  }
  return rep;
}

template <class T>
Tessellation tessellate(const ComplexWindow<T>& w) {
  Tessellation t;
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    const auto& u = w.vertices[i].conic.u;
    t.vertices.push_back({h_point(homothety_class(u)), u.kind, static_cast<int>(i)});
  }
  for (const auto& e : w.edges) t.edges.push_back({e.ends[0], e.ends[1]});
  for (const auto& f : w.faces) t.faces.push_back({f.vertices, f.key, !f.complete});
  return t;
}

}  // namespace flatconic
