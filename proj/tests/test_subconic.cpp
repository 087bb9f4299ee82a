#include "catch_amalgamated.hpp"
#include "gen.hpp"

using namespace flatconic;
using Q = Rational;

TEST_CASE("canonical regions classify") {
  // x^2 + y^2 - 1
  CHECK(classify(QForm3<Q>{1, 1, -1, 0, 0, 0}) == Kind::EllipseInterior);
  // x^2 - 1: the strip |x| < 1
  CHECK(classify(QForm3<Q>{1, 0, -1, 0, 0, 0}) == Kind::Strip);
  // x < 0 as 2 * (1/2) x z
  CHECK(classify(QForm3<Q>{0, 0, 0, 0, Q(1, 2), 0}) == Kind::HalfPlane);
  // y^2 - x
  CHECK(classify(QForm3<Q>{0, 1, 0, 0, Q(-1, 2), 0}) == Kind::ParabolaInterior);
  // complement of a disc and an empty region
  CHECK(classify(QForm3<Q>{-1, -1, 1, 0, 0, 0}) == Kind::Other);
  CHECK(classify(QForm3<Q>{1, 1, 1, 0, 0, 0}) == Kind::Other);
  // hyperbola region
  CHECK(classify(QForm3<Q>{1, -1, -1, 0, 0, 0}) == Kind::Other);
}

TEST_CASE("classification is invariant under positive scaling and affine maps") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    QForm3<Q> q = rng.form(5);
    Q s = 1 + Scalar<Q>::abs(rng.rational(5, 4));
    CHECK(classify(q) == classify(q.scaled(s)));
    if (trial % 10 == 0) CHECK(classify(q) == classify(q.compose_affine(rng.sl2z(), rng.point(3, 2))));
  }
}

TEST_CASE("float classification agrees with exact on well-conditioned forms") {
  gen::Rng rng(22);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    QForm3<Q> q = rng.form(5);
    if (signature(q).zero != 0 || signature(q.lower()).zero != 0) continue;
    QForm3<double> d{q.a11.get_d(), q.a22.get_d(), q.a33.get_d(), q.a12.get_d(), q.a13.get_d(), q.a23.get_d()};
    CHECK(classify(q) == classify(d));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("conic through five points of a known ellipse recovers it") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Vec2<Q>, 5> pts;
    std::vector<Q> ts;
    while (ts.size() < 5) {
      Q t = rng.rational(4, 5);
      if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    Mat2<Q> g{rng.rational(3, 2), rng.rational(3, 2), rng.rational(3, 2), rng.rational(3, 2)};
    if (g.det() == 0) continue;
    Vec2<Q> c = rng.point(4, 3);
    for (int i = 0; i < 5; ++i) pts[i] = g * gen::circle_point(ts[i]) + c;
    QForm3<Q> expected = QForm3<Q>{1, 1, -1, 0, 0, 0}.compose_affine(g, c);
    Subconic<Q> u = conic_through_five(pts);
    CHECK(u.kind == Kind::EllipseInterior);
    CHECK(gen::proportional(u.q, expected));
    // the interior sign convention: the image of the centre is inside
    CHECK(contains(u, c) < 0);
  }
}

TEST_CASE("conic through five rejects degenerate input") {
  std::array<Vec2<Q>, 5> col{Vec2<Q>{0, 0}, Vec2<Q>{1, 1}, Vec2<Q>{2, 2}, Vec2<Q>{3, 0}, Vec2<Q>{0, 3}};
  CHECK_THROWS_AS(conic_through_five(col), InputError);
  std::array<Vec2<Q>, 5> rep{Vec2<Q>{0, 0}, Vec2<Q>{0, 0}, Vec2<Q>{2, 1}, Vec2<Q>{3, 0}, Vec2<Q>{0, 3}};
  CHECK_THROWS_AS(conic_through_five(rep), InputError);
}

TEST_CASE("t coordinates round trip through the natural basis") {
  gen::Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    auto pts = gen::general_position(rng, 3);
    auto nb = natural_basis(std::array<Vec2<Q>, 3>{pts[0], pts[1], pts[2]});
    Q t1 = rng.rational(3, 4), t2 = rng.rational(3, 4);
    std::array<Q, 3> t{t1, t2, Q(1 - t1 - t2)};
    QForm3<Q> q = from_t(nb, t);
    if (q.is_zero()) continue;
    Q k = 1 + Scalar<Q>::abs(rng.rational(3, 2));
    auto back = t_coordinates(q.scaled(k), nb);
    CHECK(back[0] == t[0]);
    CHECK(back[1] == t[1]);
    CHECK(back[2] == t[2]);
  }
}

TEST_CASE("canonical form is scale free") {
  gen::Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    QForm3<Q> q = rng.form();
    if (q.is_zero()) continue;
    Q k = 1 + Scalar<Q>::abs(rng.rational(3, 2));
    CHECK(canonical(q) == canonical(q.scaled(k)));
  }
}
