#include "catch_amalgamated.hpp"
#include "gen.hpp"

using namespace flatconic;
using Q = Rational;
using P = Vec2<Q>;

TEST_CASE("candidates factor into homothety and unimodular part") {
  auto c = make_candidate(Mat2<Q>{2, 2, 0, 2}, P{1, 0});
  REQUIRE(c.h_exact);
  CHECK(*c.h_exact == 2);
  REQUIRE(c.unimodular);
  CHECK(*c.unimodular == (Mat2<Q>{1, 1, 0, 1}));
  auto d = make_candidate(Mat2<Q>{2, 0, 0, 1}, P{0, 0});
  CHECK_FALSE(d.h_exact);
  CHECK(d.h == Catch::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(make_candidate(Mat2<Q>{0, 1, 1, 0}, P{0, 0}), InputError);
}

TEST_CASE("psi of a quadruple recovers random affine maps") {
  gen::Rng rng(51);
  int done = 0;
  while (done < 100) {
    Mat2<Q> g{rng.rational(3, 3), rng.rational(3, 3), rng.rational(3, 3), rng.rational(3, 3)};
    if (sgn(g.det()) <= 0) continue;
    P c = rng.point(5, 2);
    auto pts = gen::general_position(rng, 4);
    std::array<P, 4> z{pts[0], pts[1], pts[2], pts[3]}, w;
    for (int i = 0; i < 4; ++i) w[i] = g * z[i] + c;
    auto a = psi_of_quadruple(z, w);
    CHECK(a.linear == g);
    CHECK(a.translation == c);
    w[3] = w[3] + P{Q(1, 1000), 0};
    CHECK_THROWS_AS(psi_of_quadruple(z, w), InputError);
    ++done;
  }
}

TEST_CASE("veech check on the square torus") {
  auto s = gen::exact_surface("torus.json");
  CHECK(veech_check(s, Mat2<Q>{1, 1, 0, 1}, Q(6)).verdict == Verdict::MemberInWindow);
  CHECK(veech_check(s, Mat2<Q>{0, -1, 1, 0}, Q(6)).verdict == Verdict::MemberInWindow);
  CHECK(veech_check(s, Mat2<Q>{1, Q(1, 2), 0, 1}, Q(6)).verdict == Verdict::Rejected);
  CHECK_THROWS_AS(veech_check(s, Mat2<Q>{2, 0, 0, 1}, Q(6)), InputError);
}

TEST_CASE("random SL(2,Z) elements are members on the square torus") {
  auto s = gen::exact_surface("torus.json");
  gen::Rng rng(52);
  for (int trial = 0; trial < 5; ++trial) {
    Mat2<Q> g = rng.sl2z(3);
    auto r = veech_check(s, g, Q(8));
    CHECK(r.verdict != Verdict::Rejected);
  }
}

TEST_CASE("verdicts are monotone in the radius") {
  auto s = gen::exact_surface("torus.json");
  for (auto g : {Mat2<Q>{1, 1, 0, 1}, Mat2<Q>{2, 1, 1, 1}}) {
    auto big = veech_check(s, g, Q(6));
    REQUIRE(big.verdict == Verdict::MemberInWindow);
    for (int r : {1, 2, 3, 4}) CHECK(veech_check(s, g, Q(r)).verdict != Verdict::Rejected);
  }
}

TEST_CASE("mobius action is a group action") {
  gen::Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = rng.sl2z(), b = rng.sl2z();
    auto d = [](const Mat2<Q>& m) { return Mat2d{m.a.get_d(), m.b.get_d(), m.c.get_d(), m.d.get_d()}; };
    HPoint p{rng.real(-2, 2), rng.real(0.1, 2)};
    HPoint x = mobius(d(a), mobius(d(b), p));
    HPoint y = mobius(d(a * b), p);
    CHECK(x.x == Catch::Approx(y.x).margin(1e-9));
    CHECK(x.y == Catch::Approx(y.y).margin(1e-9));
    HPoint inf;
    inf.ideal = inf.infinity = true;
    HPoint i1 = mobius(d(a), mobius(d(b), inf)), i2 = mobius(d(a * b), inf);
    CHECK(i1.infinity == i2.infinity);
    if (!i1.infinity) CHECK(i1.x == Catch::Approx(i2.x).margin(1e-9));
  }
}

TEST_CASE("reconstruct recovers the identity") {
  auto s = gen::exact_surface("torus.json");
  auto ctx = make_context(s, Q(5));
  auto w = build_complex(ctx, default_seed(ctx), 10);
  auto c = reconstruct(w, w, match_cells(w, w, AffineMap<Q>{}));
  CHECK(c.linear == Mat2<Q>::identity());
  CHECK(c.translation == P{0, 0});
}

TEST_CASE("tessellation of the square torus uses rational ideal points") {
  auto s = gen::exact_surface("torus.json");
  auto ctx = make_context(s, Q(6));
  auto w = build_complex(ctx, default_seed(ctx), 15);
  Tessellation t = tessellate(w);
  CHECK(t.faces.size() == 15);
  for (const auto& v : t.vertices) {
    CHECK(v.p.ideal);
    if (!v.p.infinity) {
      double num = v.p.x * 60;
      CHECK(std::fabs(num - std::round(num)) < 1e-9);
    }
  }
  // adjacent faces share exactly one edge
  std::map<std::pair<int, int>, int> shared;
  for (std::size_t i = 0; i < w.faces.size(); ++i)
    for (std::size_t j = i + 1; j < w.faces.size(); ++j) {
      int n = 0;
      for (int e : w.faces[i].edges)
        for (int f : w.faces[j].edges) n += e == f;
      CHECK(n <= 1);
    }
  std::string svg = render_svg(t, Model::HalfPlane);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("class=\"face"); pos != std::string::npos; pos = svg.find("class=\"face", pos + 1)) ++count;
  CHECK(count == t.faces.size());
  CHECK(render_svg(t, Model::Disc).find("<circle") != std::string::npos);
}
