#include "catch_amalgamated.hpp"
#include "gen.hpp"

#include <set>

using namespace flatconic;
using Q = Rational;

namespace {

std::set<std::string> keys(const std::vector<Vec2<Q>>& pts) {
  std::set<std::string> out;
  for (const auto& p : pts) out.insert(point_key(p));
  return out;
}

std::set<std::string> keys(const Chart<Q>& ch) {
  std::set<std::string> out;
  for (const auto& p : ch.points) out.insert(point_key(p.pos));
  return out;
}

}  // namespace

TEST_CASE("surface parsing and cone angles") {
  auto torus = gen::exact_surface("torus.json");
  CHECK(torus.cones.size() == 1);
  CHECK(torus.cones[0].k == 1);
  CHECK(torus.genus == 1);

  auto L = gen::exact_surface("l_shape.json");
  REQUIRE(L.cones.size() == 1);
  CHECK(L.cones[0].k == 3);
  CHECK(L.genus == 2);

  CHECK_THROWS_AS(gen::exact_surface("mismatched.json"), InputError);
  CHECK_THROWS_AS(parse_raw_surface("{\"polygons\": ["), InputError);
  CHECK_THROWS_AS(build_surface<Q>(parse_raw_surface(R"({"polygons":[{"id":"a","vertices":[[0,0],[1,0],[0,1]]}],"gluings":[]})")),
                  InputError);
}

TEST_CASE("float surfaces load in float mode") {
  AnySurface s = load_surface(gen::data("float_torus.json"));
  CHECK(s.index() == 1);
  AnySurface t = load_surface(gen::data("torus.json"));
  CHECK(t.index() == 0);
}

TEST_CASE("torus chart small radii") {
  auto s = gen::exact_surface("torus.json");
  CHECK(develop(s, Q(1)).points.size() == 4);
  CHECK(develop(s, Q(1, 100)).points.empty());
  auto ch = develop(s, Q(2));
  auto k = keys(ch);
  CHECK(k.count("1,1") == 1);
  CHECK(k.count("2,2") == 0);  // hidden behind (1,1)
}

TEST_CASE("torus chart matches the lattice visibility oracle") {
  auto s = gen::exact_surface("torus.json");
  for (int r : {2, 3, 5}) {
    auto ch = develop(s, Q(r));
    CHECK(keys(ch) == keys(gen::visible_lattice_points({Vec2<Q>{0, 0}}, ch.base, Q(r))));
  }
}

TEST_CASE("chart from random bases matches the oracle") {
  auto s = gen::exact_surface("torus.json");
  gen::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Q x(rng.integer(1, 12)), y(rng.integer(1, 12));
    x /= 13;
    y /= 13;
    auto base = locate_in_polygon(s, 0, Vec2<Q>{x, y});
    auto ch = develop(s, base, Q(3));
    CHECK(keys(ch) == keys(gen::visible_lattice_points({Vec2<Q>{0, 0}}, ch.base, Q(3))));
  }
}

TEST_CASE("two-marked torus chart matches the oracle") {
  auto s = gen::exact_surface("two_marked_torus.json");
  auto ch = develop(s, Q(3));
  auto oracle = gen::visible_lattice_points({Vec2<Q>{0, 0}, Vec2<Q>{Q(1, 2), Q(1, 4)}}, ch.base, Q(3));
  CHECK(keys(ch) == keys(oracle));
}

TEST_CASE("chart invariants") {
  for (const char* name : {"torus.json", "two_marked_torus.json", "l_shape.json"}) {
    auto s = gen::exact_surface(name);
    auto small = develop(s, Q(2));
    auto big = develop(s, Q(4));
    auto ks = keys(small), kb = keys(big);
    CHECK(std::includes(kb.begin(), kb.end(), ks.begin(), ks.end()));
    CHECK(kb.size() == big.points.size());  // positions are unique
    for (const auto& p : big.points) CHECK(norm2(p.pos - big.base) <= Q(16));
  }
}

TEST_CASE("inradius bounds") {
  auto torus = gen::exact_surface("torus.json");
  auto k1 = inradius_bound(torus);
  CHECK(k1.value == Catch::Approx(std::sqrt(2.0) / 2).epsilon(1e-6));
  CHECK(k1.upper >= k1.value);
  auto k2 = inradius_bound(gen::exact_surface("centered_two_marked_torus.json"));
  CHECK(k2.value == Catch::Approx(0.5).epsilon(1e-6));
  CHECK(k2.upper >= k2.value);
  auto k3 = inradius_bound(gen::exact_surface("scaled_torus.json"));
  CHECK(k3.value == Catch::Approx(2 * k1.value).epsilon(1e-6));
}

TEST_CASE("subconic fits on the torus chart") {
  auto s = gen::exact_surface("torus.json");
  auto ch = develop(s, Q(4));
  // circle through the four corners, centred at the base
  Subconic<Q> corners = make_subconic(QForm3<Q>{1, 1, 0, 0, Q(-1, 2), Q(-1, 2)});
  CHECK(subconic_fits(ch, corners).verdict == Fit::Fits);
  // radius one around the base contains the corners
  Subconic<Q> big = make_subconic(QForm3<Q>{1, 1, Q(-1, 2), 0, Q(-1, 2), Q(-1, 2)});
  CHECK(subconic_fits(ch, big).verdict == Fit::DoesNotFit);
  // radius 10 reaches past the chart
  Subconic<Q> huge = make_subconic(QForm3<Q>{1, 1, Q(1, 2) - 100, 0, Q(-1, 2), Q(-1, 2)});
  CHECK(subconic_fits(ch, huge).verdict != Fit::Fits);
}
