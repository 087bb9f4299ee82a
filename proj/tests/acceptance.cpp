// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <climits>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>

#include "gen.hpp"

using namespace flatconic;
using Q = Rational;
using P = Vec2<Q>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void run(int id, const std::string& title, double limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit) out.fail("took " + std::to_string(secs) + "s, limit " + std::to_string(limit) + "s");
  if (!out.pass) ++failures;
  std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << std::fixed;
  std::cout.precision(2);
  std::cout << secs << "s)";
  if (!out.detail.empty()) std::cout << " - " << out.detail;
  std::cout << std::endl;
}

Mat2d to_d(const Mat2<Q>& m) { return {m.a.get_d(), m.b.get_d(), m.c.get_d(), m.d.get_d()}; }

int index_of(const std::vector<P>& v, const P& p) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == p) return static_cast<int>(i);
  return -1;
}

// 1
void pencil_dimensions(Outcome& o) {
  gen::Rng rng(1001);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int k = static_cast<int>(rng.integer(1, 5));
    auto pts = gen::general_position(rng, k);
    auto forms = forms_vanishing_on(pts);
    std::vector<std::vector<Q>> rows;
    for (const auto& p : pts) rows.push_back(gen::monomials(p));
    if (static_cast<int>(forms.size()) != 6 - k || gen::rank(rows) != k) ++bad;
    for (const auto& f : forms)
      for (const auto& p : pts)
        if (f(p) != 0) ++bad;
  }
  if (bad) o.fail(std::to_string(bad) + " failures");
}

// 2
void classification(Outcome& o) {
  struct Row {
    QForm3<Q> q;
    Kind k;
  };
  std::vector<Row> table{{{1, 1, -1, 0, 0, 0}, Kind::EllipseInterior},
                         {{1, 0, -1, 0, 0, 0}, Kind::Strip},
                         {{0, 0, 0, 0, Q(1, 2), 0}, Kind::HalfPlane},
                         {{0, 1, 0, 0, Q(-1, 2), 0}, Kind::ParabolaInterior},
                         {{-1, -1, 1, 0, 0, 0}, Kind::Other}};
  for (const auto& r : table)
    if (classify(r.q) != r.k) o.fail("canonical form " + r.q.str() + " classified as " + kind_name(classify(r.q)));
  // strips have signature (1,1) with lower block (1,0)
  Signature s = signature(QForm3<Q>{1, 0, -1, 0, 0, 0});
  if (!s.is(1, 1)) o.fail("strip signature");
  gen::Rng rng(1002);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    QForm3<Q> q = rng.form(5);
    Q k = 1 + Scalar<Q>::abs(rng.rational(9, 5));
    if (classify(q) != classify(q.scaled(k))) ++bad;
  }
  if (bad) o.fail(std::to_string(bad) + " scaling inconsistencies");
}

// 3
void square_torus(Outcome& o) {
  auto s = gen::exact_surface("torus.json");
  auto ctx = make_context(s, Q(6));
  auto rc = rigid_conics(ctx.chart);
  int ell = 0;
  for (const auto& u : rc) ell += u.u.kind == Kind::EllipseInterior;
  if (ell) o.fail(std::to_string(ell) + " rigid ellipses found");
  std::vector<P> inner, all;
  for (const auto& p : ctx.chart.points) {
    all.push_back(p.pos);
    if (std::sqrt(to_double(norm2(p.pos - ctx.chart.base))) <= 2.2) inner.push_back(p.pos);
  }
  auto oracle = gen::empty_ellipses_brute(inner, all, ctx.chart.base, 2.2);
  if (!oracle.empty()) o.fail("five-subset oracle found an empty ellipse " + oracle[0].str());

  auto w = build_complex(ctx, default_seed(ctx), 30);
  if (w.faces.size() != 30) o.fail("expected 30 faces, got " + std::to_string(w.faces.size()));
  for (const auto& f : w.faces) {
    const auto& z = f.triple;
    Q det = cross(z[1] - z[0], z[2] - z[0]);
    if (Scalar<Q>::abs(det) != 1) o.fail("face " + f.key + " is not unimodular");
    if (f.vertices.size() != 3) o.fail("face " + f.key + " has " + std::to_string(f.vertices.size()) + " vertices");
    std::vector<std::pair<long, long>> slopes;
    for (int v : f.vertices) {
      const auto& u = w.vertices[v].conic.u;
      if (u.kind != Kind::Strip) {
        o.fail("face " + f.key + " has a non-strip vertex");
        continue;
      }
      slopes.push_back(strip_slope(u.q));
      HPoint h = h_point(homothety_class(u));
      auto [p, q] = slopes.back();
      bool ok = q == 0 ? h.infinity : (h.ideal && !h.infinity && std::fabs(h.x - double(p) / double(q)) < 1e-12);
      if (!ok) o.fail("h_point of " + u.q.str() + " is not p/q");
    }
    for (std::size_t i = 0; i < slopes.size(); ++i)
      for (std::size_t j = i + 1; j < slopes.size(); ++j) {
        auto [p, q] = slopes[i];
        auto [r, t] = slopes[j];
        if (std::labs(p * t - q * r) != 1) o.fail("face " + f.key + " has ideal vertices that are not Farey neighbours");
      }
  }
}

// 4
void two_marked_links(Outcome& o) {
  auto s = gen::exact_surface("two_marked_torus.json");
  auto ctx = make_context(s, Q(5));
  std::vector<P> inner, all;
  for (const auto& p : ctx.chart.points) {
    all.push_back(p.pos);
    if (std::sqrt(to_double(norm2(p.pos - ctx.chart.base))) <= 1.3) inner.push_back(p.pos);
  }
  auto oracle = gen::empty_ellipses_brute(inner, all, ctx.chart.base, 1.3);
  if (oracle.empty()) o.fail("oracle found no rigid ellipse");
  auto rc = rigid_conics(ctx.chart);
  int checked = 0;
  std::set<int> sizes;
  for (const auto& u : rc) {
    if (u.u.kind != Kind::EllipseInterior) continue;
    // the links of ellipses well inside the window are complete
    if (ellipse_in_disc(to_double(u.u.q), to_double(ctx.chart.base), 2.5) <= 0) continue;
    ++checked;
    const auto& c = u.components[0];
    int n = static_cast<int>(c.size());
    sizes.insert(n);
    LinkGraph<Q> g = link_from_cells(ctx, u);
    std::string tag = "ellipse " + u.u.q.str() + " (n=" + std::to_string(n) + ")";
    if (static_cast<int>(g.vertices.size()) != n * (n - 3) / 2) {
      o.fail(tag + ": link has " + std::to_string(g.vertices.size()) + " vertices");
      continue;
    }
    int m = static_cast<int>(g.vertices.size());
    std::vector<std::set<int>> nb(m);
    std::set<std::pair<int, int>> dir;
    for (auto [a, b] : g.edges) {
      nb[a].insert(b);
      nb[b].insert(a);
      dir.insert({a, b});
    }
    for (int v = 0; v < m; ++v)
      if (nb[v].size() != 4) o.fail(tag + ": a link vertex has degree " + std::to_string(nb[v].size()));
    auto consecutive = [&](int v) {
      std::vector<int> idx;
      for (const auto& p : g.vertices[v]) idx.push_back(index_of(c, p));
      std::sort(idx.begin(), idx.end());
      for (int start = 0; start < n; ++start) {
        std::vector<int> run;
        for (int k = 0; k < 4; ++k) run.push_back((start + k) % n);
        std::sort(run.begin(), run.end());
        if (run == idx) return true;
      }
      return false;
    };
    std::vector<int> tri_count(m, 0);
    for (int a = 0; a < m; ++a)
      for (int b : nb[a])
        for (int d : nb[b]) {
          if (!(a < b && b < d) || !nb[a].count(d)) continue;
          for (int v : {a, b, d}) ++tri_count[v];
          for (int v : {a, b, d}) {
            int x = v == a ? b : a, y = (v == d) ? b : d;
            bool out = dir.count({v, x}) && dir.count({v, y});
            bool in = dir.count({x, v}) && dir.count({y, v});
            if (consecutive(v) != (out || in)) o.fail(tag + ": 3-cycle direction pattern violated");
          }
        }
    for (int v = 0; v < m; ++v)
      if (consecutive(v) && tri_count[v] != 2)
        o.fail(tag + ": consecutive vertex lies in " + std::to_string(tri_count[v]) + " 3-cycles");
  }
  if (checked == 0) o.fail("no rigid ellipse well inside the window");
  std::string sz;
  for (int n : sizes) sz += (sz.empty() ? "" : ",") + std::to_string(n);
  if (o.pass) o.detail = std::to_string(checked) + " ellipses, boundary sizes " + sz;
}

// 5
void strip_grid(Outcome& o) {
  auto s = gen::exact_surface("torus.json");
  auto ctx = make_context(s, Q(4));
  const RigidConic<Q>* h = nullptr;
  auto rc = rigid_conics(ctx.chart);
  for (const auto& u : rc)
    if (u.u.kind == Kind::Strip && u.u.q.a11 == 0 && u.u.q.a12 == 0 && canonical(u.u.q) == canonical(QForm3<Q>{0, 1, 0, 0, 0, Q(-1, 2)}))
      h = &u;
  if (!h) {
    o.fail("horizontal cylinder not found");
    return;
  }
  LinkGraph<Q> g = link_from_cells(ctx, *h);
  // boundary points are lattice points on two horizontal lines, indexed by x
  const auto& A = h->components[0];
  const auto& B = h->components[1];
  auto range = [](const std::vector<P>& c) {
    long lo = LONG_MAX, hi = LONG_MIN;
    for (const auto& p : c) {
      lo = std::min(lo, p.x.get_num().get_si());
      hi = std::max(hi, p.x.get_num().get_si());
    }
    return std::pair<long, long>{lo, hi};
  };
  auto [a_lo, a_hi] = range(A);
  auto [b_lo, b_hi] = range(B);
  std::map<std::pair<long, long>, int> at;
  std::vector<std::pair<long, long>> coord(g.vertices.size(), {LONG_MIN, LONG_MIN});
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& q = g.vertices[v];
    std::vector<long> xa, xb;
    bool lattice = true;
    for (const auto& p : q) {
      lattice = lattice && p.x.get_den() == 1;
      if (p.y == A[0].y) xa.push_back(p.x.get_num().get_si());
      else if (p.y == B[0].y) xb.push_back(p.x.get_num().get_si());
    }
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    if (!lattice || xa.size() != 2 || xb.size() != 2 || xa[1] != xa[0] + 1 || xb[1] != xb[0] + 1) {
      std::string s;
      for (const auto& p : q) s += point_key(p) + " ";
      o.fail("link vertex is not a pair of adjacent pairs: " + s);
      continue;
    }
    coord[v] = {xa[0], xb[0]};
    at[coord[v]] = static_cast<int>(v);
  }
  std::vector<std::set<int>> nb(g.vertices.size());
  for (auto [a, b] : g.edges) {
    nb[a].insert(b);
    nb[b].insert(a);
  }
  int interior = 0;
  for (long i = a_lo + 1; i + 2 <= a_hi; ++i)
    for (long j = b_lo + 1; j + 2 <= b_hi; ++j) {
      auto it = at.find({i, j});
      if (it == at.end()) {
        o.fail("grid vertex missing");
        continue;
      }
      ++interior;
      std::set<std::pair<long, long>> got, want{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (int w : nb[it->second]) got.insert(coord[w]);
      if (got != want) o.fail("vertex (" + std::to_string(i) + "," + std::to_string(j) + ") does not have grid neighbours");
    }
  if (interior < 4) o.fail("window interior too small: " + std::to_string(interior) + " vertices");
  if (o.pass) o.detail = std::to_string(interior) + " interior grid vertices";
}

// 6
void cell_oracle(Outcome& o) {
  auto s = gen::exact_surface("two_marked_torus.json");
  auto ctx = make_context(s, Q(4));
  auto w = build_complex(ctx, default_seed(ctx), 10);
  int triples = 0, forms = 0;
  for (const auto& f : w.faces) {
    if (triples == 10) break;
    auto r = two_cell(ctx, f.triple);
    if (r.status != CellStatus::Realized) {
      o.fail("face triple not realizable on recomputation");
      continue;
    }
    ++triples;
    for (const auto& v : r.cell.vertices) {
      auto pts = v.conic.all_points();
      if (pts.size() < 5) {
        o.fail("vertex with fewer than five cone points");
        continue;
      }
      ++forms;
      if (v.conic.u.kind == Kind::EllipseInterior) {
        Subconic<Q> u = conic_through_five(std::array<P, 5>{pts[0], pts[1], pts[2], pts[3], pts[4]});
        if (!gen::proportional(u.q, v.conic.u.q)) o.fail("ellipse " + v.conic.u.q.str() + " differs from its five-point conic");
      } else {
        // five points on two parallel lines determine the line pair
        std::vector<P> five;
        for (const auto& comp : v.conic.components)
          for (std::size_t i = 0; i < comp.size() && i < 3; ++i) five.push_back(comp[i]);
        while (five.size() > 5) five.pop_back();
        auto k = forms_vanishing_on(five);
        if (k.size() != 1 || !gen::proportional(k[0], v.conic.u.q))
          o.fail("strip " + v.conic.u.q.str() + " differs from the conic through its cone points");
      }
      auto nb = r.cell.basis;
      auto t = t_coordinates(v.conic.u.q, nb);
      if (t != v.t) o.fail("t-coordinates disagree");
    }
  }
  if (triples < 10) o.fail("only " + std::to_string(triples) + " triples");
  if (o.pass) o.detail = std::to_string(triples) + " triples, " + std::to_string(forms) + " vertex forms";
}

// 7
void geometric_harness(Outcome& o) {
  constexpr double pi = std::numbers::pi;
  gen::Rng rng(1007);
  auto pd = [&] {
    double a = rng.real(0.5, 2.5), d = rng.real(0.5, 2.5), b = rng.real(-0.8, 0.8) * std::sqrt(a * d);
    return Mat2d{a, b, b, d};
  };
  auto par = [](const Vec2d& u, const Vec2d& v) {
    return std::fabs(cross(u, v)) / std::hypot(u.x, u.y) / std::hypot(v.x, v.y);
  };
  double r1 = 0, r2 = 0, r3 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Mat2d q = pd();
    Vec2d x0{rng.real(-1, 1), rng.real(-1, 1)};
    std::vector<double> th{rng.real(0.05, 6.2), rng.real(0.05, 6.2), rng.real(0.05, 6.2)};
    std::sort(th.begin(), th.end());
    if (th[1] - th[0] < 1e-3 || th[2] - th[1] < 1e-3) th = {1, 2.5, 4};
    std::array<Vec2d, 4> x{x0, q_rotation(q, th[0]) * x0, q_rotation(q, th[1]) * x0, q_rotation(q, th[2]) * x0};
    QuadrupleForm f = quadruple_form(q, x);
    r1 = std::max(r1, par(f.u, f.l_minus));
    r2 = std::max(r2, par(oriented_bisector(q, x[2], x[3]) - oriented_bisector(q, x[0], x[1]), f.l_plus));
  }
  auto ellipse = [](const Mat2d& A, const Vec2d& c, double rr) {
    Vec2d Ac = A * c;
    return QForm3<double>{A.a, A.d, dot(c, Ac) - rr, A.b, -Ac.x, -Ac.y};
  };
  for (int trial = 0; trial < 100; ++trial) {
    Mat2d A = pd();
    Vec2d c{rng.real(-5, 5), rng.real(-5, 5)};
    double rr = rng.real(0.1, 4);
    EllipseNormalization n = normalize_ellipse(ellipse(A, c, rr).scaled(rng.real(0.2, 5)));
    Mat2d Li = cholesky_upper(A).inverse();
    for (int i = 0; i < 8; ++i) {
      double t = 2 * pi * i / 8;
      Vec2d m = n.apply(Li * Vec2d{std::sqrt(rr) * std::cos(t), std::sqrt(rr) * std::sin(t)} + c);
      r3 = std::max(r3, std::fabs(bilinear(n.unit, m, m) - 1));
    }
  }
  if (r1 >= 1e-9) o.fail("u_Q off the negative eigenline by " + std::to_string(r1));
  if (r2 >= 1e-9) o.fail("bisector difference off the positive eigenline by " + std::to_string(r2));
  if (r3 >= 1e-9) o.fail("normalization residual " + std::to_string(r3));

  Mat2d g{1.3, 0.4, -0.2, 0.9};
  for (int n : {5, 6, 8}) {
    std::vector<Vec2d> z;
    for (int i = 0; i < n; ++i) {
      double t = 2 * pi * i / n + 0.1;
      z.push_back(g * Vec2d{std::cos(t), std::sin(t)} + Vec2d{0.3, -0.7});
    }
    Mat2d gi = g.inverse();
    Config a = make_config(ellipse(gi.transpose() * gi, {0.3, -0.7}, 1.0), z);
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    Config tr = transform_config(a, Mat2d::identity(), {2.5, -1});
    Config sc = transform_config(a, Mat2d{3, 0, 0, 3}, {0, 0});
    double th = 7 * pi / 180;
    Config rot = transform_config(a, Mat2d{std::cos(th), -std::sin(th), std::sin(th), std::cos(th)}, {0, 0});
    if (!check_geometric_lemma(a, tr, id).passed) o.fail("check fails on a translated configuration");
    if (!check_geometric_lemma(a, sc, id).passed) o.fail("check fails on a scaled configuration");
    if (check_geometric_lemma(a, rot, id).passed) o.fail("check passes on a rotated configuration");
  }
}

// 8
void veech(Outcome& o) {
  auto s = gen::exact_surface("torus.json");
  auto t = veech_check(s, Mat2<Q>{1, 1, 0, 1}, Q(6));
  auto sr = veech_check(s, Mat2<Q>{0, -1, 1, 0}, Q(6));
  auto h = veech_check(s, Mat2<Q>{1, Q(1, 2), 0, 1}, Q(6));
  if (t.verdict != Verdict::MemberInWindow) o.fail("T: " + verdict_name(t.verdict));
  if (sr.verdict != Verdict::MemberInWindow) o.fail("S: " + verdict_name(sr.verdict));
  if (h.verdict != Verdict::Rejected) o.fail("[[1,1/2],[0,1]]: " + verdict_name(h.verdict));
}

struct Pair {
  Surface<Q> a, b;
  ComplexWindow<Q> wa, wb;
  CellMatching phi;
};

Pair build_pair(const Mat2<Q>& g) {
  RawSurface raw = read_raw_surface(gen::data("torus.json"));
  Pair p{build_surface<Q>(raw), build_surface<Q>(transform(raw, g)), {}, {}, {}};
  Q scale = sqrt(g.det().get_d()) > 1.5 ? Q(2) : Q(1);
  auto ca = make_context(p.a, Q(6));
  auto cb = make_context(p.b, Q(6 * scale));
  auto seed = default_seed(ca);
  std::array<P, 3> seed_b;
  for (int i = 0; i < 3; ++i) seed_b[i] = g * seed[i];
  p.wa = build_complex(ca, seed, 30);
  p.wb = build_complex(cb, seed_b, 30);
  p.phi = match_cells(p.wa, p.wb, AffineMap<Q>{g, {}});
  return p;
}

// 9
void reconstruction(Outcome& o) {
  Mat2<Q> T{1, 1, 0, 1};
  Pair p = build_pair(T);
  if (p.phi.face.size() < 5) o.fail("only " + std::to_string(p.phi.face.size()) + " matched faces");
  auto c = reconstruct(p.wa, p.wb, p.phi);
  if (!(c.linear == T)) o.fail("recovered linear part differs from T");
  if (!c.h_exact || *c.h_exact != 1) o.fail("homothety factor is not 1");
  if (!c.unimodular || !(*c.unimodular == T)) o.fail("unimodular part differs from T");

  Mat2<Q> two{2, 0, 0, 2};
  Pair d = build_pair(two);
  auto c2 = reconstruct(d.wa, d.wb, d.phi);
  if (!c2.h_exact || *c2.h_exact != 2) o.fail("scaled target: homothety factor is not 2");
  if (!c2.unimodular || !(*c2.unimodular == Mat2<Q>::identity())) o.fail("scaled target: unimodular part is not the identity");
}

// 10
void equivariance(Outcome& o) {
  Mat2<Q> T{1, 1, 0, 1};
  Pair p = build_pair(T);
  Tessellation ta = tessellate(p.wa), tb = tessellate(p.wb);
  Mat2d Td = to_d(T);
  double err = 0;
  for (auto [va, vb] : p.phi.vertex) {
    HPoint m = mobius(Td, ta.vertices[va].p);
    const HPoint& q = tb.vertices[vb].p;
    if (m.infinity != q.infinity || m.ideal != q.ideal) {
      o.fail("vertex type changes under z+1");
      continue;
    }
    if (!m.infinity) err = std::max(err, std::hypot(m.x - q.x, m.y - q.y));
  }
  for (auto [fa, fb] : p.phi.face) {
    const auto& a = p.wa.faces[fa].vertices;
    const auto& b = p.wb.faces[fb].vertices;
    std::vector<int> img;
    for (int v : a) {
      auto it = p.phi.vertex.find(v);
      img.push_back(it == p.phi.vertex.end() ? -1 : it->second);
    }
    std::vector<int> sa = img, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) o.fail("matched faces have different vertex sets");
  }
  if (p.phi.vertex.empty()) o.fail("no matched vertices");
  if (err >= 1e-9) o.fail("max deviation " + std::to_string(err));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", err);
  if (o.pass) o.detail = std::to_string(p.phi.face.size()) + " matched faces, max deviation " + buf;
}

}  // namespace

int main() {
  run(1, "pencil dimensions", 1, pencil_dimensions);
  run(2, "classification table and scaling", 1, classification);
  run(3, "square-torus complex", 60, square_torus);
  run(4, "two-marked-torus links", 120, two_marked_links);
  run(5, "strip link grid", 10, strip_grid);
  run(6, "2-cell vertex oracle", 30, cell_oracle);
  run(7, "geometric harness", 10, geometric_harness);
  run(8, "Veech verification", 30, veech);
  run(9, "reconstruction round trip", 60, reconstruction);
  run(10, "tessellation equivariance", 60, equivariance);
  return failures == 0 ? 0 : 1;
}
