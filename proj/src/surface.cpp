#include "flatconic/surface.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace flatconic {

using nlohmann::json;

namespace {

Rational number_from_json(const json& v) {
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  if (v.is_number_float()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return parse_rational(std::string(buf, res.ptr));
  }
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError("expected a number or a \"p/q\" string");
}

}  // namespace

RawSurface parse_raw_surface(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed surface JSON: ") + e.what());
  }
  RawSurface s;
  if (!j.is_object() || !j.contains("polygons") || !j.contains("gluings"))
    throw InputError("surface JSON needs \"polygons\" and \"gluings\"");
  std::map<std::string, int> by_id;
  for (const auto& p : j.at("polygons")) {
    std::string id = p.at("id").is_string() ? p.at("id").get<std::string>() : p.at("id").dump();
    if (by_id.count(id)) throw InputError("duplicate polygon id '" + id + "'");
    by_id[id] = static_cast<int>(s.ids.size());
    s.ids.push_back(id);
    std::vector<Vec2<Rational>> verts;
    for (const auto& v : p.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw InputError("vertex must be a pair");
      verts.push_back({number_from_json(v[0]), number_from_json(v[1])});
    }
    s.polygons.push_back(std::move(verts));
  }
  auto edge_ref = [&](const json& e) {
    if (!e.is_array() || e.size() != 2) throw InputError("gluing side must be [polygon id, edge index]");
    std::string id = e[0].is_string() ? e[0].get<std::string>() : e[0].dump();
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError("gluing refers to unknown polygon '" + id + "'");
    return EdgeRef{it->second, e[1].get<int>()};
  };
  for (const auto& g : j.at("gluings")) s.gluings.push_back({edge_ref(g.at("a")), edge_ref(g.at("b"))});
  return s;
}

RawSurface read_raw_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_raw_surface(ss.str());
}

std::string raw_surface_json(const RawSurface& s) {
  json j;
  j["polygons"] = json::array();
  for (std::size_t p = 0; p < s.polygons.size(); ++p) {
    json verts = json::array();
    for (const auto& v : s.polygons[p]) verts.push_back({to_string(v.x), to_string(v.y)});
    j["polygons"].push_back({{"id", s.ids[p]}, {"vertices", verts}});
  }
  j["gluings"] = json::array();
  for (const auto& g : s.gluings)
    j["gluings"].push_back({{"a", {s.ids[g.a.poly], g.a.edge}}, {"b", {s.ids[g.b.poly], g.b.edge}}});
  return j.dump();
}

RawSurface transform(const RawSurface& s, const Mat2<Rational>& g) {
  if (sgn(g.det()) <= 0) throw InputError("only orientation-preserving maps can be applied to a surface");
  RawSurface out = s;
  for (auto& poly : out.polygons)
    for (auto& v : poly) v = g * v;
  return out;
}

AnySurface build_any(const RawSurface& raw) {
  try {
    return build_surface<Rational>(raw);
  } catch (const GluingMismatch&) {
    return build_surface<double>(raw);
  }
}

AnySurface load_surface(const std::string& path) { return build_any(read_raw_surface(path)); }

std::string fit_name(Fit f) {
  switch (f) {
    case Fit::Fits: return "fits";
    case Fit::DoesNotFit: return "does-not-fit";
    case Fit::Inconclusive: break;
  }
  return "inconclusive";
}

namespace {

struct EllipseFrame {
  Vec2<double> center;
  Vec2<double> axis[2];  // semi-axes
};

EllipseFrame ellipse_frame(const QForm3<double>& q) {
  double a = q.a11, b = q.a12, c = q.a22;
  double det2 = a * c - b * b;
  if (!(det2 > 0) || !(a > 0)) throw InputError("not an ellipse");
  Vec2<double> ctr{-(c * q.a13 - b * q.a23) / det2, -(-b * q.a13 + a * q.a23) / det2};
  double r2 = -q(ctr);
  if (!(r2 > 0)) throw InputError("empty ellipse");
  double tr = a + c, disc = std::sqrt(std::max(0.0, (a - c) * (a - c) / 4 + b * b));
  double l1 = tr / 2 + disc, l2 = tr / 2 - disc;
  Vec2<double> v1;
  if (std::fabs(b) > 1e-300)
    v1 = {b, l1 - a};
  else
    v1 = a >= c ? Vec2<double>{1.0, 0.0} : Vec2<double>{0.0, 1.0};
  double n = std::sqrt(v1.x * v1.x + v1.y * v1.y);
  v1 = {v1.x / n, v1.y / n};
  Vec2<double> v2{-v1.y, v1.x};
  // v1 belongs to l1 unless the diagonal branch picked the other axis.
  double lv1 = a * v1.x * v1.x + 2 * b * v1.x * v1.y + c * v1.y * v1.y;
  double lv2 = a * v2.x * v2.x + 2 * b * v2.x * v2.y + c * v2.y * v2.y;
  (void)l2;
  EllipseFrame f;
  f.center = ctr;
  f.axis[0] = {v1.x * std::sqrt(r2 / lv1), v1.y * std::sqrt(r2 / lv1)};
  f.axis[1] = {v2.x * std::sqrt(r2 / lv2), v2.y * std::sqrt(r2 / lv2)};
  return f;
}

}  // namespace

double ellipse_max_distance(const QForm3<double>& q, const Vec2<double>& b) {
  EllipseFrame f = ellipse_frame(q);
  Vec2<double> w{f.center.x - b.x, f.center.y - b.y};
  auto dist2 = [&](double t) {
    double cs = std::cos(t), sn = std::sin(t);
    double x = w.x + cs * f.axis[0].x + sn * f.axis[1].x;
    double y = w.y + cs * f.axis[0].y + sn * f.axis[1].y;
    return x * x + y * y;
  };
  const int N = 1024;
  const double step = 2 * std::numbers::pi / N;
  int best = 0;
  double bv = -1;
  for (int i = 0; i < N; ++i) {
    double v = dist2(i * step);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double lo = (best - 1) * step, hi = (best + 1) * step;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 100; ++it) {
    double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (dist2(m1) < dist2(m2))
      lo = m1;
    else
      hi = m2;
  }
  bv = std::max(bv, dist2((lo + hi) / 2));
  return std::sqrt(bv);
}

int ellipse_in_disc(const QForm3<double>& q, const Vec2<double>& c, double r) {
  double d = ellipse_max_distance(q, c);
  double margin = 1e-9 * std::max(1.0, r);
  if (d < r - margin) return 1;
  if (d > r + margin) return -1;
  return 0;
}

namespace {

double nearest_cone(const Surface<double>& s, const BaseLocation<double>& loc, double r) {
  Chart<double> ch = develop(s, loc, r);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : ch.points) best = std::min(best, std::sqrt(norm2(p.pos - loc.dev)));
  return best;
}

double triangle_bound(const Tri<double>& t) {
  std::vector<Vec2<double>> cand(t.p.begin(), t.p.end());
  const auto& a = t.p[0];
  const auto& b = t.p[1];
  const auto& c = t.p[2];
  double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  Vec2<double> cc{((a.x * a.x + a.y * a.y) * (b.y - c.y) + (b.x * b.x + b.y * b.y) * (c.y - a.y) +
                   (c.x * c.x + c.y * c.y) * (a.y - b.y)) /
                      d,
                  ((a.x * a.x + a.y * a.y) * (c.x - b.x) + (b.x * b.x + b.y * b.y) * (a.x - c.x) +
                   (c.x * c.x + c.y * c.y) * (b.x - a.x)) /
                      d};
  auto inside = [&](const Vec2<double>& p) {
    for (int e = 0; e < 3; ++e) {
      Vec2<double> u = t.p[(e + 1) % 3] - t.p[e], v = p - t.p[e];
      if (u.x * v.y - u.y * v.x < -1e-12) return false;
    }
    return true;
  };
  if (inside(cc)) cand.push_back(cc);
  // Points on each edge equidistant from a pair of corners.
  for (int e = 0; e < 3; ++e) {
    Vec2<double> p = t.p[e], q = t.p[(e + 1) % 3];
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        Vec2<double> u = t.p[i], v = t.p[j];
        Vec2<double> m{(u.x + v.x) / 2, (u.y + v.y) / 2}, n = v - u;
        double den = dot(q - p, n);
        if (std::fabs(den) < 1e-15) continue;
        double s = dot(m - p, n) / den;
        if (s >= 0 && s <= 1) cand.push_back(p + s * (q - p));
      }
  }
  double best = 0;
  for (const auto& p : cand) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : t.p) m = std::min(m, std::sqrt(norm2(p - v)));
    best = std::max(best, m);
  }
  return best;
}

}  // namespace

InradiusBound inradius_bound_double(const Surface<double>& s) {
  InradiusBound out;
  double longest = 0;
  for (const auto& t : s.tris) {
    out.upper = std::max(out.upper, triangle_bound(t));
    for (int e = 0; e < 3; ++e) longest = std::max(longest, std::sqrt(norm2(t.p[(e + 1) % 3] - t.p[e])));
  }
  const double r = longest * 1.01;

  struct Sample {
    double d;
    BaseLocation<double> loc;
  };
  std::vector<Sample> samples;
  const int N = 8;
  for (std::size_t k = 0; k < s.tris.size(); ++k) {
    const auto& t = s.tris[k];
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) {
        int l = N - i - j;
        if (i == N || j == N || l == N) continue;
        Vec2<double> p{(i * t.p[0].x + j * t.p[1].x + l * t.p[2].x) / N, (i * t.p[0].y + j * t.p[1].y + l * t.p[2].y) / N};
        BaseLocation<double> loc{static_cast<int>(k), p, p};
        samples.push_back({nearest_cone(s, loc, r), loc});
      }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.d > b.d; });
  out.value = samples.empty() ? 0.0 : samples.front().d;

  // Refine the best samples at circumcentres of nearby cone points.
  const std::size_t keep = std::min<std::size_t>(samples.size(), 12);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& smp = samples[i];
    Chart<double> ch = develop(s, smp.loc, r);
    std::vector<Vec2<double>> near;
    for (const auto& p : ch.points)
      if (std::sqrt(norm2(p.pos - smp.loc.dev)) <= smp.d * 1.5 + 1e-9) near.push_back(p.pos);
    if (near.size() > 8) near.resize(8);
    for (std::size_t a = 0; a < near.size(); ++a)
      for (std::size_t b = a + 1; b < near.size(); ++b)
        for (std::size_t c = b + 1; c < near.size(); ++c) {
          const auto &A = near[a], &B = near[b], &C = near[c];
          double d = 2 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
          if (std::fabs(d) < 1e-12) continue;
          Vec2<double> cc{((A.x * A.x + A.y * A.y) * (B.y - C.y) + (B.x * B.x + B.y * B.y) * (C.y - A.y) +
                           (C.x * C.x + C.y * C.y) * (A.y - B.y)) /
                              d,
                          ((A.x * A.x + A.y * A.y) * (C.x - B.x) + (B.x * B.x + B.y * B.y) * (A.x - C.x) +
                           (C.x * C.x + C.y * C.y) * (B.x - A.x)) /
                              d};
          auto loc = ch.locate(cc);
          if (!loc) continue;
          try {
            out.value = std::max(out.value, nearest_cone(s, *loc, r));
          } catch (const InputError&) {
          }
        }
  }
  out.value = std::min(out.value, out.upper);
  return out;
}

}  // namespace flatconic
