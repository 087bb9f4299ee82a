// flatconic command-line interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "flatconic/veech.hpp"

using namespace flatconic;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

template <class T>
T parse_scalar(const std::string& s) {
  return Scalar<T>::from(parse_rational(s));
}

template <class T>
Vec2<T> parse_point(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw InputError("expected a point x,y, got '" + s + "'");
  return {parse_scalar<T>(parts[0]), parse_scalar<T>(parts[1])};
}

// "x,y" in the first polygon, or "id:x,y".
template <class T>
std::optional<BaseLocation<T>> parse_base(const Surface<T>& s, const std::string& text) {
  if (text.empty()) return std::nullopt;
  int poly = 0;
  std::string coords = text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    std::string id = text.substr(0, colon);
    coords = text.substr(colon + 1);
    poly = -1;
    for (std::size_t i = 0; i < s.raw.ids.size(); ++i)
      if (s.raw.ids[i] == id) poly = static_cast<int>(i);
    if (poly < 0) throw InputError("unknown polygon '" + id + "'");
  }
  return locate_in_polygon(s, poly, parse_point<T>(coords));
}

template <class T>
std::array<Vec2<T>, 3> parse_seed(const std::string& text) {
  auto parts = split(text, ';');
  if (parts.size() != 3) throw InputError("seed needs three points x,y;x,y;x,y");
  return {parse_point<T>(parts[0]), parse_point<T>(parts[1]), parse_point<T>(parts[2])};
}

template <class T>
T parse_radius(const std::string& text) {
  T r = parse_scalar<T>(text);
  if (sign(r) <= 0) throw InputError("radius must be positive");
  return r;
}

template <class T>
std::string str(const T& v) {
  return Scalar<T>::str(v);
}

std::string path_word(const std::vector<int>& path) {
  if (path.empty()) return "e";
  std::string w;
  for (int c : path) w += (w.empty() ? "" : " ") + std::string(c > 0 ? "+" : "") + std::to_string(c);
  return w;
}

struct Options {
  std::string surface, surface_b, base, radius = "6", seed, out, svg, model = "halfplane", matrix;
  int budget = 20, threads = 1;
  double horizon = 4;
  bool json = false;
};

template <class T>
int cmd_develop(const Surface<T>& s, const Options& o) {
  T R = parse_radius<T>(o.radius);
  auto base = parse_base(s, o.base);
  Chart<T> ch = develop(s, base ? *base : default_base(s), R);
  if (o.json) {
    nlohmann::ordered_json j;
    j["base"] = point_key(ch.base);
    j["radius"] = str(R);
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : ch.points)
      pts.push_back({{"cone", p.cone}, {"position", point_key(p.pos)}, {"path", p.path}});
    j["points"] = pts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "base " << point_key(ch.base) << " radius " << str(R) << " points " << ch.points.size() << "\n";
    for (const auto& p : ch.points)
      std::cout << "cone " << p.cone << " at " << point_key(p.pos) << " path " << path_word(p.path) << "\n";
  }
  return 0;
}

template <class T>
ComplexWindow<T> build_window(const Surface<T>& s, const Options& o, const T& R, const std::string& seed_text) {
  if (o.budget < 1) throw InputError("budget must be at least 1");
  auto base = parse_base(s, o.base);
  Context<T> ctx = make_context(s, R, base);
  std::array<Vec2<T>, 3> seed = seed_text.empty() ? default_seed(ctx) : parse_seed<T>(seed_text);
  CellResult<T> c = two_cell(ctx, seed);
  if (c.status == CellStatus::NotRealizable) throw InfeasibleError("seed triple is not realizable: " + c.reason);
  if (c.status == CellStatus::WindowTooSmall) throw InfeasibleError("window too small for the seed triple: " + c.reason);
  return build_complex(ctx, seed, o.budget, o.threads);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

template <class T>
int cmd_complex(const Surface<T>& s, const Options& o) {
  T R = parse_radius<T>(o.radius);
  ComplexWindow<T> w = build_window(s, o, R, o.seed);
  std::string text = complex_json(w);
  if (o.out.empty())
    std::cout << text;
  else {
    write_file(o.out, text);
    std::cout << "faces " << w.faces.size() << " edges " << w.edges.size() << " vertices " << w.vertices.size()
              << (w.truncated ? " truncated" : "") << "\n";
  }
  return 0;
}

template <class T>
int cmd_veech(const Surface<T>& s, const Options& o) {
  T R = parse_radius<T>(o.radius);
  auto parts = split(o.matrix, ',');
  if (parts.size() != 4) throw InputError("matrix needs four entries a,b,c,d");
  Mat2<T> g{parse_scalar<T>(parts[0]), parse_scalar<T>(parts[1]), parse_scalar<T>(parts[2]), parse_scalar<T>(parts[3])};
  VeechReport r = veech_check(s, g, R);
  std::cout << verdict_name(r.verdict) << " (R=" << str(R) << ")\n";
  if (r.verdict == Verdict::MemberInWindow) {
    std::ostringstream cr;
    cr.precision(6);
    cr << r.certificate_radius;
    std::cout << "certificate radius " << cr.str() << "\n";
  }
  std::cout << "candidates " << r.candidates << " rejected " << r.rejected << " inconclusive " << r.inconclusive << "\n";
  if (!r.reason.empty()) std::cout << r.reason << "\n";
  return 0;
}

template <class T>
std::string matrix_str(const Mat2<T>& m) {
  return "[[" + str(m.a) + "," + str(m.b) + "],[" + str(m.c) + "," + str(m.d) + "]]";
}

// Affine maps sending the seed face of A onto faces of B, scored by the number of matched faces.
template <class T>
int cmd_rebuild(const Surface<T>& sa, const Surface<T>& sb, const Options& o) {
  T R = parse_radius<T>(o.radius);
  ComplexWindow<T> a = build_window(sa, o, R, o.seed);
  Options ob = o;
  ob.base.clear();
  ComplexWindow<T> b = build_window(sb, ob, R, "");
  if (a.faces.empty() || b.faces.empty()) throw InfeasibleError("empty complex");
  const auto& z = a.faces.front().triple;
  Mat2<T> M{T(z[1].x - z[0].x), T(z[2].x - z[0].x), T(z[1].y - z[0].y), T(z[2].y - z[0].y)};
  Mat2<T> Mi = M.inverse();
  struct Guess {
    AffineMap<T> f;
    CellMatching phi;
    int score;
  };
  std::vector<Guess> guesses;
  int best = 0;
  for (const auto& fb : b.faces) {
    for (int r = 0; r < 3; ++r) {
      const auto& w0 = fb.triple[r];
      const auto& w1 = fb.triple[(r + 1) % 3];
      const auto& w2 = fb.triple[(r + 2) % 3];
      Mat2<T> N{T(w1.x - w0.x), T(w2.x - w0.x), T(w1.y - w0.y), T(w2.y - w0.y)};
      Mat2<T> g = N * Mi;
      if (sign(g.det()) <= 0) continue;
      AffineMap<T> f{g, w0 - g * z[0]};
      CellMatching phi = match_cells(a, b, f);
      int score = static_cast<int>(phi.face.size());
      best = std::max(best, score);
      guesses.push_back({f, std::move(phi), score});
    }
  }
  std::optional<AffineCandidate<T>> chosen;
  double chosen_d = 0, chosen_id = 0;
  std::string last_error = "no affine map matches the seed face";
  for (const auto& gs : guesses) {
    if (2 * gs.score < best || gs.score == 0) continue;
    AffineCandidate<T> c;
    try {
      c = reconstruct(a, b, gs.phi);
    } catch (const InfeasibleError& e) {
      last_error = e.what();
      continue;
    } catch (const InputError& e) {
      last_error = e.what();
      continue;
    }
    Vec2<T> off = c.linear * a.base + c.translation - b.base;
    double d = std::sqrt(to_double(norm2(off)));
    Mat2<T> dm{T(c.linear.a - 1), c.linear.b, c.linear.c, T(c.linear.d - 1)};
    double di = to_double(T(dm.a * dm.a + dm.b * dm.b + dm.c * dm.c + dm.d * dm.d));
    if (!chosen || d < chosen_d - 1e-12 || (std::fabs(d - chosen_d) <= 1e-12 && di < chosen_id - 1e-12)) {
      chosen = c;
      chosen_d = d;
      chosen_id = di;
    }
  }
  if (!chosen) throw InfeasibleError(last_error);
  if (chosen->unimodular)
    std::cout << matrix_str(*chosen->unimodular) << "\n";
  else
    std::cout << matrix_str(chosen->linear) << " (unimodular part not rational)\n";
  std::ostringstream h;
  h.precision(12);
  h << chosen->h;
  std::cout << "homothety " << (chosen->h_exact ? to_string(*chosen->h_exact) : h.str()) << "\n";
  std::cout << "translation " << point_key(chosen->translation) << "\n";
  return 0;
}

template <class T>
int cmd_tessellate(const Surface<T>& s, const Options& o) {
  T R = parse_radius<T>(o.radius);
  ComplexWindow<T> w = build_window(s, o, R, o.seed);
  Tessellation t = tessellate(w);
  if (!o.svg.empty()) {
    Model m;
    if (o.model == "halfplane")
      m = Model::HalfPlane;
    else if (o.model == "disc")
      m = Model::Disc;
    else
      throw InputError("model must be halfplane or disc");
    write_file(o.svg, render_svg(t, m, o.horizon));
  }
  std::cout << "faces " << t.faces.size() << " edges " << t.edges.size() << " vertices " << t.vertices.size() << "\n";
  if (o.svg.empty()) {
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
      const HPoint& p = t.vertices[i].p;
      std::ostringstream os;
      os.precision(10);
      if (p.infinity)
        os << "inf";
      else if (p.ideal)
        os << p.x;
      else
        os << p.x << " + " << p.y << "i";
      std::cout << "vertex " << i << " " << kind_name(t.vertices[i].kind) << " " << os.str() << "\n";
    }
  }
  return 0;
}

template <class F>
int with_surface(const std::string& path, F&& f) {
  AnySurface any = load_surface(path);
  return std::visit([&](auto& s) { return f(s); }, any);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatconic: cell complexes of subconics on translation surfaces"};
  app.require_subcommand(1);
  Options o;

  auto* dev = app.add_subcommand("develop", "list cone points of the developed chart");
  dev->add_option("surface", o.surface)->required();
  dev->add_option("--base", o.base, "base point x,y or id:x,y");
  dev->add_option("--radius", o.radius);
  dev->add_flag("--json", o.json);

  auto add_window = [&](CLI::App* c) {
    c->add_option("--radius", o.radius);
    c->add_option("--base", o.base, "base point x,y or id:x,y");
    c->add_option("--seed", o.seed, "seed triple x,y;x,y;x,y");
    c->add_option("--budget", o.budget);
    c->add_option("--threads", o.threads);
  };

  auto* cx = app.add_subcommand("complex", "build a window of the cell complex");
  cx->add_option("surface", o.surface)->required();
  add_window(cx);
  cx->add_option("--out", o.out);

  auto* vc = app.add_subcommand("veech-check", "test a matrix for the Veech group in a window");
  vc->add_option("surface", o.surface)->required();
  vc->add_option("--matrix", o.matrix, "a,b,c,d")->required();
  vc->add_option("--radius", o.radius);

  auto* rb = app.add_subcommand("rebuild", "recover the affine map between two surfaces");
  rb->add_option("surface_a", o.surface)->required();
  rb->add_option("surface_b", o.surface_b)->required();
  add_window(rb);

  auto* ts = app.add_subcommand("tessellate", "tessellation of the hyperbolic plane");
  ts->add_option("surface", o.surface)->required();
  add_window(ts);
  ts->add_option("--svg", o.svg);
  ts->add_option("--model", o.model, "halfplane or disc");
  ts->add_option("--horizon", o.horizon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*dev) return with_surface(o.surface, [&](auto& s) { return cmd_develop(s, o); });
    if (*cx) return with_surface(o.surface, [&](auto& s) { return cmd_complex(s, o); });
    if (*vc) return with_surface(o.surface, [&](auto& s) { return cmd_veech(s, o); });
    if (*ts) return with_surface(o.surface, [&](auto& s) { return cmd_tessellate(s, o); });
    if (*rb) {
      AnySurface a = load_surface(o.surface), b = load_surface(o.surface_b);
      if (a.index() != b.index()) throw InputError("both surfaces must be exact or both floating point");
      return std::visit(
          [&](auto& sa) {
            using S = std::decay_t<decltype(sa)>;
            return cmd_rebuild(sa, std::get<S>(b), o);
          },
          a);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
