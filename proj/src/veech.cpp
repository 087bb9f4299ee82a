#include "flatconic/veech.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

namespace flatconic {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::MemberInWindow: return "member-in-window";
    case Verdict::Rejected: return "rejected";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

HPoint mobius(const Mat2d& g, const HPoint& p) {
  HPoint out;
  if (p.infinity) {
    if (std::fabs(g.c) < 1e-14) {
      out.ideal = out.infinity = true;
    } else {
      out.ideal = true;
      out.x = g.a / g.c;
    }
    return out;
  }
  std::complex<double> z(p.x, p.ideal ? 0.0 : p.y);
  std::complex<double> den = g.c * z + g.d;
  if (std::abs(den) < 1e-14) {
    out.ideal = out.infinity = true;
    return out;
  }
  std::complex<double> w = (g.a * z + g.b) / den;
  out.x = w.real();
  out.ideal = p.ideal;
  out.y = p.ideal ? 0.0 : w.imag();
  return out;
}

namespace {

using cd = std::complex<double>;

struct Canvas {
  Model model;
  double horizon;
  double size = 800;

  // Upper half-plane points drawn in [-horizon, horizon] x [0, horizon]
  cd to_model(const HPoint& p) const {
    if (model == Model::HalfPlane) {
      if (p.infinity) return {0, horizon};
      return {p.x, p.y};
    }
    if (p.infinity) return {1, 0};
    cd z(p.x, p.y);
    return (z - cd(0, 1)) / (z + cd(0, 1));
  }

  std::pair<double, double> px(cd w) const {
    if (model == Model::HalfPlane) {
      double s = size / (2 * horizon);
      return {(w.real() + horizon) * s, size / 2 - w.imag() * s};
    }
    double s = size / 2.2;
    return {size / 2 + w.real() * s, size / 2 - w.imag() * s};
  }

  double scale() const { return model == Model::HalfPlane ? size / (2 * horizon) : size / 2.2; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  std::string s = os.str();
  if (s == "-0.000") s = "0.000";
  return s;
}

// Path command continuing from a to b along the geodesic.
std::string geodesic(const Canvas& cv, const HPoint& a, const HPoint& b) {
  auto [bx, by] = cv.px(cv.to_model(b));
  std::string line = " L " + fmt(bx) + " " + fmt(by);
  if (cv.model == Model::HalfPlane) {
    if (a.infinity || b.infinity) {
      if (a.infinity && b.infinity) return line;
      const HPoint& f = a.infinity ? b : a;
      auto top = cv.px({f.x, cv.horizon});
      std::string up = " L " + fmt(top.first) + " " + fmt(top.second);
      return a.infinity ? up + line : up;
    }
    if (std::fabs(a.x - b.x) < 1e-12) return line;
    double c = (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y) / (2 * (b.x - a.x));
    double r = std::hypot(a.x - c, a.y) * cv.scale();
    int sweep = b.x > a.x ? 1 : 0;
    return " A " + fmt(r) + " " + fmt(r) + " 0 0 " + std::to_string(sweep) + " " + fmt(bx) + " " + fmt(by);
  }
  cd p = cv.to_model(a), q = cv.to_model(b);
  HPoint m;
  if (a.infinity || b.infinity) {
    const HPoint& f = a.infinity ? b : a;
    m = {f.x, f.y + 1.0 + std::fabs(f.x), false, false};
    if (f.ideal) m.y = 1.0 + std::fabs(f.x);
  } else {
    double mx = (a.x + b.x) / 2;
    if (std::fabs(a.x - b.x) < 1e-12) {
      m = {a.x, std::sqrt(std::max(a.y, 1e-9) * std::max(b.y, 1e-9)), false, false};
    } else {
      double c = (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y) / (2 * (b.x - a.x));
      double r = std::hypot(a.x - c, a.y);
      m = {mx, std::sqrt(std::max(r * r - (mx - c) * (mx - c), 0.0)), false, false};
    }
  }
  cd mm = cv.to_model(m);
  // circle through p, mm, q
  cd d1 = mm - p, d2 = q - p;
  double det = 2 * (d1.real() * d2.imag() - d1.imag() * d2.real());
  if (std::fabs(det) < 1e-12) return line;
  double n1 = std::norm(d1), n2 = std::norm(d2);
  cd c = p + cd((d2.imag() * n1 - d1.imag() * n2) / det, (d1.real() * n2 - d2.real() * n1) / det);
  double r = std::abs(p - c) * cv.scale();
  // counterclockwise in the model is clockwise on screen
  double cross = d1.real() * (q - mm).imag() - d1.imag() * (q - mm).real();
  int sweep = cross > 0 ? 1 : 0;
  return " A " + fmt(r) + " " + fmt(r) + " 0 0 " + std::to_string(sweep) + " " + fmt(bx) + " " + fmt(by);
}

}  // namespace

std::string render_svg(const Tessellation& t, Model model, double horizon) {
  Canvas cv{model, horizon};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cv.size << "\" height=\"" << cv.size << "\">\n";
  os << "<style>.face{stroke:#223;stroke-width:1}.complete{fill:#cde}.truncated{fill:#eee}</style>\n";
  if (model == Model::HalfPlane) {
    os << "<line x1=\"0\" y1=\"" << fmt(cv.size / 2) << "\" x2=\"" << fmt(cv.size) << "\" y2=\"" << fmt(cv.size / 2)
       << "\" stroke=\"#000\"/>\n";
  } else {
    os << "<circle cx=\"" << fmt(cv.size / 2) << "\" cy=\"" << fmt(cv.size / 2) << "\" r=\"" << fmt(cv.scale())
       << "\" fill=\"none\" stroke=\"#000\"/>\n";
  }
  for (const auto& f : t.faces) {
    if (f.vertices.empty()) continue;
    const HPoint& first = t.vertices[f.vertices[0]].p;
    auto [x0, y0] = cv.px(cv.to_model(first));
    os << "<path class=\"face " << (f.truncated ? "truncated" : "complete") << "\" data-label=\"" << f.label << "\" d=\"M "
       << fmt(x0) << " " << fmt(y0);
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      const HPoint& a = t.vertices[f.vertices[i]].p;
      const HPoint& b = t.vertices[f.vertices[(i + 1) % f.vertices.size()]].p;
      os << geodesic(cv, a, b);
    }
    os << " Z\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace flatconic
