#include <json.hpp>

#include "flatconic/geom.hpp"
#include "flatconic/veech.hpp"

namespace flatconic {

namespace {

using nlohmann::ordered_json;

template <class T>
ordered_json scalar_json(const T& v) {
  if constexpr (Scalar<T>::exact)
    return to_string(v);
  else
    return v;
}

template <class T>
ordered_json point_json(const Vec2<T>& p) {
  return point_key(p);
}

template <class T>
ordered_json points_json(const std::vector<Vec2<T>>& pts) {
  ordered_json a = ordered_json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

ordered_json hpoint_json(const HPoint& p) {
  ordered_json j;
  if (p.infinity) {
    j["infinity"] = true;
  } else {
    j["x"] = p.x;
    j["y"] = p.y;
    j["ideal"] = p.ideal;
  }
  return j;
}

}  // namespace

template <class T>
std::string complex_json(const ComplexWindow<T>& w) {
  ordered_json out;
  out["provenance"] = {{"base", point_json(w.base)},
                       {"radius", scalar_json(w.radius)},
                       {"budget", w.budget},
                       {"truncated", w.truncated},
                       {"skipped_cells", w.skipped_cells}};
  ordered_json vs = ordered_json::array();
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    const auto& v = w.vertices[i];
    ordered_json j;
    j["id"] = i;
    j["kind"] = kind_name(v.conic.u.kind);
    ordered_json coeffs = ordered_json::array();
    for (const T& c : v.conic.u.q.coeffs()) coeffs.push_back(scalar_json(c));
    j["form"] = coeffs;
    ordered_json comps = ordered_json::array();
    for (const auto& c : v.conic.components) comps.push_back(points_json(c));
    j["boundary"] = comps;
    j["truncated"] = v.conic.truncated;
    j["certified"] = v.certified;
    HomothetyClass hc = homothety_class(v.conic.u);
    ordered_json cls;
    if (hc.kind == Kind::EllipseInterior) {
      cls["form"] = {hc.form.a, hc.form.b, hc.form.d};
    } else if (hc.kind == Kind::Strip) {
      cls["direction"] = {hc.dir.x, hc.dir.y};
      if constexpr (Scalar<T>::exact) {
        auto [p, q] = strip_slope(v.conic.u.q);
        cls["slope"] = {p, q};
      }
    }
    cls["h"] = hpoint_json(h_point(hc));
    j["class"] = cls;
    vs.push_back(j);
  }
  out["vertices"] = vs;
  ordered_json es = ordered_json::array();
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const auto& e = w.edges[i];
    ordered_json q = ordered_json::array();
    for (const auto& p : e.quad) q.push_back(point_json(p));
    es.push_back({{"id", i}, {"quadruple", q}, {"ends", {e.ends[0], e.ends[1]}}});
  }
  out["edges"] = es;
  ordered_json fs = ordered_json::array();
  for (std::size_t i = 0; i < w.faces.size(); ++i) {
    const auto& f = w.faces[i];
    ordered_json tri = ordered_json::array();
    for (const auto& p : f.triple) tri.push_back(point_json(p));
    ordered_json ts = ordered_json::array();
    for (const auto& t : f.t) ts.push_back({scalar_json(t[0]), scalar_json(t[1]), scalar_json(t[2])});
    fs.push_back({{"id", i},
                  {"triple", tri},
                  {"vertices", f.vertices},
                  {"edges", f.edges},
                  {"t", ts},
                  {"orientation", "ccw"},
                  {"complete", f.complete}});
  }
  out["faces"] = fs;
  return out.dump(2) + "\n";
}

template std::string complex_json(const ComplexWindow<Rational>&);
template std::string complex_json(const ComplexWindow<double>&);

}  // namespace flatconic
