#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatconic/complex.hpp"
#include "flatconic/geom.hpp"

namespace flatconic {

/// Affine map p -> linear * p + translation, with linear = h * unimodular.
template <class T>
struct AffineCandidate {
  Mat2<T> linear = Mat2<T>::identity();
  Vec2<T> translation;
  double h = 1;
  std::optional<Rational> h_exact;        // when det is a rational square
  std::optional<Mat2<T>> unimodular;      // linear / h when h is exact
};

template <class T>
AffineCandidate<T> make_candidate(const Mat2<T>& g, const Vec2<T>& c);

/// Orientation preserving affine map sending z[i] to w[i], checked on the fourth point.
template <class T>
AffineCandidate<T> psi_of_quadruple(const std::array<Vec2<T>, 4>& z, const std::array<Vec2<T>, 4>& w);

template <class T>
AffineCandidate<T> reconstruct(const ComplexWindow<T>& a, const ComplexWindow<T>& b, const CellMatching& phi);

enum class Verdict { MemberInWindow, Rejected, Inconclusive };
std::string verdict_name(Verdict v);

struct VeechReport {
  Verdict verdict = Verdict::Inconclusive;
  double radius = 0;
  double certificate_radius = 0;  // safe radius of the accepted candidate
  int candidates = 0, rejected = 0, inconclusive = 0;
  std::string reason;
};

template <class T>
VeechReport veech_check(const Surface<T>& s, const Mat2<T>& g, const T& radius);

struct TessVertex {
  HPoint p;
  Kind kind = Kind::Other;
  int source = -1;  // vertex of the complex
};

struct Tessellation {
  std::vector<TessVertex> vertices;
  std::vector<std::pair<int, int>> edges;
  struct Face {
    std::vector<int> vertices;
    std::string label;
    bool truncated = false;
  };
  std::vector<Face> faces;
};

template <class T>
Tessellation tessellate(const ComplexWindow<T>& w);

/// Action of g on points of the closed upper half-plane, z -> (a z + b) / (c z + d).
HPoint mobius(const Mat2d& g, const HPoint& p);

enum class Model { HalfPlane, Disc };
std::string render_svg(const Tessellation& t, Model model, double horizon = 4.0);

}  // namespace flatconic

#include "flatconic/veech_impl.hpp"
