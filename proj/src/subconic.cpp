#include "flatconic/subconic.hpp"

namespace flatconic {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::EllipseInterior: return "ellipse";
    case Kind::Strip: return "strip";
    case Kind::HalfPlane: return "half-plane";
    case Kind::ParabolaInterior: return "parabola";
    case Kind::Other: break;
  }
  return "other";
}

}  // namespace flatconic
