#include "flatconic/complex.hpp"

namespace flatconic {

std::string cell_status_name(CellStatus s) {
  switch (s) {
    case CellStatus::Realized:
      return "realized";
    case CellStatus::NotRealizable:
      return "not realizable";
    case CellStatus::WindowTooSmall:
      return "window too small";
  }
  return "unknown";
}

template std::vector<RigidConic<Rational>> rigid_conics(const Chart<Rational>&);
template std::vector<RigidConic<double>> rigid_conics(const Chart<double>&);
template ComplexWindow<Rational> build_complex(const Context<Rational>&, const std::array<Vec2<Rational>, 3>&, int, int);
template ComplexWindow<double> build_complex(const Context<double>&, const std::array<Vec2<double>, 3>&, int, int);

}  // namespace flatconic
