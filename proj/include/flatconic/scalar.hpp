#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace flatconic {

using Rational = mpq_class;

/// Errors carry the CLI exit code they map to.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Float-mode tolerance. Defaults to 1e-9, FLATCONIC_TOL overrides.
double tolerance();
void set_tolerance(double tau);

/// Accepts "p/q", integers, and decimals with optional exponent.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

template <class T>
struct Scalar;

template <>
struct Scalar<Rational> {
  static constexpr bool exact = true;
  static int sign(const Rational& x, double = 1.0) { return sgn(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational abs(const Rational& x) { return Rational(::abs(x)); }
  static Rational from(const Rational& x) { return x; }
  static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct Scalar<double> {
  static constexpr bool exact = false;
  static int sign(double x, double scale = 1.0) {
    double t = tolerance() * (scale > 1.0 ? scale : 1.0);
    return x > t ? 1 : (x < -t ? -1 : 0);
  }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static double from(const Rational& x) { return x.get_d(); }
  static std::string str(double x);
};

template <class T>
int sign(const T& x, double scale = 1.0) {
  return Scalar<T>::sign(x, scale);
}

template <class T>
double to_double(const T& x) {
  return Scalar<T>::to_double(x);
}

template <class T>
bool is_zero(const T& x, double scale = 1.0) {
  return Scalar<T>::sign(x, scale) == 0;
}

}  // namespace flatconic
