#include "flatconic/scalar.hpp"

#include <charconv>
#include <cstdlib>

namespace flatconic {

namespace {

double initial_tolerance() {
  if (const char* env = std::getenv("FLATCONIC_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return 1e-9;
}

double& tolerance_slot() {
  static double tau = initial_tolerance();
  return tau;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

double tolerance() { return tolerance_slot(); }

void set_tolerance(double tau) {
  if (!(tau > 0.0)) throw InputError("tolerance must be positive");
  tolerance_slot() = tau;
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (c != ' ' && c != '\t') text.push_back(c);
  if (text.empty()) throw InputError("empty number");

  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    std::string digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!all_digits(digits) || !all_digits(den)) throw InputError("malformed rational '" + raw + "'");
    if (num[0] == '+') num = num.substr(1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw InputError("zero denominator in '" + raw + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::string mantissa;
  long exponent = 0;
  bool seen_point = false, seen_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      std::string e = text.substr(pos + 1);
      std::string ed = (!e.empty() && (e[0] == '-' || e[0] == '+')) ? e.substr(1) : e;
      if (!all_digits(ed) || ed.size() > 6) throw InputError("malformed exponent in '" + raw + "'");
      exponent += std::stol(e);
      pos = text.size();
      break;
    } else {
      throw InputError("malformed number '" + raw + "'");
    }
  }
  if (!seen_digit) throw InputError("malformed number '" + raw + "'");
  mpz_class m(mantissa, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(m, scale) : Rational(m * scale);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string Scalar<double>::str(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace flatconic
