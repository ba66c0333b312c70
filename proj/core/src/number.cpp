#include "dtinf/number.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace dtinf {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::optional<mpz_class> parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) return std::nullopt;
  mpz_class z(std::string(s), 10);
  if (negative) z = -z;
  return z;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// Parses [sign] digits [. digits] [e|E [sign] digits].
std::optional<Rational> parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_part = parse_integer(s.substr(e + 1));
    if (!exp_part || !exp_part->fits_slong_p()) return std::nullopt;
    exponent = exp_part->get_si();
    if (exponent > 4096 || exponent < -4096) return std::nullopt;
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;
    digits = std::string(int_part) + std::string(frac_part);
    frac_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) return std::nullopt;
    digits = std::string(s);
  }
  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long scale = exponent - frac_digits;
  Rational q;
  if (scale >= 0) {
    q = Rational(mantissa * pow10(static_cast<unsigned long>(scale)));
  } else {
    q = Rational(mantissa, pow10(static_cast<unsigned long>(-scale)));
  }
  q.canonicalize();
  return q;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    Rational q(*num, *den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

std::string to_decimal_string(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_short_string(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool Number::is_infinite() const {
  return !is_exact() && std::isinf(std::get<double>(value_));
}

double Number::to_double() const {
  if (is_exact()) return dtinf::to_double(exact());
  return std::get<double>(value_);
}

std::string Number::to_string() const {
  if (is_exact()) return to_fraction_string(exact());
  auto s = to_decimal_string(std::get<double>(value_));
  // Keep integral doubles distinguishable from exact integers.
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

std::string Number::to_human() const {
  std::string s = to_short_string(to_double());
  if (is_exact() && exact().get_den() != 1) s += " (= " + to_fraction_string(exact()) + ")";
  return s;
}

std::optional<Number> Number::parse(std::string_view text) {
  if (text == "inf") return Number::infinity();
  if (text == "-inf") return Number(-std::numeric_limits<double>::infinity());
  bool fraction_or_integer = text.find('/') != std::string_view::npos ||
                             text.find_first_of(".eEn") == std::string_view::npos;
  if (fraction_or_integer) {
    if (auto q = parse_rational(text)) return Number(*q);
    return std::nullopt;
  }
  std::string s(text);
  char* end = nullptr;
  double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return Number(x);
}

bool operator==(const Number& a, const Number& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.exact() == b.exact();
  double x = std::get<double>(a.value_);
  double y = std::get<double>(b.value_);
  return x == y || (std::isnan(x) && std::isnan(y));
}

}  // namespace dtinf
