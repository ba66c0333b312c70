#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace dtinf {

using Rational = mpq_class;

/// Arithmetic used by a computation: exact rationals or IEEE doubles.
enum class Mode { exact, floating };

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
constexpr Mode mode_of() {
  return std::same_as<T, Rational> ? Mode::exact : Mode::floating;
}

/// Slack below which a float-mode inequality still counts as holding.
inline constexpr double kFloatSlack = 1e-9;

/// Weight sums in float mode must be within this of 1.
inline constexpr double kWeightSumTolerance = 1e-12;

/// Parses "a/b", integers and finite decimals ("-0.25", "1e-3") exactly.
std::optional<Rational> parse_rational(std::string_view text);

double to_double(const Rational& q);

/// "a/b", or "a" when the denominator is 1.
std::string to_fraction_string(const Rational& q);

/// Round-trippable decimal ("%.17g"), with "inf"/"-inf"/"nan" spelled out.
std::string to_decimal_string(double x);

/// Decimal with `digits` significant digits.
std::string to_short_string(double x, int digits = 10);

template <Scalar T>
T from_rational(const Rational& q) {
  if constexpr (std::same_as<T, Rational>) {
    return q;
  } else {
    return to_double(q);
  }
}

template <Scalar T>
double as_double(const T& v) {
  if constexpr (std::same_as<T, Rational>) {
    return to_double(v);
  } else {
    return v;
  }
}

template <Scalar T>
T abs_value(const T& v) {
  if constexpr (std::same_as<T, Rational>) {
    return T(abs(v));
  } else {
    return std::fabs(v);
  }
}

/// A report value: exact rational, finite double, or +/- infinity.
class Number {
 public:
  Number() : value_(0.0) {}
  Number(Rational q) : value_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Number(double x) : value_(x) {}               // NOLINT(google-explicit-constructor)

  static Number infinity() { return Number(std::numeric_limits<double>::infinity()); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  bool is_infinite() const;
  Mode mode() const { return is_exact() ? Mode::exact : Mode::floating; }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const;

  /// "a/b" for exact values, round-trippable decimal otherwise.
  std::string to_string() const;
  /// Ten significant digits, with " (= a/b)" appended for non-integral exact values.
  std::string to_human() const;

  /// Inverse of to_string(): "a/b" or an integer is exact, anything else float.
  static std::optional<Number> parse(std::string_view text);

  friend bool operator==(const Number& a, const Number& b);

 private:
  std::variant<Rational, double> value_;
};

template <Scalar T>
Number to_number(const T& v) {
  return Number(v);
}

}  // namespace dtinf
