#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtinf/number.hpp"

namespace dtinf {

/// Outcome of checking one inequality instance lhs <= rhs.
struct VerificationReport {
  std::string inequality;
  Number lhs;
  Number rhs;
  Number slack;  // rhs - lhs
  bool holds = false;
  bool equality = false;
  Mode mode = Mode::exact;
  /// Set when a precondition made the check inapplicable (e.g. constant f).
  bool skipped = false;
  std::optional<nlohmann::json> witness;
  std::vector<std::string> notes;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Exact mode: holds iff slack >= 0, equality iff slack == 0.
/// Float mode: holds iff slack >= -tolerance, equality iff
/// |slack| <= tolerance * max(1, |lhs|).
template <Scalar T>
VerificationReport make_report(std::string inequality, const T& lhs, const T& rhs,
                               double tolerance = kFloatSlack) {
  VerificationReport r;
  r.inequality = std::move(inequality);
  r.mode = mode_of<T>();
  const T slack = T(rhs - lhs);
  r.lhs = Number(lhs);
  r.rhs = Number(rhs);
  r.slack = Number(slack);
  if constexpr (std::same_as<T, Rational>) {
    r.holds = sgn(slack) >= 0;
    r.equality = sgn(slack) == 0;
  } else {
    r.holds = slack >= -tolerance;
    r.equality = std::fabs(slack) <= tolerance * std::max(1.0, std::fabs(lhs));
  }
  return r;
}

/// rhs = +infinity: holds vacuously.
VerificationReport make_unbounded_report(std::string inequality, const Number& lhs, Mode mode);

VerificationReport make_skipped_report(std::string inequality, std::string reason, Mode mode);

nlohmann::json number_to_json(const Number& n);
Number number_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const VerificationReport& r);
void from_json(const nlohmann::json& j, VerificationReport& r);

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

/// One-line human rendering: "[holds] id: lhs <= rhs (slack ...)".
std::string format_report(const VerificationReport& r);

}  // namespace dtinf
