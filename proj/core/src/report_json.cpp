#include "dtinf/report.hpp"

#include "dtinf/errors.hpp"

namespace dtinf {

VerificationReport make_unbounded_report(std::string inequality, const Number& lhs, Mode mode) {
  VerificationReport r;
  r.inequality = std::move(inequality);
  r.mode = mode;
  r.lhs = lhs;
  r.rhs = Number::infinity();
  r.slack = Number::infinity();
  r.holds = true;
  r.equality = false;
  r.notes.push_back("right-hand side is unbounded; the inequality holds vacuously");
  return r;
}

VerificationReport make_skipped_report(std::string inequality, std::string reason, Mode mode) {
  VerificationReport r;
  r.inequality = std::move(inequality);
  r.mode = mode;
  r.skipped = true;
  r.holds = true;
  r.notes.push_back(std::move(reason));
  return r;
}

nlohmann::json number_to_json(const Number& n) { return n.to_string(); }

Number number_from_json(const nlohmann::json& j) {
  auto n = Number::parse(j.get<std::string>());
  if (!n) throw Error("bad number in report: " + j.dump());
  return *n;
}

std::string mode_name(Mode mode) { return mode == Mode::exact ? "rational" : "float"; }

Mode mode_from_name(const std::string& name) {
  if (name == "rational") return Mode::exact;
  if (name == "float") return Mode::floating;
  throw Error("unknown arithmetic mode '" + name + "'");
}

void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = nlohmann::json{
      {"inequality", r.inequality},
      {"lhs", number_to_json(r.lhs)},
      {"rhs", number_to_json(r.rhs)},
      {"slack", number_to_json(r.slack)},
      {"holds", r.holds},
      {"equality", r.equality},
      {"mode", mode_name(r.mode)},
      {"witness", r.witness ? *r.witness : nlohmann::json(nullptr)},
  };
  if (r.skipped) j["skipped"] = true;
  if (!r.notes.empty()) j["notes"] = r.notes;
}

void from_json(const nlohmann::json& j, VerificationReport& r) {
  r.inequality = j.at("inequality").get<std::string>();
  r.mode = mode_from_name(j.at("mode").get<std::string>());
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.slack = number_from_json(j.at("slack"));
  r.holds = j.at("holds").get<bool>();
  r.equality = j.at("equality").get<bool>();
  r.skipped = j.value("skipped", false);
  if (j.contains("witness") && !j.at("witness").is_null()) {
    r.witness = j.at("witness");
  } else {
    r.witness.reset();
  }
  r.notes = j.value("notes", std::vector<std::string>{});
}

std::string format_report(const VerificationReport& r) {
  std::string status = r.skipped ? "skipped" : !r.holds ? "FAILS" : r.equality ? "equality" : "holds";
  std::string line = "[" + status + "] " + r.inequality;
  if (!r.skipped) {
    line += ": " + r.lhs.to_human() + " <= " + r.rhs.to_human() + "  (slack " + r.slack.to_human() +
            ", " + mode_name(r.mode) + ")";
  }
  for (const auto& n : r.notes) line += "\n    note: " + n;
  return line;
}

}  // namespace dtinf
