#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "dtinf/report.hpp"

using namespace dtinf;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(DTINF_FIXTURES) + "/" + name; }

nlohmann::json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return nlohmann::json::parse(r.out);
}

std::optional<VerificationReport> find_report(const nlohmann::json& j, const std::string& id) {
  for (const auto& r : j.at("reports"))
    if (r.at("inequality") == id) return r.get<VerificationReport>();
  return std::nullopt;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"analyze"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"analyze", "--family", "nand:2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--n", "4", "--inequality", "main"}).code, cli::kExitUsage);
}

TEST(Cli, ParseErrorsExitTwoWithLine) {
  auto r = run({"analyze", "--function", fixture("malformed.fn")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  r = run({"analyze", "--function", fixture("bad_weights.fn")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  r = run({"analyze", "--function", fixture("does_not_exist.fn")});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST(Cli, AnalyzeFigure1) {
  const auto j = run_json({"analyze", "--family", "figure1", "--tree", "canonical", "--metric", "rho2"});
  EXPECT_EQ(j.at("variation"), "3/2");
  EXPECT_EQ(j.at("influences"), (nlohmann::json{"1/8", "7/8", "7/8"}));
  const auto rc = find_report(j, "real-corollary");
  ASSERT_TRUE(rc.has_value());
  EXPECT_EQ(rc->lhs, Number(Rational(3, 2)));
  EXPECT_TRUE(rc->holds);
  EXPECT_NE(j.dump().find("23/16"), std::string::npos);
  EXPECT_FALSE(find_report(j, "main").has_value());
}

TEST(Cli, AnalyzeFigure1FromFiles) {
  const auto a = run_json({"analyze", "--function", fixture("figure1.fn"), "--tree", fixture("figure1.tree")});
  EXPECT_EQ(a.at("variation"), "3/2");
}

TEST(Cli, AnalyzeAnd2IsEquality) {
  const auto j = run_json({"analyze", "--family", "and:2", "--tree", "canonical"});
  const auto m = find_report(j, "main");
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(m->equality);
  EXPECT_EQ(m->lhs, Number(Rational(3, 4)));
  EXPECT_EQ(run({"analyze", "--family", "and:2", "--tree", "canonical"}).code, cli::kExitOk);
}

TEST(Cli, AnalyzeOptimalAndBias) {
  const auto j = run_json({"analyze", "--family", "maj:3", "--optimal"});
  EXPECT_EQ(j.at("optimal").at("expected_cost"), "5/2");
  EXPECT_EQ(j.at("optimal").at("depth"), 3);
  const auto b = run_json({"analyze", "--function", fixture("and2_biased.fn")});
  EXPECT_EQ(b.at("influences"), (nlohmann::json{"8/27", "8/27"}));
  const auto f = run_json({"--float", "analyze", "--family", "maj:3"});
  EXPECT_EQ(f.at("mode"), "float");
}

TEST(Cli, ReportsRoundTripThroughJson) {
  const auto j = run_json({"analyze", "--family", "tribes:2,2", "--tree", "canonical"});
  ASSERT_FALSE(j.at("reports").empty());
  for (const auto& r : j.at("reports")) {
    const auto rep = r.get<VerificationReport>();
    const nlohmann::json back = rep;
    EXPECT_EQ(back, r);
    EXPECT_TRUE(rep.holds);
  }
  EXPECT_TRUE(find_report(j, "separated-equality")->equality);
}

TEST(Cli, SweepExamples) {
  auto j = run_json({"sweep", "--n", "2", "--p", "1/2", "--inequality", "main"});
  EXPECT_EQ(j.at("functions"), 16);
  EXPECT_EQ(j.at("failures"), 0);
  EXPECT_EQ(j.at("non_separated_equalities"), 0);
  j = run_json({"sweep", "--n", "3", "--inequality", "efron-stein"});
  EXPECT_EQ(j.at("functions"), 256);
  EXPECT_EQ(j.at("failures"), 0);
  j = run_json({"sweep", "--n", "3", "--inequality", "os"});
  EXPECT_EQ(j.at("failures"), 0);
  EXPECT_EQ(j.at("instances"), 20);
  j = run_json({"sweep", "--n", "4", "--inequality", "main", "--sample", "10", "--seed", "5"});
  EXPECT_EQ(j.at("functions"), 10);
  EXPECT_EQ(j.at("failures"), 0);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  for (const char* ineq : {"main", "two-function", "optimal"}) {
    const auto a = run({"--threads", "1", "sweep", "--n", "2", "--inequality", ineq});
    const auto b = run({"--threads", "4", "sweep", "--n", "2", "--inequality", ineq});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << ineq;
  }
  const auto a = run({"--json", "--threads", "1", "sweep", "--n", "5", "--sample", "6", "--seed", "9"});
  const auto b = run({"--json", "--threads", "3", "sweep", "--n", "5", "--sample", "6", "--seed", "9"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OptimalCriticalDefect) {
  auto j = run_json({"optimal", "--family", "maj:3"});
  EXPECT_EQ(j.at("expected_cost"), "5/2");
  EXPECT_EQ(j.at("depth"), 3);
  j = run_json({"critical", "--family", "tribes:2,2"});
  EXPECT_NEAR(std::stod(j.at("p_star").get<std::string>()), 0.5411961, 1e-7);
  j = run_json({"critical", "--family", "maj:3", "--pipeline"});
  EXPECT_NEAR(std::stod(j.at("pipeline").at("lower_bound").get<std::string>()), 2.0801, 1e-4);
  EXPECT_EQ(run({"critical", "--family", "xor:2"}).code, cli::kExitUsage);
  j = run_json({"defect", "--outputs", "0,1,2", "--metric", "rho2", "--k", "2"});
  EXPECT_EQ(j.at("value"), "2");
  EXPECT_EQ(j.at("unbounded"), false);
}

TEST(Cli, Trace) {
  const auto r = run({"trace", "--family", "and:2", "--tree", "canonical", "--x=-1,1", "--y=1,1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("queries: x1"), std::string::npos) << r.out;
  EXPECT_EQ(run({"trace", "--family", "and:2", "--x=-1,1", "--y=1,1"}).code, cli::kExitUsage);
}
