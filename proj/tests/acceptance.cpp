// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dtinf/families.hpp"
#include "dtinf/io.hpp"
#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/thresholds.hpp"
#include "dtinf/verify.hpp"
#include "oracles.hpp"

using namespace dtinf;

namespace {

// Collects the first few failure messages of a criterion.
struct Log {
  std::vector<std::string> problems;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && problems.size() < 5) problems.push_back(what);
    if (!ok && problems.size() == 5) problems.push_back("...");
  }
  bool ok() const { return problems.empty(); }
};

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  ((os << args), ...);
  return os.str();
}

std::vector<TabulatedFunction> all_boolean(std::size_t n, const Rational& p) {
  std::vector<TabulatedFunction> out;
  const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
  for (std::uint64_t code = 0; code < count; ++code) out.push_back(oracle::boolean(n, p, code));
  return out;
}

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

Rational weighted_influence(const DecisionTree& t, const TabulatedFunction& f) {
  const auto d = delta<Rational>(t, f.space());
  const auto inf = influences<Rational>(f);
  Rational s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * inf.values[i];
  return s;
}

void figure1(Log& log) {
  const auto fam = build("figure1");
  const auto& f = fam.function;
  const auto var = variation<Rational>(f);
  log.expect(var == q(3, 2), cat("Var = ", var));
  log.expect(delta<Rational>(*fam.tree, f.space()) == std::vector<Rational>{1, q(3, 4), q(3, 4)}, "delta");
  log.expect(influences<Rational>(f).values == std::vector<Rational>{q(1, 8), q(7, 8), q(7, 8)}, "Inf rho2");
  const auto s = weighted_influence(*fam.tree, f);
  log.expect(s == q(23, 16) && s < var, cat("sum delta Inf = ", s));
  const auto rc = check_real_corollary<Rational>(RandomizedTree::single(*fam.tree), f);
  log.expect(rc.k == 3, "k");
  log.expect(rc.main.holds && rc.main.lhs == Number(q(3, 2)) && rc.main.rhs == Number(q(69, 16)),
             format_report(rc.main));
}

void exhaustive_main(Log& log) {
  for (const Rational& p : {q(1, 2), q(1, 4), q(3, 4)}) {
    for (const auto& f : all_boolean(3, p)) {
      for_each_ddt(f, [&](const DecisionTree& t) {
        const auto r = check_main<Rational>(t, f);
        log.expect(r.holds, cat("p=", p, " ", format_tree(t, f.space(), f.outputs()), ": ", format_report(r)));
      });
    }
  }
}

void separated_equality(Log& log) {
  for (const char* name : {"and:2", "or:2", "sel", "tribes:2,2"}) {
    const auto fam = build(name);
    log.expect(is_separated(*fam.tree, fam.function.space()), cat(name, " not separated"));
    const auto r = check_main<Rational>(*fam.tree, fam.function);
    log.expect(r.equality, cat(name, ": ", format_report(r)));
    const auto rho = as_rho2(fam.function);
    const auto s = check_semimetric<Rational>(RandomizedTree::single(*fam.tree), rho, rho);
    const auto e = check_separated_equality<Rational>(*fam.tree, rho);
    log.expect(e.equality, cat(name, " rho2: ", format_report(e)));
    log.expect(variation<Rational>(rho) == weighted_influence(*fam.tree, rho), cat(name, " rho2 sum"));
    log.expect(s.holds, cat(name, " rho2 semimetric: ", format_report(s)));
  }
}

void hybrid_identity(Log& log) {
  std::mt19937_64 rng(20);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rng() % 3;
    const auto p = q(1 + static_cast<long>(rng() % 3), 4);
    const auto f = oracle::boolean(n, p, rng() & ((std::uint64_t{1} << (1u << n)) - 1));
    const auto trees = enumerate_all_ddts(f);
    const auto& t = trees[rng() % trees.size()];
    Rational total = 0;
    const auto& s = f.space();
    for (PointIndex x = 0; x < s.point_count(); ++x) {
      for (PointIndex y = 0; y < s.point_count(); ++y) {
        const auto h = hybrid_trace<Rational>(t, f, x, y);
        Rational steps = 0;
        for (const auto& d : h.step_distances) steps += d;
        total += oracle::prob(s, x) * oracle::prob(s, y) * steps;
      }
    }
    log.expect(total == weighted_influence(t, f), cat("pair ", rep, ": ", total, " vs ", weighted_influence(t, f)));
    log.expect(hybrid_aggregate<Rational>(t, f) == total, cat("aggregate ", rep));
  }
  const auto space = std::make_shared<const ProductSpace>(ProductSpace::biased_cube(4, q(1, 2)));
  const auto outs = std::make_shared<const OutputSpace>(OutputSpace::boolean());
  const auto t = parse_tree("(q 4 (-1 (leaf -1)) (1 (q 2 (-1 (leaf -1)) (1 (leaf 1)))))", *space, *outs);
  const auto f = tabulate(t, space, outs);
  const auto x = space->encode(std::vector<std::size_t>{1, 0, 1, 1});
  const auto y = space->encode(std::vector<std::size_t>{1, 1, 0, 0});
  const auto h = hybrid_trace<Rational>(t, f, x, y);
  log.expect(h.hybrids.size() == 3, "worked example length");
  if (h.hybrids.size() == 3) {
    log.expect(space->format_point(h.hybrids[0]) == "(1,-1,-1,1)", space->format_point(h.hybrids[0]));
    log.expect(space->format_point(h.hybrids[1]) == "(1,-1,-1,-1)", space->format_point(h.hybrids[1]));
    log.expect(space->format_point(h.hybrids[2]) == "(1,1,-1,-1)", space->format_point(h.hybrids[2]));
  }
}

void efron_stein_improvement(Log& log) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const Rational& p : {q(1, 2), q(1, 4), q(3, 4)}) {
      for (const auto& f : all_boolean(n, p)) {
        const auto inf = influences<Rational>(f);
        const auto var = variation<Rational>(f);
        for_each_ddt(f, [&](const DecisionTree& t) {
          const auto s = weighted_influence(t, f);
          log.expect(var <= s, cat("Var > sum, p=", p, " ", format_function(f)));
          log.expect(s <= inf.total, cat("sum > Inf, p=", p, " ", format_function(f)));
        });
      }
    }
  }
}

void optimal_agreement(Log& log) {
  auto compare = [&](const TabulatedFunction& f) {
    std::optional<Rational> best;
    for_each_ddt(f, [&](const DecisionTree& t) {
      const auto c = expected_cost<Rational>(t, f.space());
      if (!best || c < *best) best = c;
    });
    const auto r = optimal_expected_cost<Rational>(f);
    log.expect(best && r.cost == *best, cat("DP ", r.cost, " vs enumeration ", *best));
  };
  for (const auto& f : all_boolean(3, q(1, 2))) compare(f);
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 100; ++rep) compare(oracle::boolean(4, q(1, 2), rng() & 0xffff));
  log.expect(optimal_expected_cost<Rational>(build("maj:3").function).cost == q(5, 2), "MAJ3");
  log.expect(optimal_expected_cost<Rational>(build("and:2").function).cost == q(3, 2), "AND2");
  log.expect(optimal_expected_cost<Rational>(build("xor:3").function).cost == 3, "XOR3");
}

void pipeline(Log& log) {
  for (const char* name : {"maj:3", "tribes:2,2"}) {
    const auto fam = build(name);
    ThresholdChainOptions opts;
    opts.automorphisms = fam.automorphisms;
    const auto r = threshold_chain(fam.function, opts);
    log.expect(r.critical.residual <= 1e-12, cat(name, " residual ", r.critical.residual));
    log.expect(r.influence_chain.holds, cat(name, ": ", format_report(r.influence_chain)));
    log.expect(r.power_chain.holds, cat(name, ": ", format_report(r.power_chain)));
    log.expect(r.final_bound.holds, cat(name, ": ", format_report(r.final_bound)));
    const auto exact_delta =
        optimal_expected_cost<double>(build(name, Number(r.critical.p_star)).function).cost;
    log.expect(r.formula.transitive <= exact_delta + 1e-9,
               cat(name, " bound ", r.formula.transitive, " > Delta ", exact_delta));
    if (std::string(name) == "tribes:2,2") {
      const double expected = std::sqrt(1 - std::pow(2.0, -0.5));
      log.expect(std::fabs(r.critical.p_star - expected) < 5e-7, cat("p* = ", r.critical.p_star));
    }
  }
}

void os_inequality(Log& log) {
  std::size_t monotone = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const Rational& p : {q(1, 4), q(1, 2), q(3, 4)}) {
      for (const auto& f : all_boolean(n, p)) {
        if (!is_monotone(f)) continue;
        ++monotone;
        const auto r = check_os_inequality(f);
        log.expect(r.holds, cat(format_function(f), format_report(r)));
      }
    }
  }
  log.expect(monotone == 3 * (3 + 6 + 20), cat("monotone count ", monotone));
}

void defect_facts(Log& log) {
  std::vector<OutputSpace> spaces{OutputSpace::boolean(), OutputSpace::discrete({"a", "b", "c", "d"}),
                                  OutputSpace::rho1({"-1", "0", "1/2", "3"})};
  for (const auto& labels : std::vector<std::vector<std::string>>{{"0", "1"},
                                                                  {"0", "1", "2"},
                                                                  {"-1", "0", "2"},
                                                                  {"0", "1", "2", "3"},
                                                                  {"0", "1/3", "1", "4", "9"},
                                                                  {"-2", "-1", "0", "1", "2"}})
    spaces.push_back(OutputSpace::rho2(labels));
  for (const auto& o : spaces) {
    Rational prev = 0;
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto d = defect<Rational>(o, k);
      const auto brute = oracle::defect(o, k);
      log.expect(!d.unbounded && brute && d.value == *brute, cat(o.tag(), " k=", k, " brute force"));
      if (k == 1) log.expect(d.value == 1, cat(o.tag(), " Def_1 = ", d.value));
      log.expect(d.value >= prev, cat(o.tag(), " not monotone at k=", k));
      if (o.tag() == "rho2") log.expect(d.value <= static_cast<long>(k), cat("rho2 Def_", k, " = ", d.value));
      prev = d.value;
    }
  }
  log.expect(defect<Rational>(OutputSpace::rho2({"0", "1", "2"}), 2).value == 2, "Def_2(rho2 {0,1,2})");
}

void entropy_bound(Log& log) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const Rational& p : {q(1, 4), q(1, 2)}) {
      for (const auto& f : all_boolean(n, p)) {
        const double cost = to_double(optimal_expected_cost<Rational>(f).cost);
        for_each_ddt(f, [&](const DecisionTree& t) {
          const auto r = check_entropy_bound(t, f, cost);
          log.expect(r.holds, cat(format_function(f), format_report(r)));
        });
      }
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Log&)>>> criteria{
      {"figure1 statistics reproduce exactly", figure1},
      {"exhaustive main inequality, n = 3, p in {1/2, 1/4, 3/4}", exhaustive_main},
      {"separated trees give equality (boolean and rho2)", separated_equality},
      {"hybrid identity and worked example", hybrid_identity},
      {"Var <= sum delta_i Inf_i <= Inf, n <= 3", efron_stein_improvement},
      {"optimal cost agrees with enumeration", optimal_agreement},
      {"critical-probability lower bound chain", pipeline},
      {"OS inequality on monotone functions, n <= 3", os_inequality},
      {"defect facts", defect_facts},
      {"entropy size bound, n <= 3", entropy_bound},
  };
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    Log log;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[c].second(log);
    } catch (const std::exception& e) {
      log.problems.push_back(cat("exception: ", e.what()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s  (%zu checks, %.2fs)\n", log.ok() ? "PASS" : "FAIL", c + 1,
                criteria[c].first.c_str(), log.checks, secs);
    for (const auto& p : log.problems) std::printf("    %s\n", p.c_str());
    if (!log.ok()) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
