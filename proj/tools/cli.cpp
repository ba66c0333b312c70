#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <exception>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "dtinf/families.hpp"
#include "dtinf/io.hpp"
#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/report.hpp"
#include "dtinf/thresholds.hpp"
#include "dtinf/tree.hpp"
#include "dtinf/verify.hpp"

namespace dtinf::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Global {
  bool exact = false;
  bool floating = false;
  bool json = false;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
};

struct Source {
  std::string function_path;
  std::string family;
  std::string tree;
  std::string metric;
  std::string p;
};

struct Loaded {
  TabulatedFunction f;
  std::string name;
  std::optional<Family> family;
};

std::optional<Number> parse_probability(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto q = parse_rational(text);
  if (!q) throw UsageError("bad probability '" + text + "'");
  if (*q < 0 || *q > 1) throw UsageError("probability " + text + " is outside [0, 1]");
  return Number(*q);
}

Loaded load(const Source& s, const Global& g) {
  if (s.function_path.empty() == s.family.empty()) {
    throw UsageError("give exactly one of --function or --family");
  }
  const auto p = parse_probability(s.p);
  Loaded out = [&]() -> Loaded {
    if (!s.family.empty()) {
      auto fam = build(s.family, p.value_or(Number(Rational(1, 2))), g.cap);
      auto f = fam.function;
      return Loaded{std::move(f), fam.spec.to_string(), std::move(fam)};
    }
    auto f = parse_function(read_file(s.function_path), g.cap);
    if (p) {
      if (!f.space().is_binary_cube()) throw UsageError("--p applies only to {-1,1} cube functions");
      f = f.with_space(std::make_shared<const ProductSpace>(
          ProductSpace::biased_cube(f.dimension(), *p, g.cap)));
    }
    return Loaded{std::move(f), s.function_path, std::nullopt};
  }();
  if (!s.metric.empty()) {
    out.f = out.f.with_outputs(std::make_shared<const OutputSpace>(
        OutputSpace::builtin(s.metric, out.f.outputs().labels())));
  }
  return out;
}

std::optional<DecisionTree> resolve_tree(const std::string& spec, const Loaded& l) {
  if (spec.empty()) return std::nullopt;
  if (spec == "canonical") {
    if (!l.family) throw UsageError("--tree canonical needs --family");
    if (!l.family->tree) throw UsageError("family '" + l.name + "' has no canonical tree");
    return l.family->tree;
  }
  return parse_tree(read_file(spec), l.f.space(), l.f.outputs());
}

bool choose_exact(const Global& g, bool available) {
  if (g.exact && g.floating) throw UsageError("--exact and --float are exclusive");
  if (g.exact && !available) throw UsageError("--exact needs exact weights and distances");
  return g.exact || (!g.floating && available);
}

std::string num(const Number& n) { return n.to_string(); }

template <Scalar T>
json num_list(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(Number(x).to_string());
  return a;
}

template <Scalar T>
std::string human_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? "  " : "") + std::string("x") + std::to_string(i + 1) + "=" + Number(v[i]).to_human();
  }
  return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json reports_json(const std::vector<VerificationReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(r);
  return a;
}

bool all_hold(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.holds; });
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  bool optimal = false;
};

template <Scalar T>
int analyze(const Loaded& l, const std::optional<DecisionTree>& tree, const AnalyzeOptions& opts,
            const Global& g, std::ostream& out) {
  const auto& f = l.f;
  const auto& outs = f.outputs();
  const auto bias = f.space().cube_bias();
  const T var = variation<T>(f);
  const auto inf = influences<T>(f);
  std::vector<VerificationReport> reports;

  json j;
  j["function"] = l.name;
  j["mode"] = mode_name(mode_of<T>());
  j["space"] = {{"n", f.dimension()},
                {"points", f.space().point_count()},
                {"bias", bias ? json(bias->to_string()) : json(nullptr)}};
  j["outputs"] = {{"labels", outs.labels()},
                  {"metric", outs.tag()},
                  {"kind", outs.kind() == DistanceKind::metric ? "metric" : "semimetric"}};
  j["variation"] = num(Number(var));
  j["influences"] = num_list(inf.values);
  j["total_influence"] = num(Number(inf.total));
  j["max_influence"] = num(Number(inf.max));
  j["tree"] = nullptr;
  j["optimal"] = nullptr;

  std::ostringstream h;
  h << "function        " << l.name << "\n";
  h << "space           n=" << f.dimension() << " points=" << f.space().point_count()
    << (bias ? " p=" + bias->to_human() : std::string()) << " mode=" << mode_name(mode_of<T>())
    << "\n";
  h << "outputs         " << outs.tag() << " ("
    << (outs.kind() == DistanceKind::metric ? "metric" : "semimetric") << ") on {";
  for (std::size_t z = 0; z < outs.size(); ++z) h << (z ? "," : "") << outs.label(z);
  h << "}\n";
  h << "variation       " << Number(var).to_human() << "\n";
  h << "influences      " << human_list(inf.values) << "\n";
  h << "total influence " << Number(inf.total).to_human() << "\n";

  const bool boolean = outs.tag() == "boolean";
  if (boolean) {
    const auto t = talagrand_diagnostic(f);
    j["talagrand_sum"] = num(t);
    h << "talagrand sum   " << t.to_human() << "  (diagnostic only)\n";
  }

  if (tree) {
    const auto d = delta<T>(*tree, f.space());
    T weighted = T(0);
    for (std::size_t i = 0; i < d.size(); ++i) weighted += d[i] * inf.values[i];
    const bool separated = is_separated(*tree, f.space());
    const bool read_once = is_read_once(*tree);
    j["tree"] = {{"text", format_tree(*tree, f.space(), outs)},
                 {"delta", num_list(d)},
                 {"expected_cost", num(Number(expected_cost<T>(*tree, f.space())))},
                 {"depth", depth(*tree)},
                 {"leaves", tree->leaf_count()},
                 {"read_once", read_once},
                 {"separated", separated},
                 {"weighted_influence", num(Number(weighted))}};
    h << "tree            " << format_tree(*tree, f.space(), outs) << "\n";
    h << "delta           " << human_list(d) << "\n";
    h << "expected cost   " << Number(expected_cost<T>(*tree, f.space())).to_human()
      << "  depth " << depth(*tree) << "  read-once " << yes_no(read_once) << "  separated "
      << yes_no(separated) << "\n";
    h << "sum delta*Inf   " << Number(weighted).to_human() << "\n";

    const auto rt = RandomizedTree::single(*tree);
    if (outs.kind() == DistanceKind::metric) {
      reports.push_back(check_main<T>(*tree, f));
    } else {
      reports.push_back(check_semimetric<T>(rt, f, f));
    }
    if (outs.is_real()) {
      auto rc = check_real_corollary<T>(rt, f);
      reports.push_back(rc.main);
      reports.push_back(rc.max_influence);
    }
    reports.push_back(check_improvement<T>(*tree, f));
    if (separated) reports.push_back(check_separated_equality<T>(*tree, f));
  }
  if (boolean || outs.tag() == "rho2") reports.push_back(check_efron_stein<T>(f));

  if (opts.optimal) {
    const auto best = optimal_expected_cost<T>(f);
    const auto shallow = optimal_depth(f);
    j["optimal"] = {{"expected_cost", num(Number(best.cost))},
                    {"witness", format_tree(best.witness, f.space(), outs)},
                    {"depth", shallow.depth},
                    {"depth_witness", format_tree(shallow.witness, f.space(), outs)}};
    h << "Delta(f)        " << Number(best.cost).to_human() << "  witness "
      << format_tree(best.witness, f.space(), outs) << "\n";
    h << "D(f)            " << shallow.depth << "  witness "
      << format_tree(shallow.witness, f.space(), outs) << "\n";
    if (outs.kind() == DistanceKind::metric) reports.push_back(check_imax_corollary<T>(f));
    const bool cube_boolean = boolean && f.space().is_binary_cube() && bias;
    if (cube_boolean && bias->to_double() > 0 && bias->to_double() < 1) {
      if (tree) {
        reports.push_back(check_entropy_bound(*tree, f, as_double(best.cost)));
      }
      if (is_monotone(f)) reports.push_back(check_os_inequality(f));
    }
  }

  j["reports"] = reports_json(reports);
  if (g.json) {
    out << j.dump(2) << "\n";
  } else {
    out << h.str();
    for (const auto& r : reports) out << format_report(r) << "\n";
  }
  return all_hold(reports) ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::size_t n = 2;
  std::string p = "1/2";
  std::string inequality = "main";
  std::size_t sample = 0;
};

struct Tally {
  std::uint64_t functions = 0;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::uint64_t equalities = 0;
  std::uint64_t skipped = 0;
  /// Equality on a tree that is not separated.
  std::uint64_t non_separated_equalities = 0;
  std::optional<std::pair<std::size_t, json>> first_failure;

  void fail(std::size_t index, json detail) {
    ++failures;
    if (!first_failure || index < first_failure->first) first_failure.emplace(index, std::move(detail));
  }

  void merge(const Tally& o) {
    functions += o.functions;
    instances += o.instances;
    failures += o.failures;
    equalities += o.equalities;
    skipped += o.skipped;
    non_separated_equalities += o.non_separated_equalities;
    if (o.first_failure && (!first_failure || o.first_failure->first < first_failure->first)) {
      first_failure = o.first_failure;
    }
  }
};

const std::vector<std::string> kSweepInequalities{"main",        "efron-stein", "improvement",
                                                  "os",          "two-function", "entropy",
                                                  "optimal"};

std::vector<DecisionTree> sweep_trees(const TabulatedFunction& f) {
  if (f.dimension() <= kMaxEnumerationDimension) return enumerate_all_ddts(f);
  std::vector<DecisionTree> trees{optimal_expected_cost<double>(f).witness};
  auto shallow = optimal_depth(f).witness;
  if (!(shallow == trees.front())) trees.push_back(std::move(shallow));
  return trees;
}

template <Scalar T>
void record(Tally& t, std::size_t index, const TabulatedFunction& f, const VerificationReport& r,
            const DecisionTree* tree) {
  ++t.instances;
  if (r.skipped) {
    ++t.skipped;
    return;
  }
  if (r.equality) ++t.equalities;
  if (!r.holds) {
    json detail{{"table", format_function(f)}, {"report", r}};
    if (tree) detail["tree"] = format_tree(*tree, f.space(), f.outputs());
    t.fail(index, std::move(detail));
  }
}

template <Scalar T>
Tally sweep_one(const SweepOptions& o, std::size_t index, const TabulatedFunction& f,
                const std::vector<TabulatedFunction>& all) {
  Tally t;
  ++t.functions;
  const auto& ineq = o.inequality;
  if (ineq == "efron-stein") {
    record<T>(t, index, f, check_efron_stein<T>(f), nullptr);
  } else if (ineq == "os") {
    if (!is_monotone(f)) {
      --t.functions;
      return t;
    }
    record<T>(t, index, f, check_os_inequality(f), nullptr);
  } else if (ineq == "two-function") {
    const auto rt = RandomizedTree::single(optimal_expected_cost<T>(f).witness);
    for (const auto& g : all) record<T>(t, index, f, check_two_function<T>(rt, f, g), nullptr);
  } else if (ineq == "entropy") {
    const double cost = as_double(optimal_expected_cost<T>(f).cost);
    for (const auto& tree : sweep_trees(f)) {
      record<T>(t, index, f, check_entropy_bound(tree, f, cost), &tree);
    }
  } else if (ineq == "optimal") {
    const auto best = optimal_expected_cost<T>(f);
    std::optional<T> least;
    for (const auto& tree : sweep_trees(f)) {
      T c = expected_cost<T>(tree, f.space());
      if (!least || c < *least) least = c;
    }
    auto r = make_report<T>("optimal-oracle", best.cost, *least);
    r.holds = r.equality;
    record<T>(t, index, f, r, nullptr);
  } else {
    for (const auto& tree : sweep_trees(f)) {
      const auto r = ineq == "main" ? check_main<T>(tree, f) : check_improvement<T>(tree, f);
      record<T>(t, index, f, r, &tree);
      if (ineq == "main") {
        const bool separated = is_separated(tree, f.space());
        if (r.equality && !separated) ++t.non_separated_equalities;
        if (separated && !r.equality) {
          t.fail(index, json{{"table", format_function(f)},
                             {"tree", format_tree(tree, f.space(), f.outputs())},
                             {"reason", "separated tree without equality"}});
        }
      }
    }
  }
  return t;
}

std::vector<TabulatedFunction> sweep_functions(const SweepOptions& o, const Global& g,
                                               const Number& p) {
  if (o.n == 0) throw UsageError("--n must be at least 1");
  auto space = std::make_shared<const ProductSpace>(ProductSpace::biased_cube(o.n, p, g.cap));
  auto outputs = std::make_shared<const OutputSpace>(OutputSpace::boolean());
  const std::uint64_t points = space->point_count();
  auto from_bits = [&](std::uint64_t bits) {
    std::vector<std::uint32_t> table(points);
    for (PointIndex x = 0; x < points; ++x) table[x] = static_cast<std::uint32_t>((bits >> x) & 1);
    return TabulatedFunction(space, outputs, std::move(table));
  };
  std::vector<TabulatedFunction> fs;
  if (o.sample == 0) {
    if (o.n > 3) throw UsageError("exhaustive sweeps stop at n = 3; use --sample K for n = 4, 5");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << points); ++code) {
      fs.push_back(from_bits(code));
    }
  } else {
    if (o.n > 5) throw UsageError("sampled sweeps are limited to n <= 5");
    std::mt19937_64 rng(g.seed);
    for (std::size_t s = 0; s < o.sample; ++s) {
      std::uint64_t bits = rng();
      if (points < 64) bits &= (std::uint64_t{1} << points) - 1;
      fs.push_back(from_bits(bits));
    }
  }
  return fs;
}

template <Scalar T>
Tally run_sweep(const SweepOptions& o, const Global& g, const std::vector<TabulatedFunction>& fs) {
  const unsigned threads = std::max(1u, g.threads);
  std::vector<Tally> tallies(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < fs.size(); i += threads) {
        tallies[w].merge(sweep_one<T>(o, i, fs[i], fs));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Tally total;
  for (const auto& t : tallies) total.merge(t);
  return total;
}

int sweep(const SweepOptions& o, const Global& g, std::ostream& out) {
  if (std::find(kSweepInequalities.begin(), kSweepInequalities.end(), o.inequality) ==
      kSweepInequalities.end()) {
    throw UsageError("unknown inequality '" + o.inequality + "'");
  }
  const auto p = parse_probability(o.p).value();
  const auto fs = sweep_functions(o, g, p);
  const bool float_only = o.inequality == "os" || o.inequality == "entropy";
  const bool exact = !float_only && choose_exact(g, fs.front().exact());
  const Tally t = exact ? run_sweep<Rational>(o, g, fs) : run_sweep<double>(o, g, fs);

  json j{{"inequality", o.inequality},
         {"n", o.n},
         {"p", p.to_string()},
         {"mode", exact ? "rational" : "float"},
         {"sampled", o.sample != 0},
         {"functions", t.functions},
         {"instances", t.instances},
         {"failures", t.failures},
         {"equalities", t.equalities},
         {"skipped", t.skipped},
         {"non_separated_equalities", t.non_separated_equalities},
         {"first_failure", t.first_failure ? t.first_failure->second : json(nullptr)}};
  if (g.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "sweep " << o.inequality << "  n=" << o.n << "  p=" << p.to_human() << "  "
        << (o.sample ? "sampled " + std::to_string(o.sample) : std::string("exhaustive")) << "  "
        << (exact ? "rational" : "float") << "\n";
    out << "functions   " << t.functions << "\n";
    out << "instances   " << t.instances << "\n";
    out << "failures    " << t.failures << "\n";
    out << "equalities  " << t.equalities << "\n";
    if (o.inequality == "main") {
      out << "equalities on non-separated trees  " << t.non_separated_equalities << "\n";
    }
    if (t.first_failure) out << "first failure:\n" << t.first_failure->second.dump(2) << "\n";
  }
  return t.failures == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- optimal

template <Scalar T>
int optimal(const Loaded& l, const Global& g, std::ostream& out) {
  const auto& f = l.f;
  const auto best = optimal_expected_cost<T>(f);
  const auto shallow = optimal_depth(f);
  const auto w1 = format_tree(best.witness, f.space(), f.outputs());
  const auto w2 = format_tree(shallow.witness, f.space(), f.outputs());
  if (g.json) {
    json j{{"function", l.name},
           {"mode", mode_name(mode_of<T>())},
           {"expected_cost", num(Number(best.cost))},
           {"witness", w1},
           {"states", best.states},
           {"depth", shallow.depth},
           {"depth_witness", w2}};
    out << j.dump(2) << "\n";
  } else {
    out << "Delta(f) = " << Number(best.cost).to_human() << "\n  " << w1 << "\n";
    out << "D(f)     = " << shallow.depth << "\n  " << w2 << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- critical

struct CriticalOptions {
  double tol = kDefaultCriticalTolerance;
  bool pipeline = false;
  bool assume_transitive = false;
};

int critical(const Loaded& l, const CriticalOptions& o, const Global& g, std::ostream& out) {
  const auto c = critical_probability(l.f, o.tol);
  json j{{"function", l.name},
         {"mode", "float"},
         {"p_star", to_decimal_string(c.p_star)},
         {"bracket", {to_decimal_string(c.lo), to_decimal_string(c.hi)}},
         {"residual", to_decimal_string(c.residual)},
         {"iterations", c.iterations}};
  std::ostringstream h;
  h << "p* = " << to_short_string(c.p_star, 12) << "  bracket [" << to_short_string(c.lo, 15)
    << ", " << to_short_string(c.hi, 15) << "]  residual " << to_short_string(c.residual, 3)
    << "\n";
  int code = kExitOk;
  if (o.pipeline) {
    ThresholdChainOptions opts;
    opts.tol = o.tol;
    opts.assume_transitive = o.assume_transitive;
    if (l.family) {
      opts.automorphisms = l.family->automorphisms;
      opts.graph_vertices = l.family->graph_vertices;
    }
    const auto r = threshold_chain(l.f, opts);
    std::vector<VerificationReport> reports{r.influence_chain, r.power_chain, r.final_bound};
    j["pipeline"] = {{"variance", to_decimal_string(r.variance)},
                     {"total_influence", to_decimal_string(r.total_influence)},
                     {"optimal_cost", to_decimal_string(r.optimal_cost)},
                     {"witness", format_tree(r.witness, l.f.space(), l.f.outputs())},
                     {"equal_influences", r.equal_influences},
                     {"automorphisms_ok", r.automorphisms_ok},
                     {"lower_bound", to_decimal_string(r.formula.transitive)},
                     {"graph_lower_bound",
                      r.formula.graph ? json(to_decimal_string(*r.formula.graph)) : json(nullptr)},
                     {"snir_exponent", to_decimal_string(r.snir_exponent)},
                     {"reports", reports_json(reports)},
                     {"notes", r.notes}};
    h << "Var = " << to_short_string(r.variance) << "  Inf = " << to_short_string(r.total_influence)
      << "  Delta = " << to_short_string(r.optimal_cost) << "\n";
    for (const auto& rep : reports) h << format_report(rep) << "\n";
    for (const auto& n : r.notes) h << "note: " << n << "\n";
    if (!r.holds()) code = kExitCheckFailed;
  }
  if (g.json) {
    out << j.dump(2) << "\n";
  } else {
    out << h.str();
  }
  return code;
}

// ---------------------------------------------------------------- defect

struct DefectOptions {
  std::string outputs;
  std::string metric = "discrete";
  std::size_t k = 2;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

template <Scalar T>
int defect_cmd(const OutputSpace& outputs, const DefectOptions& o, const Global& g,
               std::ostream& out) {
  const auto d = defect<T>(outputs, o.k, g.cap);
  json seq = json::array();
  std::string human_seq;
  for (auto z : d.sequence) {
    seq.push_back(outputs.label(z));
    human_seq += (human_seq.empty() ? "" : ", ") + outputs.label(z);
  }
  if (g.json) {
    json j{{"metric", outputs.tag()},
           {"k", o.k},
           {"mode", mode_name(mode_of<T>())},
           {"unbounded", d.unbounded},
           {"value", d.unbounded ? json(nullptr) : json(num(Number(d.value)))},
           {"sequence", seq}};
    out << j.dump(2) << "\n";
  } else {
    out << "Def_" << o.k << "(" << outputs.tag() << ") = "
        << (d.unbounded ? std::string("unbounded") : Number(d.value).to_human()) << "  at ("
        << human_seq << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- trace

struct TraceOptions {
  std::string x;
  std::string y;
  bool aggregate = false;
};

PointIndex parse_point(const std::string& text, const ProductSpace& space) {
  const auto parts = split_commas(text);
  if (parts.size() != space.dimension()) {
    throw UsageError("point '" + text + "' needs " + std::to_string(space.dimension()) + " values");
  }
  std::vector<std::size_t> values;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto a = space.coord(i).index_of(parts[i]);
    if (!a && parts[i].front() == '+') a = space.coord(i).index_of(parts[i].substr(1));
    if (!a) throw UsageError("'" + parts[i] + "' is not a value of coordinate " + std::to_string(i + 1));
    values.push_back(*a);
  }
  return space.encode(values);
}

template <Scalar T>
int trace(const Loaded& l, const DecisionTree& tree, const TraceOptions& o, const Global& g,
          std::ostream& out) {
  const auto& f = l.f;
  const auto& space = f.space();
  json j{{"function", l.name}, {"mode", mode_name(mode_of<T>())}};
  std::ostringstream h;
  if (!o.x.empty() || !o.y.empty()) {
    if (o.x.empty() || o.y.empty()) throw UsageError("--x and --y go together");
    const auto t = hybrid_trace<T>(tree, f, parse_point(o.x, space), parse_point(o.y, space));
    json queries = json::array(), hybrids = json::array();
    for (auto i : t.query_sequence) queries.push_back(i + 1);
    for (auto u : t.hybrids) hybrids.push_back(space.format_point(u));
    j["x"] = space.format_point(t.x);
    j["y"] = space.format_point(t.y);
    j["queries"] = queries;
    j["hybrids"] = hybrids;
    j["step_distances"] = num_list(t.step_distances);
    j["endpoint_bounded"] = t.endpoint_bounded;
    h << "x = " << space.format_point(t.x) << "  y = " << space.format_point(t.y) << "\n";
    h << "queries:";
    for (auto i : t.query_sequence) h << " x" << i + 1;
    h << "\n";
    for (std::size_t s = 0; s < t.hybrids.size(); ++s) {
      h << "u[" << s << "] = " << space.format_point(t.hybrids[s]) << "  f = "
        << f.label_at(t.hybrids[s]);
      if (s > 0) h << "  step " << Number(t.step_distances[s - 1]).to_human();
      h << "\n";
    }
    h << "d(f(x), f(y)) <= sum of steps: " << yes_no(t.endpoint_bounded) << "\n";
  }
  int code = kExitOk;
  if (o.aggregate) {
    const T agg = hybrid_aggregate<T>(tree, f);
    const auto d = delta<T>(tree, space);
    const auto inf = influences<T>(f);
    T weighted = T(0);
    for (std::size_t i = 0; i < d.size(); ++i) weighted += d[i] * inf.values[i];
    auto r = make_report<T>("hybrid-identity", agg, weighted);
    r.holds = r.equality;
    j["aggregate"] = r;
    h << format_report(r) << "\n";
    if (!r.holds) code = kExitCheckFailed;
  }
  if (g.json) {
    out << j.dump(2) << "\n";
  } else {
    out << h.str();
  }
  return code;
}

void add_source(CLI::App* sub, Source& s, bool with_tree) {
  sub->add_option("--function", s.function_path, "Function file");
  sub->add_option("--family", s.family, "Named family, e.g. tribes:2,2 or figure1");
  sub->add_option("--metric", s.metric, "Reinterpret outputs: boolean|discrete|rho1|rho2");
  sub->add_option("--p", s.p, "Bias Pr[x_i = 1] of a cube function");
  if (with_tree) sub->add_option("--tree", s.tree, "Tree file, or 'canonical' for a family");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Influences, decision-tree costs and inequality checks", "dtinf"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--exact", g.exact, "Require exact rational arithmetic");
  app.add_flag("--float", g.floating, "Use double arithmetic");
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Seed for sampled sweeps");
  app.add_option("--cap", g.cap, "Largest point count to enumerate");

  Source src;
  AnalyzeOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Measures, tree metrics and checks");
  add_source(analyze_cmd, src, true);
  analyze_cmd->add_flag("--optimal", analyze_opts.optimal, "Also compute Delta(f) and D(f)");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Check an inequality over many functions");
  sweep_cmd->add_option("--n", sweep_opts.n, "Number of variables")->required();
  sweep_cmd->add_option("--p", sweep_opts.p, "Bias");
  sweep_cmd->add_option("--inequality", sweep_opts.inequality,
                        "main|efron-stein|improvement|os|two-function|entropy|optimal");
  sweep_cmd->add_option("--sample", sweep_opts.sample, "Random functions instead of all");

  auto* optimal_cmd = app.add_subcommand("optimal", "Delta(f) and D(f) with witness trees");
  add_source(optimal_cmd, src, false);

  CriticalOptions critical_opts;
  auto* critical_cmd = app.add_subcommand("critical", "Critical probability of a monotone function");
  add_source(critical_cmd, src, false);
  critical_cmd->add_option("--tol", critical_opts.tol, "Residual tolerance");
  critical_cmd->add_flag("--pipeline", critical_opts.pipeline, "Run the lower-bound chain at p*");
  critical_cmd->add_flag("--assume-transitive", critical_opts.assume_transitive,
                         "Treat the function as transitive");

  DefectOptions defect_opts;
  auto* defect_cmd_app = app.add_subcommand("defect", "k-defect of a distance");
  defect_cmd_app->add_option("--outputs", defect_opts.outputs, "Comma-separated labels")->required();
  defect_cmd_app->add_option("--metric", defect_opts.metric, "discrete|boolean|rho1|rho2");
  defect_cmd_app->add_option("--k", defect_opts.k, "Sequence length");

  TraceOptions trace_opts;
  auto* trace_cmd = app.add_subcommand("trace", "Hybrid inputs between x and y");
  add_source(trace_cmd, src, true);
  trace_cmd->add_option("--x", trace_opts.x, "Comma-separated values");
  trace_cmd->add_option("--y", trace_opts.y, "Comma-separated values");
  trace_cmd->add_flag("--aggregate", trace_opts.aggregate, "Average over all pairs");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) {
      auto l = load(src, g);
      auto tree = resolve_tree(src.tree, l);
      return choose_exact(g, l.f.exact()) ? analyze<Rational>(l, tree, analyze_opts, g, out)
                                          : analyze<double>(l, tree, analyze_opts, g, out);
    }
    if (*sweep_cmd) return sweep(sweep_opts, g, out);
    if (*optimal_cmd) {
      auto l = load(src, g);
      return choose_exact(g, l.f.exact()) ? optimal<Rational>(l, g, out) : optimal<double>(l, g, out);
    }
    if (*critical_cmd) return critical(load(src, g), critical_opts, g, out);
    if (*defect_cmd_app) {
      const auto outputs = OutputSpace::builtin(defect_opts.metric, split_commas(defect_opts.outputs));
      return choose_exact(g, outputs.exact()) ? defect_cmd<Rational>(outputs, defect_opts, g, out)
                                              : defect_cmd<double>(outputs, defect_opts, g, out);
    }
    if (*trace_cmd) {
      auto l = load(src, g);
      auto tree = resolve_tree(src.tree, l);
      if (!tree) throw UsageError("trace needs --tree");
      return choose_exact(g, l.f.exact()) ? trace<Rational>(l, *tree, trace_opts, g, out)
                                          : trace<double>(l, *tree, trace_opts, g, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dtinf::cli
