// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when any line fails.

#include <array>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "causalteam/causality.hpp"
#include "causalteam/generate.hpp"
#include "causalteam/intervene.hpp"
#include "causalteam/laws.hpp"
#include "causalteam/prob.hpp"
#include "causalteam/semantics.hpp"

using namespace ct;

namespace {

// Pinned limits. Every verdict and probability is compared exactly.
constexpr double kPearlSeconds = 1.0;
constexpr double kHarnessSeconds = 60.0;
constexpr int kUniversalTrials = 200;
constexpr int kProbSpaceTeams = 200;
constexpr int kConservTeams = 100;
constexpr int kMarkovTeams = 100;
constexpr int kCauseTeams = 100;
constexpr int kDepDefTeams = 100;

std::string path(const std::string& name) { return std::string(CT_DATA_DIR) + "/" + name; }
CausalTeam load(const std::string& name) { return load_team_file(path(name)); }

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool sat(const CausalTeam& t, const std::string& f) { return satisfies(t, *parse_formula(f)).satisfied; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Collects the reasons a criterion failed.
struct Criterion {
  std::string name;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

using Body = std::function<void(Criterion&)>;

bool report(const std::string& name, const Body& body) {
  Criterion c{name, {}};
  try {
    body(c);
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("threw ") + e.what());
  }
  std::cout << (c.problems.empty() ? "PASS " : "FAIL ") << name;
  for (std::size_t i = 0; i < c.problems.size(); ++i) std::cout << (i ? "; " : ": ") << c.problems[i];
  std::cout << '\n';
  return c.problems.empty();
}

CausalTeam team(Mode mode, const std::vector<std::pair<std::string, std::vector<Atom>>>& vars,
                const std::vector<std::pair<std::string, std::string>>& edges,
                const std::map<std::string, std::vector<std::pair<std::vector<Value>, Value>>>& fns,
                const std::vector<std::map<std::string, Value>>& rows) {
  TeamSpec s;
  s.mode = mode;
  s.variables = vars;
  s.edges = edges;
  s.functions = fns;
  for (const auto& r : rows) s.rows.push_back({r, 1});
  return build_team(s);
}

void pearl(Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  CausalTeam t = load("pearl.json");
  for (int x : {0, 1})
    for (int y : {0, 1}) {
      std::string f = "X=" + std::to_string(x) + " & Y=" + std::to_string(y);
      Rational p = probability_of(t, *parse_formula(f)).value();
      c.expect(p == Rational(1, 4), "Pr(" + f + ")=" + to_string(p));
    }
  c.expect(sat(t, "(X=1 & Y=1) => (do X=0 []-> Y=0)"), "clinical query UNSAT");
  c.expect(sat(t, "(X=1 & Y=1) => (do X=0 []-> Pr(Y=0) >= 1)"), "probabilistic clinical query UNSAT");
  double s = seconds_since(start);
  c.expect(s < kPearlSeconds, "took " + std::to_string(s) + " s");
}

void interventions(Criterion& c) {
  c.expect(to_table(do_intervention(load("ex1.json"), {{"Y", 2}})) == slurp(path("golden/ex1_do_Y2.txt")),
           "Example 1 table differs");
  CausalTeam e2 = do_intervention(load("ex2.json"), {{"Y", 2}});
  c.expect(to_table(e2) == slurp(path("golden/ex2_do_Y2.txt")), "Example 2 table differs");
  CausalTeam e3 = do_intervention(load("ex3.json"), {{"X", 1}});
  int terms = 0;
  bool right_term = false;
  for (const auto& r : e3.rows())
    for (const auto& v : r.row)
      if (!v.is_proper()) {
        ++terms;
        right_term = v.to_string() == "f_Z(1,1,2)";
      }
  c.expect(terms == 1 && right_term, "Example 3 should leave exactly f_Z(1,1,2)");
  CausalTeam e4 = do_intervention(load("ex4.json"), {{"X", 1}});
  c.expect(!e4.has_terms() && to_table(e4) == "U X Y Z\n2 1 2 4\n3 1 2 4\n1 1 2 3\n", "Example 4 differs");
}

void counterexamples(Criterion& c) {
  auto check = [&](const std::string& label, const CausalTeam& t, const std::string& f, bool want) {
    bool got = sat(t, f);
    c.expect(got == want, label + ": " + f + " is " + (got ? "SAT" : "UNSAT"));
  };
  CausalTeam sem = team(Mode::Set, {{"X", {1, 2}}}, {}, {}, {{{"X", 1}}, {{"X", 2}}});
  check("SEM", sem, "X=1", false);
  check("SEM", sem, "X!=1", false);

  CausalTeam cem = team(Mode::Set, {{"X", {1, 2}}, {"Y", {1, 2}}}, {}, {}, {{{"X", 1}, {"Y", 1}}, {{"X", 1}, {"Y", 2}}});
  check("CEM'", cem, "do X=1 []-> Y=1", false);
  check("CEM'", cem, "do X=1 []-> Y!=1", false);
  std::map<std::string, std::vector<std::pair<std::vector<Value>, Value>>> sum;
  for (int x : {1, 2})
    for (int z : {1, 2, 3}) sum["Y"].push_back({{x, z}, x + z});
  auto sum_team = [&](std::vector<std::array<int, 3>> rows) {
    std::vector<std::map<std::string, Value>> rs;
    for (const auto& r : rows) rs.push_back({{"X", r[0]}, {"Z", r[1]}, {"Y", r[2]}});
    return team(Mode::Set, {{"X", {1, 2}}, {"Y", {2, 3, 4, 5}}, {"Z", {1, 2, 3}}}, {{"X", "Y"}, {"Z", "Y"}}, sum, rs);
  };
  CausalTeam cem_s = sum_team({{1, 1, 2}, {2, 2, 4}});
  check("CEM' S", cem_s, "do X=1 []-> Y=2", false);
  check("CEM' S", cem_s, "do X=1 []-> Y!=2", false);

  CausalTeam nt = sum_team({{1, 1, 2}, {1, 2, 3}, {2, 3, 5}});
  check("NONCOMMUTE T", nt, "X=1 => (do X=1 []-> (Y=2 | Y=3))", true);
  check("NONCOMMUTE T", nt, "do X=1 []-> (X=1 => (Y=2 | Y=3))", false);
  CausalTeam ns = sum_team({{1, 1, 2}, {1, 2, 3}, {2, 1, 3}});
  check("NONCOMMUTE S", ns, "do Z=1 []-> (Y=3 => Y=3)", true);
  check("NONCOMMUTE S", ns, "Y=3 => (do Z=1 []-> Y=3)", false);

  std::map<std::string, std::vector<std::pair<std::vector<Value>, Value>>> boolean;
  boolean["Y"] = {{{0}, 0}, {{1}, 1}};
  for (int x : {0, 1})
    for (int y : {0, 1}) boolean["Z"].push_back({{x, y}, x * y});
  CausalTeam b = team(Mode::Set, {{"X", {0, 1}}, {"Y", {0, 1}}, {"Z", {0, 1}}}, {{"X", "Y"}, {"X", "Z"}, {"Y", "Z"}},
                      boolean, {{{"X", 0}, {"Y", 0}, {"Z", 0}}});
  check("boolean", b, "do Y=0 []-> (do X=1 []-> Z!=1)", true);
  check("boolean", b, "Y=0 => (do X=1 []-> Z!=1)", false);

  CausalTeam u = load("team_u.json");
  check("team U", u, "X!=1 | indep(X,Y)", true);
  check("team U", u, "X=1 => indep(X,Y)", false);
}

void harness(Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  LawOptions o;
  o.trials = kUniversalTrials;
  for (const auto& l : law_registry()) {
    LawReport r = check_law(l.id, o);
    if (l.universal)
      c.expect(r.outcome == LawOutcome::Holds && r.nonvacuous > 0, summary_line(r));
    else
      c.expect(r.outcome == LawOutcome::CounterexampleConfirmed, summary_line(r));
  }
  double s = seconds_since(start);
  c.expect(s < kHarnessSeconds, "took " + std::to_string(s) + " s");
}

GeneratorConfig multiteam(std::size_t max_vars, std::size_t max_range = 4) {
  GeneratorConfig g;
  g.multiteam = true;
  g.parametric = true;
  g.max_vars = max_vars;
  g.max_range = max_range;
  return g;
}

void probability_space(Criterion& c) {
  Rng rng(601);
  FormulaConfig fc;
  fc.shape = FormulaShape::CO;
  fc.max_depth = 3;
  for (int i = 0; i < kProbSpaceTeams; ++i) {
    CausalTeam t = random_team(multiteam(4), rng);
    FormulaPtr a = random_formula(t, fc, rng), b = random_formula(t, fc, rng);
    auto pr = [&](const FormulaPtr& f) { return probability_of(t, *f).value(); };
    const std::string& v = t.domain().front();
    Atom a0 = t.sig().ranges[0].front();
    c.expect(pr(tensor_or(eq(v, a0), neq(v, a0))) == Rational(1), "normalization");
    c.expect(pr(a) + pr(complement(a)) == Rational(1), "complement: " + to_string(*a));
    FormulaPtr disjoint = conj(b, complement(a));
    c.expect(pr(tensor_or(a, disjoint)) == pr(a) + pr(disjoint), "additivity: " + to_string(*a));
  }
}

void conservativity(Criterion& c) {
  Rng rng(602);
  for (int i = 0; i < kConservTeams; ++i) {
    CausalTeam t = random_team(multiteam(5), rng);
    for (const auto& [tuple, p] : joint_from_exogenous(t)) {
      Assignment a;
      for (std::size_t v = 0; v < tuple.size(); ++v) a.emplace_back(t.domain()[v], tuple[v]);
      c.expect(p == probability_of(t, *conjunction_of(a)), "joint differs at " + to_string(a));
    }
  }
}

void markov(Criterion& c) {
  CausalTeam t = load("markov_counterexample.json");
  MarkovReport r = check_markov_axiom(t);
  c.expect(!r.holds && r.witness && to_string(*r.witness) == "X=1 | - ; Y=2: 2/3 vs 1", "counterexample witness");
  Rng rng(603);
  int passing = 0;
  for (int tries = 0; passing < kMarkovTeams && tries < 20 * kMarkovTeams; ++tries) {
    GeneratorConfig g = multiteam(4);
    g.independent_exogenous = true;
    CausalTeam m = random_team(g, rng);
    if (!check_markov_axiom(m).holds) continue;
    ++passing;
    c.expect(check_markov_condition(m).holds, "condition fails on an axiom-passing team");
    for (const auto& tuple : range_product(m, m.domain()))
      c.expect(joint_probability(m, tuple).value() == markov_product(m, tuple), "product formula");
  }
  c.expect(passing == kMarkovTeams, "only " + std::to_string(passing) + " axiom-passing teams");
}

void causes(Criterion& c) {
  auto dc = direct_cause(load("direct.json"), "X", "Y");
  c.expect(dc && to_string(*dc) == "DC X->Y fix{Z=1} x:1=>y:2 x':2=>y':3", "direct cause witness");
  c.expect(!direct_cause(load("arrow_without_cause.json"), "X", "Y"), "arrow without cause");
  c.expect(direct_cause(load("pearl.json"), "X", "Y").has_value(), "clinical direct cause");
  c.expect(total_cause(load("chain.json"), "X", "Z").has_value(), "chain total cause");
  c.expect(!direct_cause(load("chain.json"), "X", "Z"), "chain has no direct cause X->Z");
  Rng rng(604);
  for (int i = 0; i < kCauseTeams; ++i) {
    CausalTeam t = random_team(multiteam(4, 3), rng);
    const auto& d = t.domain();
    for (const auto& x : d)
      for (const auto& y : d)
        if (x != y)
          c.expect(direct_cause(t, x, y).has_value() == prob_direct_cause(t, x, y).has_value(), "PDC vs DC");
  }
  auto [before, after] = intervention_shift(load("shift.json"), {{"X", 0}}, *parse_formula("X=0 & Y=2"));
  c.expect(before == Probability(0, 1) && after == Probability(1, 3),
           "shift " + before.to_string() + " -> " + after.to_string());
}

void dependence(Criterion& c) {
  Rng rng(605);
  for (int i = 0; i < kDepDefTeams; ++i) {
    GeneratorConfig g = multiteam(4, 3);
    g.parametric = i % 2 == 0;
    CausalTeam t = random_team(g, rng);
    for (std::size_t x = 0; x < t.domain().size(); ++x)
      for (std::size_t y = 0; y < t.domain().size(); ++y) {
        bool all = true;
        for (const auto& xv : t.sig().ranges[x])
          for (const auto& yv : t.sig().ranges[y]) {
            FormulaPtr ey = eq(t.domain()[y], yv), ex = eq(t.domain()[x], xv);
            all = all && prob_independent(t, *ey, *ey, ex.get());
          }
        bool d = satisfies(t, *dep({t.domain()[x]}, t.domain()[y])).satisfied;
        c.expect(d == all, "dep(" + t.domain()[x] + ";" + t.domain()[y] + ")");
      }
  }
}

}  // namespace

int main() {
  bool ok = true;
  ok = report("pearl-clinical", pearl) && ok;
  ok = report("worked-interventions", interventions) && ok;
  ok = report("counterexample-suite", counterexamples) && ok;
  ok = report("law-harness", harness) && ok;
  ok = report("probability-space", probability_space) && ok;
  ok = report("conservativity", conservativity) && ok;
  ok = report("markov", markov) && ok;
  ok = report("causal-notions", causes) && ok;
  ok = report("dependence-definability", dependence) && ok;
  return ok ? 0 : 1;
}
