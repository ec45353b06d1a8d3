#include <doctest.h>

#include <array>

#include "causalteam/generate.hpp"
#include "causalteam/intervene.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace ct;
using test::load;
using test::sat;

namespace {

// Marginal independence read off the clause: every X value meets every Y value.
bool indep_oracle(const CausalTeam& t, const std::string& x, const std::string& y) {
  std::size_t xi = t.index_of(x), yi = t.index_of(y);
  for (const auto& a : t.rows())
    for (const auto& b : t.rows()) {
      bool met = false;
      for (const auto& c : t.rows()) met = met || (c.row[xi] == a.row[xi] && c.row[yi] == b.row[yi]);
      if (!met) return false;
    }
  return true;
}

// Every subset of the distinct rows, as teams.
std::vector<CausalTeam> all_subteams(const CausalTeam& t) {
  std::vector<CausalTeam> out;
  const auto& es = t.rows().entries();
  for (std::size_t mask = 0; mask < (std::size_t{1} << es.size()); ++mask) {
    Rows r;
    for (std::size_t i = 0; i < es.size(); ++i)
      if ((mask >> i) & 1) r.add(es[i].row, es[i].count);
    out.push_back(t.with_rows(std::move(r)));
  }
  return out;
}

CausalTeam sum_team(const std::vector<std::array<int, 3>>& rows) {
  // Columns X, Z, Y with Y = X + Z.
  TeamSpec s;
  s.variables = {{"X", {1, 2}}, {"Y", {2, 3, 4, 5}}, {"Z", {1, 2, 3}}};
  s.edges = {{"X", "Y"}, {"Z", "Y"}};
  for (int x : {1, 2})
    for (int z : {1, 2, 3}) s.functions["Y"].push_back({{x, z}, x + z});
  for (const auto& r : rows) s.rows.push_back({{{"X", r[0]}, {"Z", r[1]}, {"Y", r[2]}}, 1});
  return build_team(s);
}

}  // namespace

TEST_CASE("selection by a classical antecedent") {
  CausalTeam t = load("selective.json");
  CHECK(sat(t, "Z=3 => Y=2"));
  CHECK(!sat(t, "Y=2 => Z=3"));
  CHECK(sat(t, "Z=4 => Y=7"));
}

TEST_CASE("a counterfactual disjunction splits into two subteams") {
  CausalTeam t = load("ex2.json");
  Verdict v = satisfies(t, *parse_formula("do Y=2 []-> (Z=2 | Z=3)"));
  CHECK(v.satisfied);
  CHECK(!sat(t, "do Y=2 []-> Z=2"));
  CHECK(!sat(t, "do Y=2 []-> (Z=2 ++ Z=3)"));
  CHECK(sat(t, "do Y=2 []-> Y=2"));
}

TEST_CASE("conditional excluded middle fails on a two-row team") {
  TeamSpec s;
  s.variables = {{"X", {1, 2}}, {"Y", {1, 2}}};
  s.rows = {{{{"X", 1}, {"Y", 1}}, 1}, {{{"X", 1}, {"Y", 2}}, 1}};
  CausalTeam t = build_team(s);
  CHECK(!sat(t, "do X=1 []-> Y=1"));
  CHECK(!sat(t, "do X=1 []-> Y!=1"));
  CHECK(sat(t, "do X=1 []-> (Y=1 | Y!=1)"));
}

TEST_CASE("marginal independence on the four-row team") {
  CausalTeam u = load("team_u.json");
  CHECK(sat(u, "X!=1 | indep(X,Y)"));
  CHECK(sat(u, "indep(X,Y)"));
  // U restricted to X=1 is {11, 12}; X is constant there, so the clause holds.
  CausalTeam sel = select_subteam(u, *parse_formula("X=1"));
  CHECK(sel.rows().distinct() == 2);
  CHECK(indep_oracle(sel, "X", "Y"));
  CHECK(sat(u, "X=1 => indep(X,Y)") == indep_oracle(sel, "X", "Y"));
  CHECK(!sat(load("ex2.json"), "indep(X,Y)"));
}

TEST_CASE("the empty team") {
  CausalTeam e = load("ex1.json").with_rows(Rows{});
  for (const char* f : {"X=1 & X=2", "dep(;Y)", "X=1 => dep(X;Y)", "do Y=2 []-> Z=9 | Z=8", "!(X=1)"})
    CHECK_MESSAGE(sat(e, f), f);
  CHECK(!sat(e, "Pr(X=1) >= 0"));
  CHECK(!sat(e, "Pr(X=1) <= 1"));
  CHECK(!sat(e, "ndep(X;Y)"));
}

TEST_CASE("reading a formal term is an error under the standard relation") {
  CausalTeam t = load("ex3.json");
  CHECK(test::error_kind([&] { sat(t, "do X=1 []-> Z=4"); }) == ErrorKind::FormalTermEncountered);
  CHECK(test::error_kind([&] { sat(t, "do X=1 []-> Z=3"); }) == ErrorKind::FormalTermEncountered);
  CHECK(test::error_kind([&] { sat(t, "do X=1 []-> Z!=4"); }) == ErrorKind::FormalTermEncountered);
  CHECK(test::error_kind([&] { sat(t, "do X=1 []-> dep(U;Z)"); }) == ErrorKind::FormalTermEncountered);
  CHECK(sat(t, "do X=1 []-> Y=2"));
  CHECK(sat(load("ex4.json"), "do X=1 []-> (Z=4 | Z=3)"));
}

TEST_CASE("inconsistent antecedents make counterfactuals true") {
  CausalTeam t = load("ex1.json");
  CHECK(sat(t, "do Y=1, Y=2 []-> X=9"));
  CHECK(!satisfies_falsifiable(t, *parse_formula("do Y=1, Y=2 []-> X=9")));
}

TEST_CASE("dependence and its contradictory negation") {
  CausalTeam t = load("ex1.json");
  CHECK(sat(t, "dep(Y;Z)"));
  CHECK(!sat(t, "dep(Z;Y)"));
  CHECK(sat(t, "ndep(Z;Y)"));
  CHECK(sat(t, "dep(X;Y)"));
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    g.parametric = trial % 2 == 0;
    CausalTeam t2 = random_subteam(random_team(g, rng), rng);
    if (t2.empty()) continue;
    const auto& d = t2.domain();
    std::vector<std::string> xs;
    for (const auto& v : d)
      if (std::bernoulli_distribution(0.4)(rng)) xs.push_back(v);
    std::string y = d[rng() % d.size()];
    bool a = holds(t2, dep(xs, y)), b = holds(t2, ndep(xs, y));
    CHECK(a != b);
  }
}

TEST_CASE("falsifiability on teams with formal terms") {
  SUBCASE("a proper entry falsifies an equation") {
    TeamSpec s;
    s.variables = {{"W", {1, 2}}, {"X", {1, 2, 3}}};
    s.edges = {{"W", "X"}};
    s.rows = {{{{"W", 1}, {"X", 2}}, 1}, {{{"W", 2}, {"X", Value::term("f_X", {2})}}, 1}};
    CausalTeam t = build_team(s);
    CHECK(satisfies_falsifiable(t, *parse_formula("X=1")));
    CHECK(!satisfies_falsifiable(t, *parse_formula("X=2")));
    CHECK(satisfies_falsifiable(t, *parse_formula("X!=2")));
    CHECK(test::error_kind([&] { sat(t, "X=2"); }) == ErrorKind::FormalTermEncountered);
  }
  SUBCASE("a row of unknown status does not falsify a selective implication") {
    TeamSpec s;
    s.variables = {{"X", {1, 2}}, {"Y", {1, 2}}};
    s.edges = {{"X", "Y"}};
    s.rows = {{{{"X", 2}, {"Y", 1}}, 1}, {{{"X", 1}, {"Y", Value::term("f_Y", {1})}}, 1}};
    CausalTeam t = build_team(s);
    CHECK(!satisfies_falsifiable(t, *parse_formula("Y=1 => X=2")));
    CHECK(satisfies_falsifiable(t, *parse_formula("Y=1 => X=1")));
    CHECK(satisfies_falsifiable(t, *parse_formula("X=2")));
  }
  SUBCASE("dependence") {
    TeamSpec s;
    s.variables = {{"X", {1, 2}}, {"Y", {1, 2}}};
    s.rows = {{{{"X", 1}, {"Y", 1}}, 1}, {{{"X", 1}, {"Y", 2}}, 1}};
    CausalTeam t = build_team(s);
    CHECK(satisfies_falsifiable(t, *parse_formula("dep(X;Y)")));
    CHECK(!satisfies_falsifiable(t, *parse_formula("dep(Y;X)")));
    // Conjunction: either conjunct; disjunction: every split.
    CHECK(satisfies_falsifiable(t, *parse_formula("X=1 & Y=3")));
    CHECK(!satisfies_falsifiable(t, *parse_formula("Y=1 | Y=2")));
    CHECK(satisfies_falsifiable(t, *parse_formula("Y=1 | Y=1")));
    CHECK(test::error_kind([&] { satisfies_falsifiable(t, *parse_formula("X=1 ++ X=2")); }) ==
          ErrorKind::UnsupportedConnective);
    CHECK(test::error_kind([&] { satisfies_falsifiable(t, *parse_formula("ndep(X;Y)")); }) ==
          ErrorKind::UnsupportedConnective);
  }
  SUBCASE("counterfactuals act on the intervened team") {
    CausalTeam t = load("ex3.json");
    CHECK(satisfies_falsifiable(t, *parse_formula("do X=1 []-> Z=3")));
    CHECK(!satisfies_falsifiable(t, *parse_formula("do X=1 []-> Z=4")));
  }
}

TEST_CASE("falsifiability agrees with failure on proper parametric teams") {
  Rng rng(37);
  for (int trial = 0; trial < 150; ++trial) {
    GeneratorConfig g;
    g.max_vars = 4;
    g.max_rows = 6;
    CausalTeam t = random_team(g, rng);
    FormulaConfig fc;
    fc.shape = FormulaShape::C;
    fc.inconsistent_antecedent = 0;
    FormulaPtr f = random_formula(t, fc, rng);
    CHECK_MESSAGE(satisfies_falsifiable(t, *f) == !holds(t, f), to_string(*f));
  }
}

TEST_CASE("admissibility") {
  auto column = [](Value second) {
    TeamSpec s;
    s.variables = {{"W", {1, 2}}, {"X", {3, 4}}};
    s.edges = {{"W", "X"}};
    s.rows = {{{{"W", 1}, {"X", 3}}, 1}, {{{"W", 2}, {"X", second}}, 1}};
    return build_team(s);
  };
  CHECK(satisfies_admissible(column(Value::term("f_X", {2})), *parse_formula("X=3")));
  CHECK(!satisfies_admissible(column(4), *parse_formula("X=3")));
  CHECK(satisfies_admissible(column(4), *parse_formula("X=3 | X=4")));
  CHECK(satisfies_admissible(column(4), *parse_formula("X!=1")));

  TeamSpec s;
  s.variables = {{"W", {1, 2}}, {"X", {1, 2}}, {"Y", {1, 2}}};
  s.edges = {{"W", "X"}, {"W", "Y"}};
  Value shared = Value::term("f", {3, Value::term("g", {2})});
  s.rows = {{{{"W", 1}, {"X", shared}, {"Y", shared}}, 1}};
  CausalTeam t = build_team(s);
  CHECK(!satisfies_admissible(t, *parse_formula("X=1 & Y=2")));
  CHECK(!satisfies_admissible(t, *parse_formula("X=1 & Y!=1")));
  CHECK(satisfies_admissible(t, *parse_formula("X=1 & Y=1")));
  CHECK(satisfies_admissible(t, *parse_formula("X=1 & Y!=2")));
  CHECK(satisfies_admissible(t, *parse_formula("dep(W;X)")));
  CHECK(test::error_kind([&] { satisfies_admissible(t, *parse_formula("X=1 & X=2")); }) ==
        ErrorKind::NotSupportedShape);
  CHECK(test::error_kind([&] { satisfies_admissible(t, *parse_formula("X=1 => Y=1")); }) ==
        ErrorKind::NotSupportedShape);
}

TEST_CASE("selective implication does not commute with intervention") {
  CausalTeam t = sum_team({{1, 1, 2}, {1, 2, 3}, {2, 3, 5}});
  CHECK(sat(t, "X=1 => (do X=1 []-> (Y=2 | Y=3))"));
  CHECK(!sat(t, "do X=1 []-> (X=1 => (Y=2 | Y=3))"));
  CausalTeam s = sum_team({{1, 1, 2}, {1, 2, 3}, {2, 1, 3}});
  CHECK(sat(s, "do Z=1 []-> (Y=3 => Y=3)"));
  CHECK(!sat(s, "Y=3 => (do Z=1 []-> Y=3)"));
}

TEST_CASE("CO_neg formulas agree with a row-by-row oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    GeneratorConfig g;
    g.max_vars = 4;
    g.multiteam = trial % 3 == 0;
    CausalTeam t = random_team(g, rng);
    FormulaConfig fc;
    fc.shape = trial % 2 ? FormulaShape::CO_neg : FormulaShape::CO;
    FormulaPtr f = random_formula(t, fc, rng);
    bool all = true;
    for (const auto& r : t.rows()) {
      bool one = test::oracle(t, test::State{r.row, {}}, *f);
      CHECK_MESSAGE(holds(singleton(t, r.row, r.count), f) == one, to_string(*f));
      all = all && one;
    }
    // Flatness: the team satisfies the formula iff each row does.
    CHECK_MESSAGE(holds(t, f) == all, to_string(*f));
  }
}

TEST_CASE("CD formulas are downward closed and split strategies agree") {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    g.max_vars = 4;
    g.max_rows = 7;
    g.parametric = trial % 2 == 0;
    g.multiteam = trial % 4 == 0;
    CausalTeam t = explicit_closure(random_team(g, rng));
    FormulaConfig fc;
    fc.shape = FormulaShape::CD;
    FormulaPtr f = random_formula(t, fc, rng);
    try {
      bool whole = holds(t, f);
      EvalOptions covers, parts;
      covers.split = SplitStrategy::Covers;
      parts.split = SplitStrategy::Partitions;
      if (t.rows().total() <= 7) CHECK_MESSAGE(holds(t, f, covers) == whole, to_string(*f));
      CHECK_MESSAGE(holds(t, f, parts) == whole, to_string(*f));
      if (!whole) continue;
      for (int k = 0; k < 3; ++k) CHECK_MESSAGE(holds(random_subteam(t, rng), f), to_string(*f));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FormalTermEncountered);
    }
  }
}

TEST_CASE("weak excluded middle for dual negation") {
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    g.max_vars = 4;
    CausalTeam t = random_team(g, rng);
    FormulaConfig fc;
    fc.shape = FormulaShape::CO_neg;
    FormulaPtr f = random_formula(t, fc, rng);
    CHECK(holds(t, tensor_or(f, dual_neg(f))));
    CHECK(holds(t, dual_neg(conj(f, dual_neg(f)))));
  }
}

TEST_CASE("deduction over every team of a small signature") {
  TeamSpec s;
  s.variables = {{"X", {0, 1}}, {"Y", {0, 1, 2}}, {"Z", {0, 1}}};
  s.edges = {{"X", "Y"}, {"Z", "Y"}};
  for (int x : {0, 1})
    for (int z : {0, 1}) {
      s.functions["Y"].push_back({{x, z}, x + z});
      s.rows.push_back({{{"X", x}, {"Y", x + z}, {"Z", z}}, 1});
    }
  CausalTeam full = build_team(s);
  auto teams = all_subteams(full);
  REQUIRE(teams.size() == 16);
  Rng rng(53);
  int entailments = 0;
  for (int trial = 0; trial < 150; ++trial) {
    FormulaConfig cl, cd;
    cl.shape = FormulaShape::Classical;
    cl.max_depth = 2;
    cd.shape = FormulaShape::CD;
    cd.max_depth = 3;
    FormulaPtr theta = random_formula(full, cl, rng), chi = random_formula(full, cd, rng);
    bool entails = true, valid = true;
    for (const auto& t : teams) {
      entails = entails && (!holds(t, theta) || holds(t, chi));
      valid = valid && holds(t, selective(theta, chi));
    }
    CHECK_MESSAGE(entails == valid, to_string(*theta) << " ; " << to_string(*chi));
    entailments += entails;
  }
  CHECK(entailments > 0);
}

TEST_CASE("dependence atoms and counterfactuals") {
  // Fixing every parent of Y makes Y constant.
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    CausalTeam t = random_team(g, rng);
    for (std::size_t y = 0; y < t.domain().size(); ++y) {
      if (!t.graph().is_endogenous(y)) continue;
      std::vector<Binding> spec;
      std::vector<std::string> pa = t.graph().parent_names(t.domain()[y]);
      for (const auto& p : pa) spec.push_back({p, t.sig().ranges[t.index_of(p)].front()});
      CHECK(holds(t, counterfactual(spec, dep({}, t.domain()[y]))));
      CHECK(holds(t, dep(pa, t.domain()[y])));
    }
  }
}

TEST_CASE("split caps") {
  TeamSpec s;
  s.mode = Mode::Multi;
  s.variables = {{"X", {0, 1, 2, 3, 4, 5, 6, 7}}, {"Y", {0, 1, 2, 3}}};
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 4; ++y) s.rows.push_back({{{"X", x}, {"Y", y}}, 1});
  CausalTeam t = build_team(s);
  // Flat disjuncts never need a search.
  CHECK(sat(t, "X=0 | X!=0"));
  // 32 distinct rows exceed the partition cap for a dependence disjunct.
  CHECK(test::error_kind([&] { sat(t, "dep(X;Y) | dep(X;Y)"); }) == ErrorKind::TeamTooLargeForSplit);
  // Probability atoms are not downward closed; multiplicity 32 exceeds the cover cap.
  CHECK(test::error_kind([&] { sat(t, "Pr(X=0) >= 1 | Pr(X=1) >= 1"); }) == ErrorKind::TeamTooLargeForSplit);
}
