#include <doctest.h>

#include "causalteam/generate.hpp"
#include "support.hpp"

using namespace ct;

namespace {

// Formulas on which complement is a syntactic involution: no selective
// implication (its complement is a conjunction) and no inconsistent antecedent.
bool involution_exempt(const Formula& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Counterfactual>)
          return !consistent(n.antecedent) || involution_exempt(*n.consequent);
        else if constexpr (std::is_same_v<N, node::And> || std::is_same_v<N, node::TensorOr> ||
                           std::is_same_v<N, node::IntuitOr>)
          return involution_exempt(*n.left) || involution_exempt(*n.right);
        else if constexpr (std::is_same_v<N, node::Selective>)
          return true;
        else if constexpr (std::is_same_v<N, node::DualNeg>)
          return involution_exempt(*n.body);
        else
          return false;
      },
      f.node());
}

ErrorKind parse_error(const std::string& s) {
  return test::error_kind([&] { parse_formula(s); });
}

}  // namespace

TEST_CASE("the clinical query parses into a selective implication") {
  auto f = parse_formula("(X=1 & Y=1) => (do X=0 []-> Y=0)");
  auto expected = selective(conj(eq("X", 1), eq("Y", 1)), counterfactual({{"X", 0}}, eq("Y", 0)));
  CHECK(*f == *expected);
  CHECK(to_string(*f) == "X=1 & Y=1 => do X=0 []-> Y=0");
}

TEST_CASE("atoms and probability constants") {
  CHECK(*parse_formula("dep(X,Z; Y)") == *dep({"X", "Z"}, "Y"));
  CHECK(*parse_formula("dep(;Y)") == *dep({}, "Y"));
  CHECK(*parse_formula("ndep(X;Y)") == *ndep({"X"}, "Y"));
  CHECK(*parse_formula("indep(X,Y)") == *indep("X", "Y"));
  CHECK_NOTHROW(parse_formula("Pr(Y=0) >= 1"));
  CHECK(parse_error("Pr(Y=0) >= 1.5") == ErrorKind::SyntaxError);
  CHECK(*parse_formula("Pr(Y=0) <= 0.25") == *prob_cmp(eq("Y", 0), node::Rel::Le, Rational(1, 4)));
  CHECK(*parse_formula("Pr(Y=0) <= 1/4") == *prob_cmp(eq("Y", 0), node::Rel::Le, Rational(1, 4)));
  CHECK(*parse_formula("Pr(Y=0) = 1/2") == *prob_eq(eq("Y", 0), Rational(1, 2)));
  CHECK(*parse_formula("Pr(Y=0) >= Pr(X=1)") == *prob_cmp(eq("Y", 0), node::Rel::Ge, eq("X", 1)));
  CHECK(*parse_formula("X=a") == *eq("X", "a"));
  CHECK(*parse_formula("X=\"two words\"") == *eq("X", "two words"));
}

TEST_CASE("precedence and associativity") {
  CHECK(*parse_formula("!X=1 & Y=1") == *conj(dual_neg(eq("X", 1)), eq("Y", 1)));
  CHECK(*parse_formula("A=1 & B=1 | C=1") == *tensor_or(conj(eq("A", 1), eq("B", 1)), eq("C", 1)));
  CHECK(*parse_formula("A=1 | B=1 ++ C=1") == *intuit_or(tensor_or(eq("A", 1), eq("B", 1)), eq("C", 1)));
  CHECK(*parse_formula("A=1 => B=1 => C=1") == *selective(eq("A", 1), selective(eq("B", 1), eq("C", 1))));
  CHECK(*parse_formula("do A=1, B=2 []-> C=1 | C=2") ==
        *counterfactual({{"A", 1}, {"B", 2}}, tensor_or(eq("C", 1), eq("C", 2))));
  CHECK(*parse_formula("do A=1 & B=2 []-> C=1") == *counterfactual({{"A", 1}, {"B", 2}}, eq("C", 1)));
}

TEST_CASE("parse errors") {
  CHECK(parse_error("X=") == ErrorKind::SyntaxError);
  CHECK(parse_error("X=1 &") == ErrorKind::SyntaxError);
  CHECK(parse_error("(X=1") == ErrorKind::SyntaxError);
  CHECK(parse_error("dep(X;Y) => Y=1") == ErrorKind::AntecedentNotClassical);
  CHECK(parse_error("do X!=1 []-> Y=1") == ErrorKind::AntecedentNotConjunctionOfEq);
  CHECK(parse_error("do X=1 | Y=1 []-> Y=1") == ErrorKind::AntecedentNotConjunctionOfEq);
  CHECK(parse_error("Pr(dep(X;Y)) >= 1") == ErrorKind::NotInCO);
  CHECK(parse_error("!dep(X;Y)") == ErrorKind::SyntaxError);
  try {
    parse_formula("X=1 & ?");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("column 7") != std::string::npos);
  }
  CHECK_NOTHROW(parse_formula("do X=1, X=2 []-> Y=1"));
}

TEST_CASE("fragment classification") {
  auto cls = [](const std::string& s) { return classify(*parse_formula(s)); };
  CHECK(cls("X=1") == Fragment::C);
  CHECK(cls("do X=1 []-> Y=1 & Y!=2") == Fragment::C);
  CHECK(cls("X=1 => Y=1") == Fragment::CO);
  CHECK(cls("X=1 => dep(X;Y)") == Fragment::CD);
  CHECK(cls("do X=1 []-> dep(;Y)") == Fragment::CD);
  CHECK(cls("!(do X=1 []-> Y=1)") == Fragment::C_u);
  CHECK(cls("do X=1 []-> !(do Y=1 []-> Z=1)") == Fragment::C_neg);
  CHECK(cls("!(X=1 => Y=1)") == Fragment::CO_neg);
  CHECK(cls("Pr(Y=1) >= 1/2") == Fragment::P);
  CHECK(cls("do X=0 []-> Pr(Y=0) >= 1") == Fragment::PC);
  CHECK(cls("X=0 => Pr(Y=0) >= 1") == Fragment::PO);
  CHECK(cls("do X=0 []-> (X=0 => Pr(Y=0) >= 1)") == Fragment::PCD);
  CHECK(cls("X=1 ++ X=2") == Fragment::P);  // the probabilistic languages carry ++
  CHECK(cls("dep(X;Y) & Pr(Y=0) >= 1") == Fragment::Extended);
  CHECK(cls("dep(X;Y) ++ X=1") == Fragment::Extended);
  CHECK(cls("ndep(X;Y)") == Fragment::Extended);
  CHECK(cls("indep(X,Y)") == Fragment::Extended);
  CHECK(in_fragment(*parse_formula("X=1"), Fragment::CD));
  CHECK(!in_fragment(*parse_formula("X=1 => Y=1"), Fragment::C));
}

TEST_CASE("complement clauses") {
  CHECK(*complement(eq("X", 1)) == *neq("X", 1));
  CHECK(*complement(neq("X", 1)) == *eq("X", 1));
  auto th = eq("X", 1), ch = eq("Y", 2);
  CHECK(*complement(selective(th, ch)) == *conj(th, neq("Y", 2)));
  CHECK(*complement(counterfactual({{"X", 1}}, ch)) == *counterfactual({{"X", 1}}, neq("Y", 2)));
  CHECK(*complement(conj(th, ch)) == *tensor_or(neq("X", 1), neq("Y", 2)));
  CHECK(*complement(tensor_or(th, ch)) == *conj(neq("X", 1), neq("Y", 2)));
  CHECK(test::error_kind([] { complement(dep({"X"}, "Y")); }) == ErrorKind::NotInCO);
  // Inconsistent antecedents: the counterfactual is trivially true, its complement a contradiction.
  CHECK(*complement(counterfactual({{"X", 1}, {"X", 2}}, ch)) == *conj(eq("X", 1), neq("X", 1)));
}

TEST_CASE("printing round-trips and complement is an involution") {
  Rng rng(3);
  GeneratorConfig g;
  g.max_vars = 4;
  for (int trial = 0; trial < 300; ++trial) {
    CausalTeam t = random_team(g, rng);
    FormulaConfig fc;
    fc.shape = std::vector<FormulaShape>{FormulaShape::C, FormulaShape::CO, FormulaShape::CO_neg,
                                         FormulaShape::CD}[trial % 4];
    FormulaPtr f = random_formula(t, fc, rng);
    std::string s = to_string(*f);
    FormulaPtr back = parse_formula(s);
    CHECK_MESSAGE(*back == *f, s);
    CHECK(to_string(*back) == s);
    if (in_fragment(*f, Fragment::CO) && !involution_exempt(*f)) CHECK(*complement(complement(f)) == *f);
  }
  for (const char* s : {"Pr(X=1) >= Pr(Y=2) ++ ndep(X;Y)", "indep(X,Y) & !(X=1 | Y=1)",
                        "do X=1 []-> Pr(Y=1 | Y=2) <= 3/7", "X=\"a b\" => dep(;Y)"}) {
    auto f = parse_formula(s);
    CHECK(*parse_formula(to_string(*f)) == *f);
  }
}

TEST_CASE("complement lemma on singletons") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    GeneratorConfig g;
    g.max_vars = 4;
    g.parametric = trial % 2 == 0;
    g.multiteam = trial % 3 == 0;
    CausalTeam t = explicit_closure(random_team(g, rng));
    FormulaConfig fc;
    fc.shape = FormulaShape::CO;
    fc.inconsistent_antecedent = 0.2;
    FormulaPtr f = random_formula(t, fc, rng);
    FormulaPtr fc_ = complement(f);
    for (const auto& r : t.rows()) {
      CausalTeam one = singleton(t, r.row, r.count);
      try {
        bool a = holds(one, f), b = holds(one, fc_);
        CHECK_MESSAGE(a != b, to_string(*f));
        CHECK(holds(one, complement(fc_)) == a);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FormalTermEncountered);
      }
    }
  }
}

TEST_CASE("formula files") {
  auto fs = parse_formula_file("# comment\nX=1\n\n  Y=2 & X=1  \n# done\n");
  REQUIRE(fs.size() == 2);
  CHECK(*fs[1] == *conj(eq("Y", 2), eq("X", 1)));
  CHECK(parse_bindings("X=1, Y=2") == std::vector<Binding>{{"X", 1}, {"Y", 2}});
  CHECK(parse_bindings("X=1 & Y=b") == std::vector<Binding>{{"X", 1}, {"Y", "b"}});
}
