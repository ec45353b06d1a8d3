#include <doctest.h>

#include <map>

#include "causalteam/generate.hpp"
#include "causalteam/intervene.hpp"
#include "support.hpp"

using namespace ct;
using test::load;

namespace {

std::size_t count_terms(const CausalTeam& t) {
  std::size_t n = 0;
  for (const auto& r : t.rows())
    for (const auto& v : r.row) n += v.is_proper() ? 0 : 1;
  return n;
}

// Solves the structural equations of a parametric team for one row with the
// bindings held fixed; the oracle for do_intervention.
Row solve(const CausalTeam& t, Row row, const std::vector<Binding>& spec) {
  std::map<std::size_t, Atom> fixed;
  for (const auto& b : spec) fixed[t.index_of(b.var)] = b.value;
  for (std::size_t v : t.graph().topological_order()) {
    if (fixed.count(v)) {
      row[v] = Value(fixed[v]);
      continue;
    }
    if (!t.graph().is_endogenous(v)) continue;
    std::vector<Value> args;
    for (std::size_t p : t.graph().parents(v)) args.push_back(row[p]);
    const Value* out = t.sig().functions[v]->lookup(args);
    REQUIRE(out != nullptr);
    row[v] = *out;
  }
  return row;
}

}  // namespace

TEST_CASE("do(Y=2) on the chain example") {
  CausalTeam t = load("ex1.json");
  CausalTeam d = do_intervention(t, {{"Y", 2}});
  CHECK(to_table(d) == test::slurp(test::data_path("golden/ex1_do_Y2.txt")));
  CHECK(to_json(d) == test::slurp(test::data_path("golden/ex1_do_Y2.json")));
  CHECK(!d.graph().has_edge("X", "Y"));
  CHECK(d.graph().has_edge("Y", "Z"));
  CHECK(d.sig().functions[d.index_of("Y")] == nullptr);
}

TEST_CASE("do(Y=2) merges rows that become identical in set mode") {
  CausalTeam d = do_intervention(load("ex2.json"), {{"Y", 2}});
  CHECK(to_table(d) == test::slurp(test::data_path("golden/ex2_do_Y2.txt")));
  CHECK(d.rows().distinct() == 2);
}

TEST_CASE("nonparametric interventions leave exactly one formal term") {
  CausalTeam d = do_intervention(load("ex3.json"), {{"X", 1}});
  CHECK(count_terms(d) == 1);
  CHECK(to_table(d) == "U X Y Z\n2 1 2 4\n3 1 2 4\n1 1 2 f_Z(1,1,2)\n");
  for (const auto& r : d.rows()) {
    const Value& z = r.row[d.index_of("Z")];
    if (z.is_proper()) continue;
    CHECK(z.as_term().symbol == "f_Z");
    CHECK(z.as_term().args == std::vector<Value>{1, 1, 2});
  }

  CausalTeam d4 = do_intervention(load("ex4.json"), {{"X", 1}});
  CHECK(count_terms(d4) == 0);
  CHECK(to_table(d4) == "U X Y Z\n2 1 2 4\n3 1 2 4\n1 1 2 3\n");
}

TEST_CASE("terms nest under iterated interventions") {
  CausalTeam once = do_intervention(load("ex3.json"), {{"U", 4}});
  CausalTeam twice = do_intervention(once, {{"X", 2}});
  bool nested = false;
  for (const auto& r : twice.rows()) {
    const Value& z = r.row[twice.index_of("Z")];
    if (!z.is_proper())
      for (const auto& a : z.as_term().args) nested = nested || !a.is_proper();
  }
  CHECK(nested);
  CHECK(count_terms(twice) > 0);
}

TEST_CASE("errors and the empty team") {
  CausalTeam t = load("ex1.json");
  CHECK(test::error_kind([&] { do_intervention(t, {{"Y", 2}, {"Y", 3}}); }) == ErrorKind::InconsistentSpec);
  CHECK(test::error_kind([&] { do_intervention(t, {{"Q", 2}}); }) == ErrorKind::UnknownVariable);
  CHECK(test::error_kind([&] { do_intervention(t, {{"Y", 9}}); }) == ErrorKind::RangeViolation);
  CHECK(do_intervention(t, {{"Y", 2}, {"Y", 2}}) == do_intervention(t, {{"Y", 2}}));
  CausalTeam empty = t.with_rows(Rows{});
  CHECK(do_intervention(empty, {{"Y", 2}}).empty());
}

TEST_CASE("parametric interventions agree with solving the equations row by row") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    g.multiteam = trial % 2 == 1;
    CausalTeam t = random_team(g, rng);
    auto spec = random_bindings(t, rng, 3);
    CausalTeam d = do_intervention(t, spec);
    CHECK(count_terms(d) == 0);
    Rows want;
    for (const auto& r : t.rows()) want.add(solve(t, r.row, spec), r.count);
    CHECK(d.with_rows(want) == d);
    CHECK_NOTHROW(d.validate());
  }
}

TEST_CASE("interventions act on each row separately") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig g;
    g.parametric = trial % 2 == 0;
    g.multiteam = trial % 3 == 0;
    CausalTeam t = random_team(g, rng);
    auto spec = random_bindings(t, rng, 2);
    CausalTeam whole = do_intervention(t, spec);
    CausalTeam closed = explicit_closure(t);
    Rows pieces;
    for (const auto& r : closed.rows()) {
      CausalTeam one = do_intervention(singleton(closed, r.row, r.count), spec);
      for (const auto& q : one.rows()) pieces.add(q.row, q.count);
    }
    CHECK(whole.with_rows(pieces) == whole);
  }
}
