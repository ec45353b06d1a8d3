#include "causalteam/laws.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "causalteam/causality.hpp"
#include "causalteam/intervene.hpp"
#include "causalteam/prob.hpp"
#include "causalteam/semantics.hpp"

namespace ct {

namespace {

// ---- registry ---------------------------------------------------------------

const std::vector<LawInfo> kLaws = {
    {"DOWNWARD", "CD is downward closed on parametric recursive teams", true},
    {"EMPTY", "the empty team satisfies every CD formula", true},
    {"FLAT", "CO_neg formulas hold on T iff they hold on every singleton", true},
    {"WEM", "psi | !psi is valid for psi in CO_neg", true},
    {"SEM-FAIL", "{X:1},{X:2} satisfies neither X=1 nor X!=1", false},
    {"CEM-HOLDS", "psi []-> (chi | !chi) is valid for chi in CO_neg", true},
    {"CEM'-FAIL", "some team satisfies neither X=1 []-> chi nor X=1 []-> !chi", false},
    {"D", "psi []-> (chi | chi') entails (psi []-> chi) | (psi []-> chi')", true},
    {"IMP/EXP", "disjoint interventions compose: T_{X=x & Y=y} = (T_{X=x})_{Y=y}", true},
    {"PERM", "disjoint interventions commute", true},
    {"FULLIMPEXP", "import/export for interventions agreeing on shared variables", true},
    {"FULLPERM", "permutation for interventions agreeing on shared variables", true},
    {"REP", "(T_{X=x})_{X=x} = T_{X=x}", true},
    {"REWRITE", "a later intervention overwrites an earlier one on shared variables", true},
    {"EFF", "(X=x & W=w) []-> X=x is valid", true},
    {"DEC", "the tensor disjunction over Ran(X) of Y=y []-> X=x is valid on parametric teams", true},
    {"UNI", "from Y=y []-> X=x infer Y=y []-> X!=x'", true},
    {"CE", "composition, elimination direction", true},
    {"CI", "composition, introduction direction", true},
    {"OR-IN-OUT", "X=x []-> (psi | psi') iff (X=x []-> psi) | (X=x []-> psi')", true},
    {"AND-IN-OUT", "X=x []-> (psi & psi') iff (X=x []-> psi) & (X=x []-> psi')", true},
    {"NEG-IN-OUT", "X=x []-> !psi iff !(X=x []-> psi)", true},
    {"INTSPLIT", "covers of T_{X=x} lift to causal subteams of T", true},
    {"CF-IN-OUT", "X=x []-> (Y=y []-> psi) iff (X'=x' & Y=y) []-> psi with X' = X minus Y", true},
    {"SEL-E/I", "theta => chi iff !theta | chi", true},
    {"SEL-IN-OUT", "X=x []-> (psi => chi) iff (X=x []-> psi) => (X=x []-> chi)", true},
    {"MP-OR", "from theta and !theta | chi infer chi", true},
    {"REC", "the contributing-cause relation is acyclic on recursive teams", true},
    {"SELIMP-RULES", "weakening of antecedent and consequent, and currying, for =>", true},
    {"DEPRULES", "rules linking dependence atoms with => and []->", true},
    {"PROBSPACE", "Pr_T is additive, complemented by psi^c and normalized", true},
    {"CONSERV", "the joint pushed forward from the exogenous rows equals Pr_T", true},
    {"DEPDEF", "dep(X;Y) iff every Y=y is self-independent given X=x", true},
    {"MA=>MC", "the Markov axiom scheme implies the Markov condition and the product formula", true},
    {"NONCOMMUTE", "[]-> and => do not commute, in either direction", false},
};

// ---- checks -----------------------------------------------------------------

struct Check {
  bool applicable = true;  // premises held
  bool ok = true;
  std::string detail;
};

Check pass() { return {}; }
Check vacuous() { return {false, true, ""}; }
Check fail(std::string why) { return {true, false, std::move(why)}; }

using CheckFn = std::function<Check(const CausalTeam&)>;

struct Case {
  CausalTeam team;
  CheckFn check;
};

using CaseGen = std::function<Case(Rng&, const GeneratorConfig&)>;

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GeneratorConfig sized(std::size_t max_vars, std::size_t max_range, std::size_t max_rows) {
  GeneratorConfig g;
  g.max_vars = max_vars;
  g.max_range = max_range;
  g.max_rows = max_rows;
  return g;
}

// Split search that never takes the per-row shortcut for flat disjuncts.
EvalOptions strict(const CausalTeam& t) {
  EvalOptions o;
  o.split = t.rows().total() <= 4 ? SplitStrategy::Covers : SplitStrategy::Partitions;
  return o;
}

FormulaPtr gen(const CausalTeam& t, Rng& rng, FormulaShape shape, int depth = 4) {
  FormulaConfig c;
  c.shape = shape;
  c.max_depth = depth;
  return random_formula(t, c, rng);
}

std::string show(const FormulaPtr& f) { return to_string(*f); }

std::string show(const std::vector<Binding>& bs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < bs.size(); ++i) os << (i ? " & " : "") << bs[i].var << '=' << bs[i].value.to_string();
  return os.str();
}

CausalTeam act(const CausalTeam& t, const std::vector<Binding>& bs) {
  if (bs.empty()) return explicit_closure(t);
  return do_intervention(t, bs);
}

std::vector<Binding> concat(std::vector<Binding> a, const std::vector<Binding>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Check same_team(const CausalTeam& a, const CausalTeam& b, const std::string& what) {
  if (a == b) return pass();
  return fail(what + " differ:\n" + to_table(a) + "vs\n" + to_table(b));
}

Check equivalent(const CausalTeam& t, const FormulaPtr& a, const FormulaPtr& b, const EvalOptions& o = {}) {
  bool x = satisfies(t, *a, o).satisfied, y = satisfies(t, *b, o).satisfied;
  if (x == y) return pass();
  return fail(show(a) + (x ? " holds" : " fails") + " but " + show(b) + (y ? " holds" : " fails"));
}

Check entails(const CausalTeam& t, const std::vector<FormulaPtr>& premises, const FormulaPtr& conclusion,
              const EvalOptions& o = {}) {
  for (const auto& p : premises)
    if (!satisfies(t, *p, o).satisfied) return vacuous();
  if (satisfies(t, *conclusion, o).satisfied) return pass();
  std::string ps;
  for (const auto& p : premises) ps += (ps.empty() ? "" : ", ") + show(p);
  return fail(ps + " hold but " + show(conclusion) + " fails");
}

Check both(Check a, const Check& b) {
  if (!a.ok) return a;
  if (!b.ok) return b;
  a.applicable = a.applicable || b.applicable;
  return a;
}

// Two non-empty binding lists over disjoint variables.
std::pair<std::vector<Binding>, std::vector<Binding>> disjoint_pair(const CausalTeam& t, Rng& rng) {
  std::vector<Binding> bs;
  for (int tries = 0; tries < 16 && bs.size() < 2; ++tries) bs = random_bindings(t, rng, 3);
  std::size_t cut = bs.size() < 2 ? bs.size() : pick(rng, 1, bs.size() - 1);
  return {{bs.begin(), bs.begin() + static_cast<long>(cut)}, {bs.begin() + static_cast<long>(cut), bs.end()}};
}

// Two non-empty, possibly overlapping binding lists that agree where they overlap.
std::pair<std::vector<Binding>, std::vector<Binding>> agreeing_pair(const CausalTeam& t, Rng& rng) {
  auto bs = random_bindings(t, rng, 3);
  std::vector<Binding> x, y;
  for (const auto& b : bs) {
    int where = static_cast<int>(pick(rng, 0, 2));
    if (where != 1) x.push_back(b);
    if (where != 0) y.push_back(b);
  }
  if (x.empty()) x.push_back(bs.front());
  if (y.empty()) y.push_back(bs.back());
  return {x, y};
}

// Same variables as bs, fresh values.
std::vector<Binding> revalue(const CausalTeam& t, const std::vector<Binding>& bs, Rng& rng) {
  std::vector<Binding> out;
  for (const auto& b : bs) {
    const auto& r = t.sig().ranges[t.index_of(b.var)];
    out.push_back({b.var, r[pick(rng, 0, r.size() - 1)]});
  }
  return out;
}

// Value of var in the first row of t, if there is one and it is proper.
std::optional<Atom> first_value(const CausalTeam& t, const std::string& var) {
  if (t.empty()) return std::nullopt;
  const Value& v = t.rows().entries().front().row[t.index_of(var)];
  if (!v.is_proper()) return std::nullopt;
  return v.atom();
}

Atom any_value(const CausalTeam& t, const std::string& var, Rng& rng) {
  const auto& r = t.sig().ranges[t.index_of(var)];
  return r[pick(rng, 0, r.size() - 1)];
}

std::string any_var(const CausalTeam& t, Rng& rng) { return t.domain()[pick(rng, 0, t.domain().size() - 1)]; }

// Rows of the closure whose singleton satisfies f.
CausalTeam flat_select(const CausalTeam& t, const Formula& f) {
  CausalTeam c = explicit_closure(t);
  Rows kept;
  for (const auto& e : c.rows())
    if (satisfies(singleton(c, e.row), f).satisfied) kept.add(e.row, e.count);
  return c.with_rows(std::move(kept));
}

// ---- universal laws ---------------------------------------------------------

Case law_downward(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr phi = gen(t, rng, FormulaShape::CD);
  return {t, [phi](const CausalTeam& t) {
            CausalTeam c = explicit_closure(t);
            if (!satisfies(c, *phi).satisfied) return vacuous();
            const auto& es = c.rows().entries();
            for (std::size_t i = 0; i < es.size(); ++i) {
              for (std::size_t drop : {es[i].count, std::size_t{1}}) {
                Rows sub;
                for (std::size_t j = 0; j < es.size(); ++j) {
                  std::size_t n = es[j].count - (i == j ? drop : 0);
                  if (n > 0) sub.add(es[j].row, n);
                }
                CausalTeam s = c.with_rows(std::move(sub));
                if (!satisfies(s, *phi).satisfied)
                  return fail(show(phi) + " holds on T but fails on the subteam\n" + to_table(s));
                if (c.mode() == Mode::Set) break;
              }
            }
            return pass();
          }};
}

Case law_empty(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr phi = gen(t, rng, FormulaShape::CD);
  return {t, [phi](const CausalTeam& t) {
            if (satisfies(t.with_rows({}), *phi).satisfied) return pass();
            return fail("the empty team fails " + show(phi));
          }};
}

Case law_flat(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr phi = gen(t, rng, FormulaShape::CO_neg);
  return {t, [phi](const CausalTeam& t) {
            CausalTeam c = explicit_closure(t);
            bool whole = satisfies(c, *phi, strict(c)).satisfied;
            bool rows = true;
            for (const auto& e : c.rows()) rows = rows && satisfies(singleton(c, e.row), *phi).satisfied;
            if (whole == rows) return pass();
            return fail(show(phi) + (whole ? " holds on T but fails on a singleton" : " fails on T but holds on every singleton"));
          }};
}

Case law_wem(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr phi = gen(t, rng, FormulaShape::CO_neg);
  FormulaPtr f = tensor_or(phi, dual_neg(phi));
  return {t, [f](const CausalTeam& t) {
            if (satisfies(t, *f, strict(t)).satisfied) return pass();
            return fail(show(f) + " fails");
          }};
}

Case law_cem(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr chi = gen(t, rng, FormulaShape::CO_neg, 3);
  FormulaPtr f = counterfactual(random_bindings(t, rng, 2), tensor_or(chi, dual_neg(chi)));
  return {t, [f](const CausalTeam& t) {
            if (satisfies(t, *f, strict(t)).satisfied) return pass();
            return fail(show(f) + " fails");
          }};
}

Case law_d(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto psi = random_bindings(t, rng, 2);
  FormulaPtr a = gen(t, rng, FormulaShape::CD, 3), b = gen(t, rng, FormulaShape::CD, 3);
  FormulaPtr premise = counterfactual(psi, tensor_or(a, b));
  FormulaPtr conclusion = tensor_or(counterfactual(psi, a), counterfactual(psi, b));
  return {t, [=](const CausalTeam& t) { return entails(t, {premise}, conclusion); }};
}

Case law_impexp(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto [x, y] = disjoint_pair(t, rng);
  FormulaPtr chi = gen(t, rng, FormulaShape::CO, 3);
  if (y.empty()) return {t, [](const CausalTeam&) { return vacuous(); }};
  FormulaPtr nested = counterfactual(x, counterfactual(y, chi));
  FormulaPtr joint = counterfactual(concat(x, y), chi);
  return {t, [=](const CausalTeam& t) {
            return both(same_team(act(t, concat(x, y)), act(act(t, x), y),
                                  "T_{" + show(concat(x, y)) + "} and (T_{" + show(x) + "})_{" + show(y) + "}"),
                        equivalent(t, nested, joint));
          }};
}

Case law_perm(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto [x, y] = disjoint_pair(t, rng);
  FormulaPtr chi = gen(t, rng, FormulaShape::CO, 3);
  if (y.empty()) return {t, [](const CausalTeam&) { return vacuous(); }};
  FormulaPtr xy = counterfactual(x, counterfactual(y, chi));
  FormulaPtr yx = counterfactual(y, counterfactual(x, chi));
  return {t, [=](const CausalTeam& t) {
            return both(same_team(act(act(t, x), y), act(act(t, y), x), "the two orders"), equivalent(t, xy, yx));
          }};
}

Case law_fullimpexp(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto [x, y] = agreeing_pair(t, rng);
  return {t, [=](const CausalTeam& t) {
            return same_team(act(t, concat(x, y)), act(act(t, x), y),
                             "T_{" + show(concat(x, y)) + "} and (T_{" + show(x) + "})_{" + show(y) + "}");
          }};
}

Case law_fullperm(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto [x, y] = agreeing_pair(t, rng);
  return {t, [=](const CausalTeam& t) {
            return same_team(act(act(t, x), y), act(act(t, y), x), "(T_{" + show(x) + "})_{" + show(y) + "} and its swap");
          }};
}

Case law_rep(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 3);
  return {t, [=](const CausalTeam& t) {
            CausalTeam once = act(t, x);
            return same_team(act(once, x), once, "(T_{" + show(x) + "})_{" + show(x) + "} and T_{" + show(x) + "}");
          }};
}

Case law_rewrite(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 3);
  auto x2 = revalue(t, x, rng);
  auto y = random_bindings(t, rng, 3);
  std::set<std::string> yvars;
  for (const auto& b : y) yvars.insert(b.var);
  std::vector<Binding> rest;
  for (const auto& b : x)
    if (!yvars.count(b.var)) rest.push_back(b);
  return {t, [=](const CausalTeam& t) {
            return both(same_team(act(act(t, x), x2), act(t, x2), "overwritten intervention on " + show(x2)),
                        same_team(act(act(t, x), y), act(act(t, rest), y),
                                  "(T_{" + show(x) + "})_{" + show(y) + "} and (T_{" + show(rest) + "})_{" + show(y) + "}"));
          }};
}

Case law_eff(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto bs = random_bindings(t, rng, 3);
  FormulaPtr f = counterfactual(bs, eq(bs.front().var, bs.front().value));
  return {t, [f](const CausalTeam& t) { return satisfies(t, *f).satisfied ? pass() : fail(show(f) + " fails"); }};
}

Case law_dec(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto y = random_bindings(t, rng, 2);
  std::string x = any_var(t, rng);
  std::vector<FormulaPtr> ds;
  for (const auto& v : t.sig().ranges[t.index_of(x)]) ds.push_back(counterfactual(y, eq(x, v)));
  FormulaPtr f = tensor_or_all(ds);
  return {t, [f](const CausalTeam& t) { return satisfies(t, *f).satisfied ? pass() : fail(show(f) + " fails"); }};
}

Case law_uni(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto y = random_bindings(t, rng, 2);
  std::string x = any_var(t, rng);
  Atom v = first_value(act(t, y), x).value_or(any_value(t, x, rng));
  std::vector<FormulaPtr> conclusions;
  for (const auto& w : t.sig().ranges[t.index_of(x)])
    if (!(w == v)) conclusions.push_back(counterfactual(y, neq(x, w)));
  FormulaPtr premise = counterfactual(y, eq(x, v));
  return {t, [=](const CausalTeam& t) {
            Check c = vacuous();
            for (const auto& k : conclusions) c = both(c, entails(t, {premise}, k));
            return c;
          }};
}

// Shared set-up for the two composition rules.
struct Composition {
  std::vector<Binding> x;
  Binding w;
  Binding y;
};

Composition composition(const CausalTeam& t, Rng& rng, bool eliminate) {
  Composition c;
  c.x = random_bindings(t, rng, 2);
  std::string wv = any_var(t, rng), yv = any_var(t, rng);
  CausalTeam tx = act(t, c.x);
  c.w = {wv, first_value(tx, wv).value_or(any_value(t, wv, rng))};
  CausalTeam source = eliminate ? act(t, concat(c.x, {c.w})) : tx;
  c.y = {yv, first_value(source, yv).value_or(any_value(t, yv, rng))};
  return c;
}

Case law_ce(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  Composition c = composition(t, rng, true);
  FormulaPtr p1 = counterfactual(c.x, eq(c.w.var, c.w.value));
  FormulaPtr p2 = counterfactual(concat(c.x, {c.w}), eq(c.y.var, c.y.value));
  FormulaPtr k = counterfactual(c.x, eq(c.y.var, c.y.value));
  return {t, [=](const CausalTeam& t) { return entails(t, {p1, p2}, k); }};
}

Case law_ci(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  Composition c = composition(t, rng, false);
  FormulaPtr p1 = counterfactual(c.x, eq(c.w.var, c.w.value));
  FormulaPtr p2 = counterfactual(c.x, eq(c.y.var, c.y.value));
  FormulaPtr k = counterfactual(concat(c.x, {c.w}), eq(c.y.var, c.y.value));
  return {t, [=](const CausalTeam& t) { return entails(t, {p1, p2}, k); }};
}

Case law_or_in_out(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 2);
  FormulaPtr a = gen(t, rng, FormulaShape::CD, 3), b = gen(t, rng, FormulaShape::CD, 3);
  FormulaPtr in = counterfactual(x, tensor_or(a, b));
  FormulaPtr out = tensor_or(counterfactual(x, a), counterfactual(x, b));
  return {t, [=](const CausalTeam& t) { return equivalent(t, in, out); }};
}

Case law_and_in_out(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 2);
  FormulaPtr a = gen(t, rng, FormulaShape::CD, 3), b = gen(t, rng, FormulaShape::CD, 3);
  FormulaPtr in = counterfactual(x, conj(a, b));
  FormulaPtr out = conj(counterfactual(x, a), counterfactual(x, b));
  return {t, [=](const CausalTeam& t) { return equivalent(t, in, out); }};
}

Case law_neg_in_out(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 2);  // consistent by construction
  FormulaPtr a = gen(t, rng, FormulaShape::CO_neg, 3);
  FormulaPtr in = counterfactual(x, dual_neg(a));
  FormulaPtr out = dual_neg(counterfactual(x, a));
  return {t, [=](const CausalTeam& t) { return equivalent(t, in, out); }};
}

Case law_intsplit(Rng& rng, const GeneratorConfig& g) {
  GeneratorConfig s = g;
  s.multiteam = false;
  CausalTeam t = random_team(s, rng);
  auto x = random_bindings(t, rng, 2);
  std::uint64_t split_seed = rng();
  return {t, [=](const CausalTeam& t) {
            CausalTeam c = explicit_closure(t);
            CausalTeam tx = act(c, x);
            Rng r(split_seed);
            Rows left, right;
            for (const auto& e : tx.rows()) {
              int where = static_cast<int>(pick(r, 0, 2));
              if (where != 1) left.add(e.row);
              if (where != 0) right.add(e.row);
            }
            Check out = pass();
            for (Rows* part : {&left, &right}) {
              CausalTeam target = tx.with_rows(*part);
              Rows lifted;
              for (const auto& e : c.rows()) {
                CausalTeam one = act(singleton(c, e.row), x);
                const Row& image = one.rows().entries().front().row;
                for (const auto& p : part->entries())
                  if (p.row == image) lifted.add(e.row);
              }
              out = both(out, same_team(act(c.with_rows(lifted), x), target, "lifted subteam after intervention and target"));
            }
            return out;
          }};
}

Case law_cf_in_out(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 2);
  auto y = random_bindings(t, rng, 2);
  std::set<std::string> yvars;
  for (const auto& b : y) yvars.insert(b.var);
  std::vector<Binding> rest;
  for (const auto& b : x)
    if (!yvars.count(b.var)) rest.push_back(b);
  FormulaPtr psi = gen(t, rng, FormulaShape::CO, 3);
  FormulaPtr nested = counterfactual(x, counterfactual(y, psi));
  FormulaPtr flat = counterfactual(concat(rest, y), psi);
  return {t, [=](const CausalTeam& t) {
            return both(same_team(act(act(t, x), y), act(t, concat(rest, y)), "(T_{" + show(x) + "})_{" + show(y) + "} and T_{" + show(concat(rest, y)) + "}"),
                        equivalent(t, nested, flat));
          }};
}

Case law_sel_ei(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr theta = gen(t, rng, FormulaShape::Classical, 2);
  FormulaPtr chi = gen(t, rng, FormulaShape::CD, 3);
  FormulaPtr sel = selective(theta, chi);
  FormulaPtr dis = tensor_or(dual_neg(theta), chi);
  return {t, [=](const CausalTeam& t) { return equivalent(t, sel, dis); }};
}

Case law_sel_in_out(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  auto x = random_bindings(t, rng, 2);
  FormulaPtr psi = gen(t, rng, FormulaShape::Classical, 2);
  FormulaPtr chi = gen(t, rng, FormulaShape::CO, 3);
  FormulaPtr inside = counterfactual(x, selective(psi, chi));
  FormulaPtr cpsi = counterfactual(x, psi), cchi = counterfactual(x, chi);
  return {t, [=](const CausalTeam& t) {
            bool a = satisfies(t, *inside).satisfied;
            // The antecedent is a flat counterfactual, selected row by row.
            bool b = satisfies(flat_select(t, *cpsi), *cchi).satisfied;
            if (a == b) return pass();
            return fail(show(inside) + (a ? " holds" : " fails") + " but (" + show(cpsi) + ") => (" + show(cchi) + ")" +
                        (b ? " holds" : " fails"));
          }};
}

Case law_mp_or(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr theta = gen(t, rng, FormulaShape::CO_neg, 3);
  FormulaPtr chi = gen(t, rng, FormulaShape::CO_neg, 3);
  FormulaPtr minor = tensor_or(dual_neg(theta), chi);
  // Restrict to the rows satisfying theta so the premises are not vacuous.
  CausalTeam s = flat_select(t, *theta);
  return {s, [=](const CausalTeam& t) { return entails(t, {theta, minor}, chi, strict(t)); }};
}

Case law_rec(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  return {t, [](const CausalTeam& t) {
            std::vector<std::pair<std::string, std::string>> cc;
            const auto& dom = t.domain();
            for (const auto& a : dom)
              for (const auto& b : dom) {
                if (a == b || !contributing_cause(t, a, b)) continue;
                cc.emplace_back(a, b);
                if (!t.graph().descendants({a}).count(b))
                  return fail("CC(" + a + "," + b + ") holds but " + b + " does not descend from " + a);
              }
            Dag rel(dom, cc);
            if (rel.is_acyclic()) return cc.empty() ? vacuous() : pass();
            return fail("the contributing-cause relation has a cycle");
          }};
}

Case law_selimp_rules(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  FormulaPtr theta = gen(t, rng, FormulaShape::Classical, 2);
  FormulaPtr theta2 = gen(t, rng, FormulaShape::Classical, 2);
  FormulaPtr chi = gen(t, rng, FormulaShape::CD, 3), psi = gen(t, rng, FormulaShape::CD, 3);
  FormulaPtr p = selective(theta, chi);
  FormulaPtr weaker_antecedent = selective(conj(theta, theta2), chi);
  FormulaPtr weaker_consequent = selective(theta, tensor_or(chi, psi));
  FormulaPtr curried = selective(theta, selective(theta2, psi));
  FormulaPtr uncurried = selective(conj(theta, theta2), psi);
  return {t, [=](const CausalTeam& t) {
            Check c = entails(t, {p}, weaker_antecedent);
            c = both(c, entails(t, {p}, weaker_consequent));
            return both(c, equivalent(t, curried, uncurried));
          }};
}

Case law_deprules(Rng& rng, const GeneratorConfig& g) {
  CausalTeam t = random_team(g, rng);
  const auto& dom = t.domain();
  std::string y = any_var(t, rng);
  std::vector<std::string> xs;
  for (const auto& v : dom)
    if (v != y && xs.size() < 2 && coin(rng)) xs.push_back(v);
  FormulaPtr d = dep(xs, y);
  std::vector<FormulaPtr> first, by_sel, by_cf;
  for (const auto& xv : range_product(t, xs)) {
    Assignment a;
    for (std::size_t i = 0; i < xs.size(); ++i) a.emplace_back(xs[i], xv[i]);
    std::vector<FormulaPtr> sel, cf;
    for (const auto& yv : t.sig().ranges[t.index_of(y)]) {
      if (xs.empty()) {
        sel.push_back(eq(y, yv));
        cf.push_back(eq(y, yv));
      } else {
        sel.push_back(selective(conjunction_of(a), eq(y, yv)));
        std::vector<Binding> bs;
        for (const auto& [v, val] : a) bs.push_back({v, val});
        cf.push_back(counterfactual(bs, eq(y, yv)));
      }
    }
    if (!xs.empty()) first.push_back(selective(conjunction_of(a), dep({}, y)));
    by_sel.push_back(intuit_or_all(sel));
    by_cf.push_back(intuit_or_all(cf));
  }
  FormulaPtr sel_premise = conj_all(by_sel), cf_premise = conj_all(by_cf);
  Atom yv = any_value(t, y, rng);
  return {t, [=](const CausalTeam& t) {
            Check c = vacuous();
            for (const auto& f : first) c = both(c, entails(t, {d}, f));
            c = both(c, entails(t, {sel_premise}, d));
            c = both(c, entails(t, {cf_premise}, d));
            return both(c, entails(t, {eq(y, yv)}, dep({}, y)));
          }};
}

Case law_probspace(Rng& rng, const GeneratorConfig& g) {
  GeneratorConfig s = g;
  s.multiteam = true;
  CausalTeam t = random_team(s, rng);
  FormulaPtr a = gen(t, rng, FormulaShape::CO, 3), b = gen(t, rng, FormulaShape::CO, 3);
  return {t, [=](const CausalTeam& t) {
            if (t.empty()) return vacuous();
            auto pr = [&](const FormulaPtr& f) { return probability_of(t, *f).value(); };
            FormulaPtr ac = complement(a);
            FormulaPtr rest = conj(b, ac);  // disjoint from a
            if (pr(tensor_or(a, rest)) != pr(a) + pr(rest))
              return fail("additivity: Pr(" + show(a) + ") + Pr(" + show(rest) + ") != Pr of the disjunction");
            if (pr(conj(a, ac)) != Rational(0)) return fail("Pr(" + show(a) + " & its complement) != 0");
            if (pr(ac) != Rational(1) - pr(a)) return fail("complement: Pr(" + show(ac) + ") != 1 - Pr(" + show(a) + ")");
            if (pr(tensor_or(a, ac)) != Rational(1)) return fail("normalization fails for " + show(a));
            return pass();
          }};
}

Case law_conserv(Rng& rng, const GeneratorConfig& g) {
  GeneratorConfig s = g;
  s.multiteam = true;
  s.parametric = true;
  CausalTeam t = random_team(s, rng);
  return {t, [](const CausalTeam& t) {
            if (t.empty()) return vacuous();
            auto joint = joint_from_exogenous(t);
            for (const auto& tuple : range_product(t, t.domain())) {
              Assignment a;
              for (std::size_t i = 0; i < tuple.size(); ++i) a.emplace_back(t.domain()[i], tuple[i]);
              Rational want = joint.count(tuple) ? joint.at(tuple).value() : Rational(0);
              Rational got = probability_of(t, *conjunction_of(a)).value();
              if (got != want)
                return fail("Pr(" + to_string(a) + ") = " + to_string(got) + " but the exogenous push-forward gives " +
                            to_string(want));
            }
            return pass();
          }};
}

Case law_depdef(Rng& rng, const GeneratorConfig& g) {
  GeneratorConfig s = g;
  s.multiteam = true;
  CausalTeam t = random_team(s, rng);
  std::string y = any_var(t, rng);
  std::vector<std::string> xs;
  for (const auto& v : t.domain())
    if (v != y && coin(rng)) xs.push_back(v);
  return {t, [=](const CausalTeam& t) {
            if (t.empty()) return vacuous();
            bool lhs = satisfies(t, *dep(xs, y)).satisfied;
            bool rhs = true;
            for (const auto& xv : range_product(t, xs))
              for (const auto& yv : t.sig().ranges[t.index_of(y)]) {
                FormulaPtr e = eq(y, yv);
                if (xs.empty()) {
                  rhs = rhs && prob_independent(t, *e, *e);
                } else {
                  Assignment a;
                  for (std::size_t i = 0; i < xs.size(); ++i) a.emplace_back(xs[i], xv[i]);
                  rhs = rhs && prob_independent(t, *e, *e, conjunction_of(a).get());
                }
              }
            if (lhs == rhs) return pass();
            return fail(show(dep(xs, y)) + (lhs ? " holds" : " fails") + " but the independence encoding " +
                        (rhs ? "holds" : "fails"));
          }};
}

Case law_ma_mc(Rng& rng, const GeneratorConfig& g) {
  GeneratorConfig s = g;
  s.multiteam = true;
  s.parametric = true;
  s.independent_exogenous = coin(rng, 0.75);
  CausalTeam t = random_team(s, rng);
  return {t, [](const CausalTeam& t) {
            if (t.empty() || !check_markov_axiom(t).holds) return vacuous();
            auto mc = check_markov_condition(t);
            if (!mc.holds) return fail("Markov condition fails: " + to_string(*mc.witness));
            for (const auto& tuple : range_product(t, t.domain())) {
              Rational lhs = joint_probability(t, tuple).value(), rhs = markov_product(t, tuple);
              if (lhs != rhs) {
                std::ostringstream os;
                os << "product formula fails at (" << to_string(std::vector<Value>(tuple.begin(), tuple.end()))
                   << "): " << to_string(lhs) << " vs " << to_string(rhs);
                return fail(os.str());
              }
            }
            return pass();
          }};
}

// ---- fixed witnesses --------------------------------------------------------

// Small builder for the hand-written teams below.
class Fixture {
 public:
  explicit Fixture(Mode m = Mode::Set) { spec_.mode = m; }
  Fixture& var(const std::string& v, std::vector<std::int64_t> range) {
    std::vector<Atom> r(range.begin(), range.end());
    spec_.variables.emplace_back(v, std::move(r));
    ranges_[v] = std::move(range);
    return *this;
  }
  Fixture& edge(const std::string& a, const std::string& b) {
    spec_.edges.emplace_back(a, b);
    parents_[b].push_back(a);
    return *this;
  }
  // Total table for v over its (alphabetical) parents.
  Fixture& fn(const std::string& v, const std::function<std::int64_t(const std::vector<std::int64_t>&)>& f) {
    auto ps = parents_[v];
    std::sort(ps.begin(), ps.end());
    std::vector<std::vector<std::int64_t>> tuples{{}};
    for (const auto& p : ps) {
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& t : tuples)
        for (auto a : ranges_[p]) {
          auto u = t;
          u.push_back(a);
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    auto& table = spec_.functions[v];
    for (const auto& t : tuples) table.emplace_back(std::vector<Value>(t.begin(), t.end()), Value(f(t)));
    return *this;
  }
  Fixture& row(const std::vector<std::pair<std::string, std::int64_t>>& vals, std::size_t count = 1) {
    std::map<std::string, Value> r;
    for (const auto& [v, a] : vals) r.emplace(v, Value(a));
    spec_.rows.emplace_back(std::move(r), count);
    return *this;
  }
  CausalTeam build() const { return build_team(spec_, true); }

 private:
  TeamSpec spec_;
  std::map<std::string, std::vector<std::int64_t>> ranges_;
  std::map<std::string, std::vector<std::string>> parents_;
};

struct Expectation {
  std::string team_name;
  CausalTeam team;
  std::string formula;
  bool expected;
};

LawReport replay(const std::string& id, const std::vector<Expectation>& cases) {
  LawReport r;
  r.law = id;
  r.outcome = LawOutcome::CounterexampleConfirmed;
  for (const auto& c : cases) {
    ++r.trials;
    ++r.nonvacuous;
    bool got = satisfies(c.team, *parse_formula(c.formula)).satisfied;
    if (got != c.expected) {
      r.outcome = LawOutcome::Fails;
      r.witness = to_json(c.team) + "team " + c.team_name + ": " + c.formula + " expected " +
                  (c.expected ? "SAT" : "UNSAT") + " got " + (got ? "SAT" : "UNSAT");
      return r;
    }
  }
  return r;
}

LawReport law_sem_fail() {
  CausalTeam t = Fixture().var("X", {1, 2}).row({{"X", 1}}).row({{"X", 2}}).build();
  return replay("SEM-FAIL", {{"{X:1},{X:2}", t, "X=1", false}, {"{X:1},{X:2}", t, "X!=1", false}});
}

LawReport law_cem_prime_fail() {
  CausalTeam t = Fixture().var("X", {1, 2}).var("Y", {1, 2}).row({{"X", 1}, {"Y", 1}}).row({{"X", 1}, {"Y", 2}}).build();
  CausalTeam s = Fixture()
                     .var("X", {1, 2})
                     .var("Z", {1, 2})
                     .var("Y", {2, 3, 4})
                     .edge("X", "Y")
                     .edge("Z", "Y")
                     .fn("Y", [](const auto& a) { return a[0] + a[1]; })
                     .row({{"X", 1}, {"Z", 1}, {"Y", 2}})
                     .row({{"X", 2}, {"Z", 2}, {"Y", 4}})
                     .build();
  return replay("CEM'-FAIL", {{"T", t, "do X=1 []-> Y=1", false},
                              {"T", t, "do X=1 []-> Y!=1", false},
                              {"S", s, "do X=1 []-> Y=2", false},
                              {"S", s, "do X=1 []-> Y!=2", false}});
}

LawReport law_noncommute() {
  auto sum = [](const std::vector<std::int64_t>& a) { return a[0] + a[1]; };
  CausalTeam t = Fixture()
                     .var("X", {1, 2})
                     .var("Z", {1, 2, 3})
                     .var("Y", {2, 3, 4, 5})
                     .edge("X", "Y")
                     .edge("Z", "Y")
                     .fn("Y", sum)
                     .row({{"X", 1}, {"Z", 1}, {"Y", 2}})
                     .row({{"X", 1}, {"Z", 2}, {"Y", 3}})
                     .row({{"X", 2}, {"Z", 3}, {"Y", 5}})
                     .build();
  CausalTeam s = Fixture()
                     .var("X", {1, 2})
                     .var("Z", {1, 2, 3})
                     .var("Y", {2, 3, 4, 5})
                     .edge("X", "Y")
                     .edge("Z", "Y")
                     .fn("Y", sum)
                     .row({{"X", 1}, {"Z", 1}, {"Y", 2}})
                     .row({{"X", 1}, {"Z", 2}, {"Y", 3}})
                     .row({{"X", 2}, {"Z", 1}, {"Y", 3}})
                     .build();
  CausalTeam b = Fixture()
                     .var("X", {0, 1})
                     .var("Y", {0, 1})
                     .var("Z", {0, 1})
                     .edge("X", "Y")
                     .edge("X", "Z")
                     .edge("Y", "Z")
                     .fn("Y", [](const auto& a) { return a[0]; })
                     .fn("Z", [](const auto& a) { return a[0] & a[1]; })
                     .row({{"X", 0}, {"Y", 0}, {"Z", 0}})
                     .build();
  CausalTeam n = Fixture()
                     .var("X", {0, 1})
                     .var("Y", {0, 1})
                     .var("Z", {0, 1})
                     .edge("X", "Z")
                     .edge("Y", "Z")
                     .fn("Z", [](const auto& a) { return a[1]; })
                     .row({{"X", 0}, {"Y", 0}, {"Z", 0}})
                     .row({{"X", 1}, {"Y", 1}, {"Z", 1}})
                     .build();
  return replay("NONCOMMUTE", {
                                  {"T", t, "X=1 => (do X=1 []-> (Y=2 | Y=3))", true},
                                  {"T", t, "do X=1 []-> (X=1 => (Y=2 | Y=3))", false},
                                  {"S", s, "do Z=1 []-> (Y=3 => Y=3)", true},
                                  {"S", s, "Y=3 => (do Z=1 []-> Y=3)", false},
                                  {"S", s, "do Z=1 []-> (Y=3 => Pr(Y=3) = 1)", true},
                                  {"S", s, "Y=3 => (do Z=1 []-> Pr(Y=3) = 1)", false},
                                  {"boolean", b, "do Y=0 []-> (do X=1 []-> Z!=1)", true},
                                  {"boolean", b, "Y=0 => (do X=1 []-> Z!=1)", false},
                                  {"ndep", n, "do X=0 []-> (X=0 => ndep(X;Z))", true},
                                  {"ndep", n, "X=0 => (X=0 => ndep(X;Z))", false},
                              });
}

// ---- driver -----------------------------------------------------------------

struct Universal {
  CaseGen gen;
  GeneratorConfig cfg;
};

const std::map<std::string, Universal>& universal_laws() {
  static const std::map<std::string, Universal> m = {
      {"DOWNWARD", {law_downward, sized(5, 3, 8)}},
      {"EMPTY", {law_empty, sized(5, 3, 6)}},
      {"FLAT", {law_flat, sized(4, 3, 6)}},
      {"WEM", {law_wem, sized(4, 3, 6)}},
      {"CEM-HOLDS", {law_cem, sized(4, 3, 6)}},
      {"D", {law_d, sized(4, 3, 6)}},
      {"IMP/EXP", {law_impexp, sized(6, 3, 10)}},
      {"PERM", {law_perm, sized(6, 3, 10)}},
      {"FULLIMPEXP", {law_fullimpexp, sized(6, 3, 10)}},
      {"FULLPERM", {law_fullperm, sized(6, 3, 10)}},
      {"REP", {law_rep, sized(6, 3, 10)}},
      {"REWRITE", {law_rewrite, sized(6, 3, 10)}},
      {"EFF", {law_eff, sized(6, 3, 10)}},
      {"DEC", {law_dec, sized(5, 3, 8)}},
      {"UNI", {law_uni, sized(5, 3, 8)}},
      {"CE", {law_ce, sized(5, 3, 8)}},
      {"CI", {law_ci, sized(5, 3, 8)}},
      {"OR-IN-OUT", {law_or_in_out, sized(4, 3, 6)}},
      {"AND-IN-OUT", {law_and_in_out, sized(5, 3, 8)}},
      {"NEG-IN-OUT", {law_neg_in_out, sized(5, 3, 8)}},
      {"INTSPLIT", {law_intsplit, sized(5, 3, 8)}},
      {"CF-IN-OUT", {law_cf_in_out, sized(5, 3, 8)}},
      {"SEL-E/I", {law_sel_ei, sized(4, 3, 6)}},
      {"SEL-IN-OUT", {law_sel_in_out, sized(5, 3, 8)}},
      {"MP-OR", {law_mp_or, sized(4, 3, 6)}},
      {"REC", {law_rec, sized(4, 3, 4)}},
      {"SELIMP-RULES", {law_selimp_rules, sized(4, 3, 6)}},
      {"DEPRULES", {law_deprules, sized(4, 3, 8)}},
      {"PROBSPACE", {law_probspace, sized(5, 3, 8)}},
      {"CONSERV", {law_conserv, sized(5, 3, 10)}},
      {"DEPDEF", {law_depdef, sized(4, 3, 10)}},
      {"MA=>MC", {law_ma_mc, sized(5, 3, 8)}},
  };
  return m;
}

// Check wrapper that turns library errors into failures.
Check guarded(const CheckFn& f, const CausalTeam& t) {
  try {
    return f(t);
  } catch (const std::exception& e) {
    return fail(std::string("error: ") + e.what());
  }
}

LawReport run_universal(const std::string& id, const Universal& u, const LawOptions& opts) {
  LawReport r;
  r.law = id;
  Rng master(opts.seed);
  for (std::size_t i = 0; i < opts.trials; ++i) {
    Rng rng(master());
    GeneratorConfig cfg = opts.generator.value_or(u.cfg);
    if (!opts.generator) cfg.multiteam = coin(rng, 0.3);
    Case c = u.gen(rng, cfg);
    Check res = guarded(c.check, c.team);
    ++r.trials;
    if (res.applicable) ++r.nonvacuous;
    if (res.ok) continue;
    CausalTeam small = shrink_rows(c.team, [&](const CausalTeam& t) {
      Check k = guarded(c.check, t);
      return k.applicable && !k.ok;
    });
    r.outcome = LawOutcome::Fails;
    r.witness = to_json(small) + guarded(c.check, small).detail;
    return r;
  }
  return r;
}

}  // namespace

const std::vector<LawInfo>& law_registry() { return kLaws; }

const LawInfo& law_info(const std::string& id) {
  for (const auto& l : kLaws)
    if (l.id == id) return l;
  throw Error(ErrorKind::UnknownLaw, id);
}

const char* to_string(LawOutcome o) {
  switch (o) {
    case LawOutcome::Holds: return "holds";
    case LawOutcome::Fails: return "fails";
    case LawOutcome::CounterexampleConfirmed: return "counterexample-confirmed";
  }
  return "?";
}

LawReport check_law(const std::string& id, const LawOptions& opts) {
  law_info(id);
  if (id == "SEM-FAIL") return law_sem_fail();
  if (id == "CEM'-FAIL") return law_cem_prime_fail();
  if (id == "NONCOMMUTE") return law_noncommute();
  return run_universal(id, universal_laws().at(id), opts);
}

CausalTeam shrink_rows(const CausalTeam& t, const std::function<bool(const CausalTeam&)>& fails) {
  CausalTeam cur = explicit_closure(t);
  bool progress = true;
  while (progress) {
    progress = false;
    const auto& es = cur.rows().entries();
    for (std::size_t i = 0; i < es.size() && !progress; ++i) {
      std::vector<std::size_t> drops{es[i].count};
      if (es[i].count > 1) drops.push_back(1);
      for (std::size_t drop : drops) {
        Rows sub;
        for (std::size_t j = 0; j < es.size(); ++j) {
          std::size_t n = es[j].count - (i == j ? drop : 0);
          if (n > 0) sub.add(es[j].row, n);
        }
        CausalTeam next = cur.with_rows(std::move(sub));
        if (fails(next)) {
          cur = std::move(next);
          progress = true;
          break;
        }
      }
    }
  }
  return cur;
}

std::string summary_line(const LawReport& r) {
  std::ostringstream os;
  os << r.law << ' ' << to_string(r.outcome) << " trials=" << r.trials << " nonvacuous=" << r.nonvacuous;
  return os.str();
}

}  // namespace ct
