#include "causalteam/causality.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "causalteam/intervene.hpp"
#include "causalteam/semantics.hpp"

namespace ct {

const char* to_string(CauseKind k) {
  switch (k) {
    case CauseKind::Direct: return "DC";
    case CauseKind::Total: return "TC";
    case CauseKind::ProbDirect: return "PDC";
    case CauseKind::ProbTotal: return "PTC";
    case CauseKind::Contributing: return "CC";
  }
  return "?";
}

CauseKind parse_cause_kind(const std::string& s) {
  for (CauseKind k : {CauseKind::Direct, CauseKind::Total, CauseKind::ProbDirect, CauseKind::ProbTotal,
                      CauseKind::Contributing})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::SchemaError, "unknown cause kind " + s + " (DC, TC, PDC, PTC, CC)");
}

std::string to_string(const CauseWitness& w) {
  std::ostringstream os;
  os << to_string(w.kind) << ' ' << w.cause << "->" << w.effect;
  if (!w.fixed.empty()) os << " fix{" << to_string(w.fixed) << '}';
  if (w.kind == CauseKind::ProbDirect || w.kind == CauseKind::ProbTotal) {
    os << " y:" << w.y.to_string() << " x:" << w.x.to_string() << "=>Pr:" << to_string(w.pr) << " x':"
       << w.x2.to_string() << "=>Pr:" << to_string(w.pr2);
  } else {
    os << " x:" << w.x.to_string() << "=>y:" << w.y.to_string() << " x':" << w.x2.to_string()
       << "=>y':" << w.y2.to_string();
  }
  return os.str();
}

namespace {

std::vector<Binding> bindings_of(const Assignment& a) {
  std::vector<Binding> out;
  for (const auto& [v, x] : a) out.push_back({v, x});
  return out;
}

Assignment assignment(const std::vector<std::string>& vars, const std::vector<Atom>& vals) {
  Assignment a;
  for (std::size_t i = 0; i < vars.size(); ++i) a.emplace_back(vars[i], vals[i]);
  return a;
}

CausalTeam apply_fix(const CausalTeam& t, const Assignment& a) {
  if (a.empty()) return t;
  return do_intervention(t, bindings_of(a));
}

// Values y with T |= Y=y.
std::vector<Atom> forced_values(const CausalTeam& t, const std::string& y) {
  std::size_t i = t.index_of(y);
  if (t.empty()) return t.sig().ranges[i];
  const Value* first = nullptr;
  for (const auto& e : t.rows()) {
    if (!e.row[i].is_proper())
      throw Error(ErrorKind::FormalTermEncountered, "column " + y + " holds a formal term");
    if (!first) first = &e.row[i];
    else if (!(*first == e.row[i])) return {};
  }
  return {first->atom()};
}

// Pr_T(Y=y), nullopt on the empty team.
std::optional<Rational> pr_eq(const CausalTeam& t, const std::string& y, const Atom& v) {
  if (t.empty()) return std::nullopt;
  std::size_t i = t.index_of(y);
  std::int64_t hit = 0;
  for (const auto& e : t.rows()) {
    if (!e.row[i].is_proper()) throw Error(ErrorKind::FormalTermEncountered, "column " + y + " holds a formal term");
    if (e.row[i].atom() == v) hit += static_cast<std::int64_t>(e.count);
  }
  return Rational(hit, static_cast<std::int64_t>(t.rows().total()));
}

std::vector<std::string> others(const CausalTeam& t, const std::string& x, const std::string& y) {
  std::vector<std::string> out;
  for (const auto& v : t.domain())
    if (v != x && v != y) out.push_back(v);
  return out;
}

std::size_t product_size(const CausalTeam& t, const std::vector<std::string>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= t.sig().ranges[t.index_of(v)].size();
  return n;
}

void guard(std::size_t n, const CauseOptions& o) {
  if (n > o.max_candidates)
    throw Error(ErrorKind::SearchSpaceTooLarge, std::to_string(n) + " candidates exceed the cap of " +
                                                    std::to_string(o.max_candidates));
}

void check_pair(const CausalTeam& t, const std::string& x, const std::string& y) {
  t.index_of(x);
  t.index_of(y);
  if (x == y) throw Error(ErrorKind::SchemaError, "cause and effect must differ");
}

// Shared search: for a context team, intervene on each x and look for two
// values of X forcing two different values of Y. With every other variable
// fixed and Y endogenous, each intervened team must collapse to one row.
std::optional<CauseWitness> contrast(const CausalTeam& ctx, const std::string& x, const std::string& y,
                                     bool expect_single = false) {
  const auto& rx = ctx.sig().ranges[ctx.index_of(x)];
  std::vector<std::vector<Atom>> forced;
  for (const auto& xv : rx) {
    CausalTeam after = do_intervention(ctx, {{x, xv}});
    if (expect_single && after.rows().distinct() > 1)
      throw std::logic_error("direct-cause context left " + std::to_string(after.rows().distinct()) + " rows");
    forced.push_back(forced_values(after, y));
  }
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t j = 0; j < rx.size(); ++j) {
      if (i == j) continue;
      for (const auto& a : forced[i])
        for (const auto& b : forced[j])
          if (!(a == b)) {
            CauseWitness w;
            w.x = rx[i];
            w.x2 = rx[j];
            w.y = a;
            w.y2 = b;
            return w;
          }
    }
  return std::nullopt;
}

std::vector<std::vector<Atom>> occurring(const CausalTeam& t, const std::vector<std::string>& vars) {
  std::vector<std::size_t> idx;
  for (const auto& v : vars) idx.push_back(t.index_of(v));
  std::vector<std::vector<Atom>> out;
  std::set<std::vector<Atom>> seen;
  for (const auto& e : t.rows()) {
    std::vector<Atom> w;
    for (std::size_t i : idx) {
      if (!e.row[i].is_proper())
        throw Error(ErrorKind::FormalTermEncountered, "column " + t.domain()[i] + " holds a formal term");
      w.push_back(e.row[i].atom());
    }
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> nondesc(const CausalTeam& t, const std::string& x) {
  auto nd = t.graph().nondescendants(x);
  return {nd.begin(), nd.end()};
}

// Subsets of rest that contain every element of base, smallest first.
std::vector<std::vector<std::string>> supersets_within(const std::vector<std::string>& rest, const VarSet& base) {
  std::vector<std::string> free;
  for (const auto& v : rest)
    if (!base.count(v)) free.push_back(v);
  for (const auto& b : base)
    if (std::find(rest.begin(), rest.end(), b) == rest.end()) return {};
  std::vector<std::vector<std::string>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
    VarSet s = base;
    for (std::size_t i = 0; i < free.size(); ++i)
      if ((mask >> i) & 1) s.insert(free[i]);
    out.emplace_back(s.begin(), s.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace

std::optional<CauseWitness> direct_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                         const CauseOptions& o) {
  check_pair(t, x, y);
  auto zs = others(t, x, y);
  guard(product_size(t, zs) * t.sig().ranges[t.index_of(x)].size(), o);
  CausalTeam c = explicit_closure(t);
  bool edge = c.graph().has_edge(x, y);
  for (const auto& z : range_product(c, zs)) {
    Assignment fix = assignment(zs, z);
    auto w = contrast(apply_fix(c, fix), x, y, edge);
    if (!w) continue;
    w->kind = CauseKind::Direct;
    w->cause = x;
    w->effect = y;
    w->fixed = fix;
    return w;
  }
  return std::nullopt;
}

std::optional<CauseWitness> total_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                        const CauseOptions& o) {
  check_pair(t, x, y);
  CausalTeam c = explicit_closure(t);
  auto nd = nondesc(c, x);
  auto ws = occurring(c, nd);
  guard(ws.size() * c.sig().ranges[c.index_of(x)].size(), o);
  for (const auto& wv : ws) {
    Assignment fix = assignment(nd, wv);
    auto w = contrast(apply_fix(c, fix), x, y);
    if (!w) continue;
    w->kind = CauseKind::Total;
    w->cause = x;
    w->effect = y;
    w->fixed = fix;
    return w;
  }
  return std::nullopt;
}

std::optional<CauseWitness> prob_direct_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                              const CauseOptions& o) {
  check_pair(t, x, y);
  auto zs = others(t, x, y);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  guard(product_size(t, zs) * rx.size(), o);
  CausalTeam c = explicit_closure(t);
  for (const auto& z : range_product(c, zs)) {
    Assignment fix = assignment(zs, z);
    CausalTeam ctx = apply_fix(c, fix);
    std::vector<CausalTeam> after;
    for (const auto& xv : rx) after.push_back(do_intervention(ctx, {{x, xv}}));
    for (const auto& yv : ry)
      for (std::size_t i = 0; i < rx.size(); ++i) {
        auto p = pr_eq(after[i], y, yv);
        if (!p || *p != Rational(0)) continue;
        for (std::size_t j = 0; j < rx.size(); ++j) {
          if (i == j) continue;
          auto q = pr_eq(after[j], y, yv);
          if (!q || *q != Rational(1)) continue;
          CauseWitness w;
          w.kind = CauseKind::ProbDirect;
          w.cause = x;
          w.effect = y;
          w.fixed = fix;
          w.x = rx[i];
          w.x2 = rx[j];
          w.y = w.y2 = yv;
          w.pr = *p;
          w.pr2 = *q;
          return w;
        }
      }
  }
  return std::nullopt;
}

std::optional<CauseWitness> prob_total_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                             const CauseOptions& o) {
  check_pair(t, x, y);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  guard(rx.size() * ry.size(), o);
  CausalTeam c = explicit_closure(t);
  std::vector<CausalTeam> after;
  for (const auto& xv : rx) after.push_back(do_intervention(c, {{x, xv}}));
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t j = 0; j < rx.size(); ++j) {
      if (i == j) continue;
      for (const auto& yv : ry) {
        auto p = pr_eq(after[i], y, yv), q = pr_eq(after[j], y, yv);
        if (!p || !q || *p == *q) continue;
        CauseWitness w;
        w.kind = CauseKind::ProbTotal;
        w.cause = x;
        w.effect = y;
        w.x = rx[i];
        w.x2 = rx[j];
        w.y = w.y2 = yv;
        w.pr = *p;
        w.pr2 = *q;
        return w;
      }
    }
  return std::nullopt;
}

std::optional<CauseWitness> contributing_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                               const CauseOptions& o) {
  check_pair(t, x, y);
  CausalTeam c = explicit_closure(t);
  auto nd = c.graph().nondescendants(x);
  auto family = supersets_within(others(c, x, y), nd);
  std::size_t n = 0;
  for (const auto& zs : family) n += product_size(c, zs) * c.sig().ranges[c.index_of(x)].size();
  guard(n, o);
  for (const auto& zs : family)
    for (const auto& z : range_product(c, zs)) {
      Assignment fix = assignment(zs, z);
      auto w = contrast(apply_fix(c, fix), x, y);
      if (!w) continue;
      w->kind = CauseKind::Contributing;
      w->cause = x;
      w->effect = y;
      w->fixed = fix;
      return w;
    }
  return std::nullopt;
}

std::optional<CauseWitness> find_cause(CauseKind k, const CausalTeam& t, const std::string& x,
                                       const std::string& y, const CauseOptions& o) {
  switch (k) {
    case CauseKind::Direct: return direct_cause(t, x, y, o);
    case CauseKind::Total: return total_cause(t, x, y, o);
    case CauseKind::ProbDirect: return prob_direct_cause(t, x, y, o);
    case CauseKind::ProbTotal: return prob_total_cause(t, x, y, o);
    case CauseKind::Contributing: return contributing_cause(t, x, y, o);
  }
  return std::nullopt;
}

// ---- encodings ------------------------------------------------------------

namespace {

std::vector<Binding> with(const Assignment& fix, const std::string& x, const Atom& v) {
  auto b = bindings_of(fix);
  b.push_back({x, v});
  return b;
}

// Xi(fix): fix []-> ((X=x []-> Y=y) & (X=x' []-> Y=y')), dropping the outer
// counterfactual when fix is empty.
FormulaPtr nested_pair(const Assignment& fix, const std::string& x, const Atom& a, const Atom& a2,
                       const FormulaPtr& fa, const FormulaPtr& fa2) {
  FormulaPtr inner = conj(counterfactual({{x, a}}, fa), counterfactual({{x, a2}}, fa2));
  if (fix.empty()) return inner;
  return counterfactual(bindings_of(fix), inner);
}

// An empty disjunction becomes Pr(X=x) < 0, which no team satisfies.
FormulaPtr disjunction(const CausalTeam& t, const std::string& x, const std::vector<FormulaPtr>& ds) {
  if (ds.empty()) return prob_cmp(eq(x, t.sig().ranges[t.index_of(x)].front()), node::Rel::Lt, Rational(0));
  return intuit_or_all(ds);
}

}  // namespace

FormulaPtr direct_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y) {
  check_pair(t, x, y);
  auto zs = others(t, x, y);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  std::vector<FormulaPtr> ds;
  for (const auto& z : range_product(t, zs)) {
    Assignment fix = assignment(zs, z);
    for (const auto& a : rx)
      for (const auto& a2 : rx) {
        if (a == a2) continue;
        for (const auto& b : ry)
          for (const auto& b2 : ry) {
            if (b == b2) continue;
            ds.push_back(conj(counterfactual(with(fix, x, a), eq(y, b)), counterfactual(with(fix, x, a2), eq(y, b2))));
          }
      }
  }
  return disjunction(t, x, ds);
}

FormulaPtr total_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y) {
  check_pair(t, x, y);
  CausalTeam c = explicit_closure(t);
  auto nd = nondesc(c, x);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  std::vector<FormulaPtr> ds;
  for (const auto& wv : occurring(c, nd)) {
    Assignment fix = assignment(nd, wv);
    for (const auto& a : rx)
      for (const auto& a2 : rx) {
        if (a == a2) continue;
        for (const auto& b : ry)
          for (const auto& b2 : ry)
            if (!(b == b2)) ds.push_back(nested_pair(fix, x, a, a2, eq(y, b), eq(y, b2)));
      }
  }
  return disjunction(t, x, ds);
}

FormulaPtr prob_direct_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y) {
  check_pair(t, x, y);
  auto zs = others(t, x, y);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  std::vector<FormulaPtr> ds;
  for (const auto& z : range_product(t, zs)) {
    Assignment fix = assignment(zs, z);
    for (const auto& b : ry)
      for (const auto& a : rx)
        for (const auto& a2 : rx) {
          if (a == a2) continue;
          ds.push_back(conj(counterfactual(with(fix, x, a), prob_eq(eq(y, b), Rational(0))),
                            counterfactual(with(fix, x, a2), prob_eq(eq(y, b), Rational(1)))));
        }
  }
  return disjunction(t, x, ds);
}

FormulaPtr prob_total_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y) {
  check_pair(t, x, y);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  auto n = static_cast<std::int64_t>(t.rows().total());
  std::vector<FormulaPtr> ds;
  for (const auto& a : rx)
    for (const auto& a2 : rx) {
      if (a == a2) continue;
      for (const auto& b : ry)
        for (std::int64_t m = 0; m <= n; ++m)
          for (std::int64_t k = 0; k <= n; ++k) {
            if (m == k) continue;
            ds.push_back(conj(counterfactual({{x, a}}, prob_eq(eq(y, b), Rational(m, n))),
                              counterfactual({{x, a2}}, prob_eq(eq(y, b), Rational(k, n)))));
          }
    }
  return disjunction(t, x, ds);
}

FormulaPtr contributing_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y) {
  check_pair(t, x, y);
  auto nd = t.graph().nondescendants(x);
  const auto& rx = t.sig().ranges[t.index_of(x)];
  const auto& ry = t.sig().ranges[t.index_of(y)];
  std::vector<FormulaPtr> ds;
  for (const auto& zs : supersets_within(others(t, x, y), nd))
    for (const auto& z : range_product(t, zs)) {
      Assignment fix = assignment(zs, z);
      for (const auto& a : rx)
        for (const auto& a2 : rx) {
          if (a == a2) continue;
          for (const auto& b : ry)
            for (const auto& b2 : ry)
              if (!(b == b2)) ds.push_back(nested_pair(fix, x, a, a2, eq(y, b), eq(y, b2)));
        }
    }
  return disjunction(t, x, ds);
}

// ---- invariance and graphs ------------------------------------------------

bool invariant(const CausalTeam& t, const Formula& psi, const CauseOptions& o) {
  CausalTeam c = explicit_closure(t);
  const auto& dom = c.domain();
  std::size_t n = 1;
  for (const auto& r : c.sig().ranges) n *= r.size() + 1;
  guard(n, o);
  if (!satisfies(c, psi).satisfied) return false;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dom.size()); ++mask) {
    std::vector<std::string> zs;
    for (std::size_t i = 0; i < dom.size(); ++i)
      if ((mask >> i) & 1) zs.push_back(dom[i]);
    for (const auto& z : range_product(c, zs))
      if (!satisfies(apply_fix(c, assignment(zs, z)), psi).satisfied) return false;
  }
  return true;
}

GraphHierarchy graph_hierarchy(const CausalTeam& t, const CauseOptions& o) {
  CausalTeam c = explicit_closure(t);
  if (!c.is_parametric()) throw Error(ErrorKind::NotParametric, "graph hierarchy needs total functions");
  const auto& dom = c.domain();
  EdgeSet inv, cont;
  for (const auto& y : dom) {
    std::vector<std::string> rest;
    for (const auto& v : dom)
      if (v != y) rest.push_back(v);
    FormulaPtr d = dep(rest, y);
    // dep is monotone in its determinants, so some determining set contains
    // X exactly when the full one determines Y.
    bool holds_now = satisfies(c, *d).satisfied;
    bool holds_always = holds_now && invariant(c, *d, o);
    for (const auto& x : rest) {
      if (holds_now) cont.emplace(x, y);
      if (holds_always) inv.emplace(x, y);
    }
  }
  GraphHierarchy h{c.graph(), std::move(inv), std::move(cont), true};
  for (const auto& [a, b] : h.causal.edges()) h.chain_holds = h.chain_holds && h.invariant.count({a, b});
  for (const auto& e : h.invariant) h.chain_holds = h.chain_holds && h.contingent.count(e);
  return h;
}

std::pair<Probability, Probability> intervention_shift(const CausalTeam& t, const std::vector<Binding>& spec,
                                                       const Formula& chi) {
  return {probability_of(t, chi), probability_of(do_intervention(t, spec), chi)};
}

}  // namespace ct
