#include "causalteam/prob.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "causalteam/semantics.hpp"

namespace ct {

namespace {

void require_co(const Formula& f) {
  if (!in_fragment(f, Fragment::CO)) throw Error(ErrorKind::NotInCO, to_string(f));
}

// Truth of chi on each distinct row of the (already explicit) team.
std::vector<bool> row_flags(const CausalTeam& closed, const Formula& chi) {
  std::vector<bool> out;
  for (const auto& e : closed.rows()) out.push_back(satisfies(singleton(closed, e.row), chi).satisfied);
  return out;
}

std::int64_t weight(const CausalTeam& t, const std::vector<bool>& a, const std::vector<bool>* b = nullptr,
                    const std::vector<bool>* c = nullptr) {
  std::int64_t w = 0;
  const auto& rows = t.rows().entries();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (a[i] && (!b || (*b)[i]) && (!c || (*c)[i])) w += static_cast<std::int64_t>(rows[i].count);
  return w;
}

std::vector<Atom> proper_row(const CausalTeam& t, const Row& r) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!r[i].is_proper())
      throw Error(ErrorKind::FormalTermEncountered, "column " + t.domain()[i] + " holds a formal term");
    out.push_back(r[i].atom());
  }
  return out;
}

}  // namespace

Probability probability_of(const CausalTeam& t, const Formula& chi) {
  require_co(chi);
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "probability on the empty team");
  return Probability(*team_probability(t, chi));
}

Probability conditional_probability(const CausalTeam& t, const Formula& chi, const Formula& given) {
  require_co(chi);
  require_co(given);
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "probability on the empty team");
  CausalTeam c = explicit_closure(t);
  auto g = row_flags(c, given);
  auto h = row_flags(c, chi);
  std::int64_t den = weight(c, g);
  if (den == 0) throw Error(ErrorKind::ZeroCondition, "Pr(" + to_string(given) + ") = 0");
  return Probability(Rational(weight(c, g, &h), den));
}

bool prob_independent(const CausalTeam& t, const Formula& chi1, const Formula& chi2, const Formula* given) {
  require_co(chi1);
  require_co(chi2);
  if (given) require_co(*given);
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "probability on the empty team");
  CausalTeam c = explicit_closure(t);
  auto a = row_flags(c, chi1);
  auto b = row_flags(c, chi2);
  std::vector<bool> g(a.size(), true);
  if (given) g = row_flags(c, *given);
  std::int64_t n = weight(c, g);
  if (n == 0) return true;
  std::int64_t na = weight(c, g, &a), nb = weight(c, g, &b), nab = weight(c, g, &a, &b);
  if (na == 0 || nb == 0) return true;
  return Rational(nab, na) == Rational(nb, n);
}

std::string to_string(const Assignment& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i].first << '=' << a[i].second.to_string();
  return os.str();
}

FormulaPtr conjunction_of(const Assignment& a) {
  std::vector<FormulaPtr> fs;
  for (const auto& [v, x] : a) fs.push_back(eq(v, x));
  return conj_all(fs);
}

std::string to_string(const MarkovViolation& v) {
  std::ostringstream os;
  os << v.variable << '=' << v.value.to_string();
  os << " | " << (v.parents.empty() ? "-" : to_string(v.parents));
  os << " ; " << to_string(v.context) << ": " << v.without_context.to_string() << " vs "
     << v.with_context.to_string();
  return os.str();
}

namespace {

// Checks one variable against one conditioning set, appending violations in
// row order of first occurrence.
void check_context(const CausalTeam& t, std::size_t x, const std::vector<std::size_t>& extra,
                   std::vector<MarkovViolation>& out) {
  const Dag& g = t.graph();
  const auto& pa = g.parents(x);
  std::map<std::vector<Atom>, std::int64_t> n_pa, n_xpa, n_pae, n_xpae;
  std::vector<std::vector<Atom>> rows;
  for (const auto& e : t.rows()) {
    auto r = proper_row(t, e.row);
    std::vector<Atom> kpa, kpae;
    for (std::size_t p : pa) kpa.push_back(r[p]);
    kpae = kpa;
    for (std::size_t y : extra) kpae.push_back(r[y]);
    auto c = static_cast<std::int64_t>(e.count);
    n_pa[kpa] += c;
    n_pae[kpae] += c;
    kpa.push_back(r[x]);
    kpae.push_back(r[x]);
    n_xpa[kpa] += c;
    n_xpae[kpae] += c;
    rows.push_back(std::move(r));
  }
  std::set<std::vector<Atom>> reported;
  for (const auto& r : rows) {
    std::vector<Atom> kpa, kpae;
    for (std::size_t p : pa) kpa.push_back(r[p]);
    kpae = kpa;
    for (std::size_t y : extra) kpae.push_back(r[y]);
    auto xkpa = kpa, xkpae = kpae;
    xkpa.push_back(r[x]);
    xkpae.push_back(r[x]);
    Rational lhs(n_xpa[xkpa], n_pa[kpa]);
    Rational rhs(n_xpae[xkpae], n_pae[kpae]);
    if (lhs == rhs) continue;
    if (!reported.insert(xkpae).second) continue;
    MarkovViolation v;
    v.variable = g.vertices()[x];
    v.value = r[x];
    for (std::size_t p : pa) v.parents.emplace_back(g.vertices()[p], r[p]);
    for (std::size_t y : extra) v.context.emplace_back(g.vertices()[y], r[y]);
    v.without_context = Probability(lhs);
    v.with_context = Probability(rhs);
    out.push_back(std::move(v));
  }
}

void pick_witness(MarkovReport& rep) {
  rep.holds = rep.violations.empty();
  Rational best(-1);
  for (const auto& v : rep.violations) {
    Rational d = v.with_context.value() - v.without_context.value();
    if (d < 0) d = -d;
    if (d > best) {
      best = d;
      rep.witness = v;
    }
  }
}

std::vector<std::size_t> context_vars(const CausalTeam& t, std::size_t x) {
  const Dag& g = t.graph();
  std::vector<std::size_t> out;
  for (const auto& n : g.nondescendants(g.vertices()[x])) {
    std::size_t i = g.index_of(n);
    if (!g.has_edge(i, x)) out.push_back(i);
  }
  return out;
}

}  // namespace

MarkovReport check_markov_axiom(const CausalTeam& t) {
  MarkovReport rep;
  if (t.empty()) return rep;
  for (std::size_t x = 0; x < t.graph().size(); ++x) {
    auto extra = context_vars(t, x);
    if (!extra.empty()) check_context(t, x, extra, rep.violations);
  }
  pick_witness(rep);
  return rep;
}

MarkovReport check_markov_condition(const CausalTeam& t, std::size_t max_vars) {
  if (t.domain().size() > max_vars)
    throw Error(ErrorKind::DomainTooLarge, std::to_string(t.domain().size()) + " variables exceed the cap of " +
                                               std::to_string(max_vars));
  MarkovReport rep;
  if (t.empty()) return rep;
  for (std::size_t x = 0; x < t.graph().size(); ++x) {
    auto nd = context_vars(t, x);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << nd.size()); ++mask) {
      std::vector<std::size_t> extra;
      for (std::size_t i = 0; i < nd.size(); ++i)
        if ((mask >> i) & 1) extra.push_back(nd[i]);
      check_context(t, x, extra, rep.violations);
    }
  }
  pick_witness(rep);
  return rep;
}

std::map<std::vector<Atom>, Probability> joint_from_exogenous(const CausalTeam& t) {
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "joint of the empty team");
  CausalTeam c = explicit_closure(t);
  if (!c.is_parametric()) throw Error(ErrorKind::NotParametric, "some function table is partial");
  const Dag& g = c.graph();
  const Signature& s = c.sig();
  auto order = g.topological_order();
  std::map<std::vector<Atom>, std::int64_t> counts;
  for (const auto& e : c.rows()) {
    auto r = proper_row(c, e.row);
    for (std::size_t v : order) {
      if (!g.is_endogenous(v)) continue;
      std::vector<Value> args;
      for (std::size_t p : g.parents(v)) args.emplace_back(r[p]);
      r[v] = s.functions[v]->lookup(args)->atom();
    }
    counts[r] += static_cast<std::int64_t>(e.count);
  }
  std::map<std::vector<Atom>, Probability> out;
  auto n = static_cast<std::int64_t>(c.rows().total());
  for (const auto& [k, w] : counts) out.emplace(k, Probability(Rational(w, n)));
  return out;
}

Probability joint_probability(const CausalTeam& t, const std::vector<Atom>& tuple) {
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "joint of the empty team");
  std::int64_t w = 0;
  for (const auto& e : t.rows())
    if (proper_row(t, e.row) == tuple) w += static_cast<std::int64_t>(e.count);
  return Probability(Rational(w, static_cast<std::int64_t>(t.rows().total())));
}

Rational markov_product(const CausalTeam& t, const std::vector<Atom>& tuple,
                        const std::vector<std::pair<std::string, Atom>>& intervened) {
  if (t.empty()) throw Error(ErrorKind::EmptyTeam, "product over the empty team");
  CausalTeam c = explicit_closure(t);
  const Dag& g = c.graph();
  std::vector<bool> skip(g.size(), false);
  for (const auto& [v, a] : intervened) {
    std::size_t i = g.index_of(v);
    if (!(tuple[i] == a)) return Rational(0);
    skip[i] = true;
  }
  std::vector<std::vector<Atom>> rows;
  std::vector<std::int64_t> counts;
  for (const auto& e : c.rows()) {
    rows.push_back(proper_row(c, e.row));
    counts.push_back(static_cast<std::int64_t>(e.count));
  }
  Rational prod(1);
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (skip[x]) continue;
    const auto& pa = g.parents(x);
    std::int64_t n_pa = 0, n_xpa = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      bool match = true;
      for (std::size_t p : pa) match = match && rows[i][p] == tuple[p];
      if (!match) continue;
      n_pa += counts[i];
      if (rows[i][x] == tuple[x]) n_xpa += counts[i];
    }
    if (n_pa > 0) {
      prod *= Rational(n_xpa, n_pa);
    } else {
      std::vector<Value> args;
      for (std::size_t p : pa) args.emplace_back(tuple[p]);
      const Value* f = c.sig().functions[x]->lookup(args);
      if (!f) throw Error(ErrorKind::NotParametric, "no entry for " + g.vertices()[x] + "(" + to_string(args) + ")");
      if (!(f->atom() == tuple[x])) return Rational(0);
    }
    if (prod == Rational(0)) return prod;
  }
  return prod;
}

std::vector<std::vector<Atom>> range_product(const CausalTeam& t, const std::vector<std::string>& vars) {
  std::vector<std::vector<Atom>> out{{}};
  for (const auto& v : vars) {
    const auto& r = t.sig().ranges[t.index_of(v)];
    std::vector<std::vector<Atom>> next;
    for (const auto& prefix : out)
      for (const auto& a : r) {
        auto p = prefix;
        p.push_back(a);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace ct
