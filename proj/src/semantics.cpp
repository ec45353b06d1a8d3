#include "causalteam/semantics.hpp"

#include <map>
#include <set>
#include <sstream>

#include "causalteam/intervene.hpp"

namespace ct {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void term_read(const std::string& var) {
  throw Error(ErrorKind::FormalTermEncountered, "column " + var + " holds a formal term");
}

const Value& proper_at(const CausalTeam& t, const Row& r, std::size_t i) {
  if (!r[i].is_proper()) term_read(t.domain()[i]);
  return r[i];
}

std::vector<std::size_t> indices(const CausalTeam& t, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(t.index_of(n));
  return out;
}

std::vector<Value> project(const Row& r, const std::vector<std::size_t>& idx) {
  std::vector<Value> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(r[i]);
  return out;
}

std::string describe(const CausalTeam& t) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& e : t.rows()) {
    os << (first ? "" : " ") << '(' << to_string(e.row) << ')';
    if (e.count > 1) os << 'x' << e.count;
    first = false;
  }
  os << '}';
  return os.str();
}

bool compare(const Rational& a, node::Rel rel, const Rational& b) {
  switch (rel) {
    case node::Rel::Le: return a <= b;
    case node::Rel::Ge: return a >= b;
    case node::Rel::Lt: return a < b;
    case node::Rel::Gt: return a > b;
  }
  return false;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalOptions& o) : o_(o) {}

  // t must already be explicit.
  bool eval(const CausalTeam& t, const Formula& f, std::string* witness = nullptr) const {
    return std::visit(
        overloaded{
            [&](const node::Eq& n) {
              std::size_t i = t.index_of(n.var);
              // Every row is read, so a term raises regardless of row order.
              bool all = true;
              for (const auto& e : t.rows()) all = (proper_at(t, e.row, i).atom() == n.value) && all;
              return all;
            },
            [&](const node::Neq& n) {
              std::size_t i = t.index_of(n.var);
              bool none = true;
              for (const auto& e : t.rows()) none = !(proper_at(t, e.row, i).atom() == n.value) && none;
              return none;
            },
            [&](const node::Dep& n) { return dependence(t, n.determinants, n.dependent); },
            [&](const node::NDep& n) { return !t.empty() && !dependence(t, n.determinants, n.dependent); },
            [&](const node::MargIndep& n) {
              std::size_t x = t.index_of(n.left), y = t.index_of(n.right);
              std::set<Value> xs, ys;
              std::set<std::pair<Value, Value>> pairs;
              for (const auto& e : t.rows()) {
                xs.insert(proper_at(t, e.row, x));
                ys.insert(proper_at(t, e.row, y));
                pairs.emplace(e.row[x], e.row[y]);
              }
              return pairs.size() == xs.size() * ys.size();
            },
            [&](const node::DualNeg& n) {
              for (const auto& e : t.rows())
                if (eval(singleton(t, e.row, e.count), *n.body)) return false;
              return true;
            },
            [&](const node::And& n) { return eval(t, *n.left) && eval(t, *n.right); },
            [&](const node::IntuitOr& n) { return eval(t, *n.left) || eval(t, *n.right); },
            [&](const node::TensorOr& n) { return split(t, *n.left, *n.right, witness); },
            [&](const node::Selective& n) {
              Rows kept;
              for (const auto& e : t.rows()) {
                auto h = classical_holds(t.sig(), e.row, *n.antecedent);
                if (!h) throw Error(ErrorKind::FormalTermEncountered, "selection by " + to_string(*n.antecedent) + " reads a term");
                if (*h) kept.add(e.row, e.count);
              }
              return eval(t.with_rows(std::move(kept)), *n.consequent);
            },
            [&](const node::Counterfactual& n) {
              if (!consistent(n.antecedent)) return true;
              return eval(do_intervention(t, n.antecedent), *n.consequent);
            },
            [&](const node::ProbCmp& n) {
              if (t.empty()) return false;
              Rational lhs = probability(t, *n.event);
              Rational rhs = n.other ? probability(t, *n.other) : n.constant;
              return compare(lhs, n.rel, rhs);
            },
        },
        f.node());
  }

  Rational probability(const CausalTeam& t, const Formula& chi) const {
    std::int64_t hit = 0;
    for (const auto& e : t.rows())
      if (eval(singleton(t, e.row, e.count), chi)) hit += static_cast<std::int64_t>(e.count);
    return Rational(hit, static_cast<std::int64_t>(t.rows().total()));
  }

 private:
  const EvalOptions& o_;

  bool dependence(const CausalTeam& t, const std::vector<std::string>& xs, const std::string& y) const {
    auto xi = indices(t, xs);
    std::size_t yi = t.index_of(y);
    std::map<std::vector<Value>, Value> seen;
    bool ok = true;
    for (const auto& e : t.rows()) {
      for (std::size_t i : xi) proper_at(t, e.row, i);
      const Value& yv = proper_at(t, e.row, yi);
      auto [it, fresh] = seen.emplace(project(e.row, xi), yv);
      ok = ok && (fresh || it->second == yv);
    }
    return ok;
  }

  bool split(const CausalTeam& t, const Formula& l, const Formula& r, std::string* witness) const {
    const auto& rows = t.rows().entries();
    if (o_.split == SplitStrategy::Auto && is_flat(l) && is_flat(r)) {
      for (const auto& e : rows) {
        CausalTeam s = singleton(t, e.row, e.count);
        if (!eval(s, l) && !eval(s, r)) return false;
      }
      if (witness) *witness = "each row satisfies a disjunct";
      return true;
    }
    if (o_.split != SplitStrategy::Covers && is_downward_closed(l) && is_downward_closed(r)) {
      std::size_t n = rows.size();
      if (n > o_.partition_row_cap)
        throw Error(ErrorKind::TeamTooLargeForSplit, std::to_string(n) + " rows exceed the partition cap");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Rows a, b;
        for (std::size_t i = 0; i < n; ++i)
          ((mask >> i) & 1 ? a : b).add(rows[i].row, rows[i].count);
        CausalTeam ta = t.with_rows(std::move(a)), tb = t.with_rows(std::move(b));
        if (eval(ta, l) && eval(tb, r)) {
          if (witness) *witness = "left " + describe(ta) + " right " + describe(tb);
          return true;
        }
      }
      return false;
    }
    if (t.rows().total() > o_.cover_row_cap)
      throw Error(ErrorKind::TeamTooLargeForSplit,
                  std::to_string(t.rows().total()) + " rows exceed the cover cap of " + std::to_string(o_.cover_row_cap));
    // Per distinct row with multiplicity c, the left side takes a copies and
    // the right side b copies, a + b >= c.
    std::vector<std::size_t> a(rows.size(), 0), b(rows.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) b[i] = rows[i].count;
    while (true) {
      Rows ra, rb;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        ra.add(rows[i].row, a[i]);
        rb.add(rows[i].row, b[i]);
      }
      CausalTeam ta = t.with_rows(std::move(ra)), tb = t.with_rows(std::move(rb));
      if (eval(ta, l) && eval(tb, r)) {
        if (witness) *witness = "left " + describe(ta) + " right " + describe(tb);
        return true;
      }
      // next (a,b) in odometer order
      std::size_t i = 0;
      for (; i < rows.size(); ++i) {
        std::size_t c = rows[i].count;
        if (b[i] < c) {
          ++b[i];
          break;
        }
        if (a[i] < c) {
          ++a[i];
          b[i] = c - a[i];
          break;
        }
        a[i] = 0;
        b[i] = c;
      }
      if (i == rows.size()) return false;
    }
  }
};

// ---- falsifiability -------------------------------------------------------

class Falsifier {
 public:
  explicit Falsifier(const EvalOptions& o) : o_(o) {}

  bool eval(const CausalTeam& t, const Formula& f) const {
    return std::visit(
        overloaded{
            [&](const node::Eq& n) {
              std::size_t i = t.index_of(n.var);
              for (const auto& e : t.rows())
                if (e.row[i].is_proper() && !(e.row[i].atom() == n.value)) return true;
              return false;
            },
            [&](const node::Neq& n) {
              std::size_t i = t.index_of(n.var);
              for (const auto& e : t.rows())
                if (e.row[i].is_proper() && e.row[i].atom() == n.value) return true;
              return false;
            },
            [&](const node::Dep& n) {
              auto xi = indices(t, n.determinants);
              std::size_t yi = t.index_of(n.dependent);
              std::map<std::vector<Value>, Value> seen;
              for (const auto& e : t.rows()) {
                if (!e.row[yi].is_proper()) continue;
                auto [it, fresh] = seen.emplace(project(e.row, xi), e.row[yi]);
                if (!fresh && !(it->second == e.row[yi])) return true;
              }
              return false;
            },
            [&](const node::And& n) { return eval(t, *n.left) || eval(t, *n.right); },
            [&](const node::TensorOr& n) {
              // Falsifiability is preserved under supersets, so partitions
              // stand in for all covers.
              const auto& rows = t.rows().entries();
              std::size_t k = rows.size();
              if (k > o_.partition_row_cap)
                throw Error(ErrorKind::TeamTooLargeForSplit, std::to_string(k) + " rows exceed the partition cap");
              for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
                Rows a, b;
                for (std::size_t i = 0; i < k; ++i) ((mask >> i) & 1 ? a : b).add(rows[i].row, rows[i].count);
                if (!eval(t.with_rows(std::move(a)), *n.left) && !eval(t.with_rows(std::move(b)), *n.right))
                  return false;
              }
              return true;
            },
            [&](const node::Selective& n) {
              VarSet vs = variables(*n.antecedent);
              std::vector<std::size_t> vi;
              for (const auto& v : vs) vi.push_back(t.index_of(v));
              Rows kept;
              for (const auto& e : t.rows()) {
                bool term = false;
                for (std::size_t i : vi) term = term || !e.row[i].is_proper();
                // Rows whose antecedent reads a term might not be selected at all, so
                // they cannot witness a falsification.
                if (!term && *classical_holds(t.sig(), e.row, *n.antecedent)) kept.add(e.row, e.count);
              }
              return eval(t.with_rows(std::move(kept)), *n.consequent);
            },
            [&](const node::Counterfactual& n) {
              if (!consistent(n.antecedent)) return false;
              return eval(do_intervention(t, n.antecedent), *n.consequent);
            },
            [&](const auto&) -> bool {
              throw Error(ErrorKind::UnsupportedConnective, "falsifiability is undefined for " + to_string(f));
            },
        },
        f.node());
  }

 private:
  const EvalOptions& o_;
};

// ---- admissibility --------------------------------------------------------

void flatten(const Formula& f, bool is_or, std::vector<const Formula*>& out) {
  if (is_or) {
    if (auto n = f.as<node::TensorOr>()) {
      flatten(*n->left, true, out);
      flatten(*n->right, true, out);
      return;
    }
  } else if (auto n = f.as<node::And>()) {
    flatten(*n->left, false, out);
    flatten(*n->right, false, out);
    return;
  }
  out.push_back(&f);
}

struct Literal {
  std::size_t var;
  Atom value;
  bool positive;
};

bool literal_admits(const Row& r, const Literal& l) {
  const Value& v = r[l.var];
  if (!v.is_proper()) return true;
  return (v.atom() == l.value) == l.positive;
}

bool clause_admits(const Row& r, const std::vector<Literal>& clause) {
  for (const auto& l : clause)
    if (!literal_admits(r, l)) return false;
  for (const auto& a : clause) {
    if (!a.positive) continue;
    for (const auto& b : clause) {
      if (&a == &b) continue;
      bool clash = b.positive ? !(a.value == b.value) : a.value == b.value;
      if (clash && r[a.var] == r[b.var]) return false;
    }
  }
  return true;
}

}  // namespace

Verdict satisfies(const CausalTeam& t, const Formula& phi, const EvalOptions& opts) {
  Evaluator ev(opts);
  Verdict v;
  v.satisfied = ev.eval(explicit_closure(t), phi, &v.witness);
  return v;
}

bool satisfies_falsifiable(const CausalTeam& t, const Formula& phi, const EvalOptions& opts) {
  return Falsifier(opts).eval(explicit_closure(t), phi);
}

bool satisfies_admissible(const CausalTeam& t, const Formula& phi) {
  if (auto n = phi.as<node::Dep>()) {
    auto xi = indices(t, n->determinants);
    std::size_t yi = t.index_of(n->dependent);
    std::map<std::vector<Value>, Value> seen;
    for (const auto& e : t.rows()) {
      if (!e.row[yi].is_proper()) continue;
      auto [it, fresh] = seen.emplace(project(e.row, xi), e.row[yi]);
      if (!fresh && !(it->second == e.row[yi])) return false;
    }
    return true;
  }
  std::vector<const Formula*> disjuncts;
  flatten(phi, true, disjuncts);
  std::vector<std::vector<Literal>> clauses;
  for (const Formula* d : disjuncts) {
    std::vector<const Formula*> lits;
    flatten(*d, false, lits);
    std::vector<Literal> clause;
    VarSet seen;
    for (const Formula* l : lits) {
      Literal lit;
      if (auto e = l->as<node::Eq>()) lit = {t.index_of(e->var), e->value, true};
      else if (auto e = l->as<node::Neq>()) lit = {t.index_of(e->var), e->value, false};
      else throw Error(ErrorKind::NotSupportedShape, "admissibility is defined for literals, dep and DNF: " + to_string(phi));
      if (!seen.insert(t.domain()[lit.var]).second)
        throw Error(ErrorKind::NotSupportedShape, "a clause mentions " + t.domain()[lit.var] + " twice");
      clause.push_back(lit);
    }
    clauses.push_back(std::move(clause));
  }
  for (const auto& e : t.rows()) {
    bool ok = false;
    for (const auto& c : clauses) ok = ok || clause_admits(e.row, c);
    if (!ok) return false;
  }
  return true;
}

std::optional<Rational> team_probability(const CausalTeam& t, const Formula& chi, const EvalOptions& opts) {
  if (t.empty()) return std::nullopt;
  return Evaluator(opts).probability(explicit_closure(t), chi);
}

}  // namespace ct
