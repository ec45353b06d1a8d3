#include "causalteam/generate.hpp"

#include <algorithm>
#include <map>

namespace ct {

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
  return xs[pick(rng, 0, xs.size() - 1)];
}

}  // namespace

CausalTeam random_team(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  return random_team(cfg, rng);
}

CausalTeam random_team(const GeneratorConfig& cfg, Rng& rng) {
  std::size_t n = pick(rng, cfg.min_vars, cfg.max_vars);
  std::vector<std::string> names;
  std::vector<std::size_t> size(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::string(1, static_cast<char>('A' + i)));
    size[i] = pick(rng, cfg.min_range, cfg.max_range);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng, cfg.edge_probability)) parents[perm[b]].push_back(perm[a]);
  for (auto& p : parents) std::sort(p.begin(), p.end());

  // Hidden total functions; the team may only see part of them.
  std::vector<std::map<std::vector<std::int64_t>, std::int64_t>> hidden(n);
  TeamSpec spec;
  spec.mode = cfg.multiteam ? Mode::Multi : Mode::Set;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Atom> r;
    for (std::size_t k = 0; k < size[i]; ++k) r.emplace_back(static_cast<std::int64_t>(k));
    spec.variables.emplace_back(names[i], r);
    for (std::size_t p : parents[i]) spec.edges.emplace_back(names[p], names[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i].empty()) continue;
    std::vector<std::vector<std::int64_t>> tuples{{}};
    for (std::size_t p : parents[i]) {
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& t : tuples)
        for (std::size_t k = 0; k < size[p]; ++k) {
          auto u = t;
          u.push_back(static_cast<std::int64_t>(k));
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    auto& table = spec.functions[names[i]];
    for (const auto& t : tuples) {
      auto v = static_cast<std::int64_t>(pick(rng, 0, size[i] - 1));
      hidden[i][t] = v;
      if (cfg.parametric || coin(rng, 0.5)) {
        std::vector<Value> args(t.begin(), t.end());
        table.emplace_back(std::move(args), Value(v));
      }
    }
  }

  std::vector<std::size_t> order;  // topological: the permutation itself
  order = perm;
  std::vector<std::size_t> exo;
  for (std::size_t i : order)
    if (parents[i].empty()) exo.push_back(i);

  auto complete = [&](std::vector<std::int64_t> row) {
    for (std::size_t i : order) {
      if (parents[i].empty()) continue;
      std::vector<std::int64_t> args;
      for (std::size_t p : parents[i]) args.push_back(row[p]);
      row[i] = hidden[i][args];
    }
    std::map<std::string, Value> values;
    for (std::size_t i = 0; i < n; ++i) values.emplace(names[i], Value(row[i]));
    return values;
  };

  if (cfg.independent_exogenous) {
    std::vector<std::vector<std::size_t>> w(n);
    for (std::size_t i : exo)
      for (std::size_t k = 0; k < size[i]; ++k) w[i].push_back(cfg.multiteam ? pick(rng, 1, 2) : 1);
    std::vector<std::int64_t> row(n, 0);
    while (true) {
      std::size_t count = 1;
      for (std::size_t i : exo) count *= w[i][static_cast<std::size_t>(row[i])];
      spec.rows.emplace_back(complete(row), count);
      std::size_t j = 0;
      for (; j < exo.size(); ++j) {
        if (++row[exo[j]] < static_cast<std::int64_t>(size[exo[j]])) break;
        row[exo[j]] = 0;
      }
      if (j == exo.size()) break;
    }
  } else {
    std::size_t m = pick(rng, cfg.min_rows, cfg.max_rows);
    std::map<std::map<std::string, Value>, std::size_t> seen;
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<std::int64_t> row(n, 0);
      for (std::size_t i : exo) row[i] = static_cast<std::int64_t>(pick(rng, 0, size[i] - 1));
      auto values = complete(row);
      std::size_t count = cfg.multiteam ? pick(rng, 1, 3) : 1;
      if (!cfg.multiteam && seen.count(values)) continue;
      seen[values] = 1;
      spec.rows.emplace_back(std::move(values), count);
    }
  }
  return build_team(spec, true);
}

CausalTeam random_subteam(const CausalTeam& t, Rng& rng) {
  CausalTeam c = explicit_closure(t);
  Rows kept;
  for (const auto& e : c.rows())
    if (coin(rng, 0.5)) kept.add(e.row, e.count);
  return c.with_rows(std::move(kept));
}

std::vector<Binding> random_bindings(const CausalTeam& t, Rng& rng, std::size_t max_vars) {
  std::vector<std::size_t> idx(t.domain().size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::size_t k = pick(rng, 1, std::min(max_vars, idx.size()));
  std::vector<Binding> out;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t i = idx[j];
    out.push_back({t.domain()[i], choose(rng, t.sig().ranges[i])});
  }
  return out;
}

namespace {

struct FormulaGen {
  const CausalTeam& t;
  const FormulaConfig& cfg;
  Rng& rng;

  FormulaPtr literal() {
    std::size_t i = pick(rng, 0, t.domain().size() - 1);
    const Atom& a = choose(rng, t.sig().ranges[i]);
    return coin(rng, 0.5) ? eq(t.domain()[i], a) : neq(t.domain()[i], a);
  }

  FormulaPtr dependence() {
    const auto& dom = t.domain();
    std::string y = choose(rng, dom);
    std::vector<std::string> xs;
    for (const auto& v : dom)
      if (v != y && coin(rng, 0.35)) xs.push_back(v);
    return dep(xs, y);
  }

  FormulaPtr classical(int depth) {
    if (depth <= 0 || coin(rng, 0.4)) return literal();
    FormulaPtr a = classical(depth - 1), b = classical(depth - 1);
    return coin(rng, 0.5) ? conj(a, b) : tensor_or(a, b);
  }

  std::vector<Binding> antecedent() {
    auto bs = random_bindings(t, rng, 2);
    if (coin(rng, cfg.inconsistent_antecedent)) {
      std::size_t i = t.index_of(bs.front().var);
      const auto& r = t.sig().ranges[i];
      for (const auto& a : r)
        if (!(a == bs.front().value)) {
          bs.push_back({bs.front().var, a});
          break;
        }
    }
    return bs;
  }

  FormulaPtr gen(int depth) {
    FormulaShape s = cfg.shape;
    if (s == FormulaShape::Classical) return classical(depth);
    if (depth <= 0 || coin(rng, 0.3)) {
      if (s == FormulaShape::CD && coin(rng, 0.3)) return dependence();
      return literal();
    }
    std::vector<int> ops = {0, 1, 2};  // and, or, counterfactual
    if (s != FormulaShape::C) ops.push_back(3);     // selective
    if (s == FormulaShape::CO_neg) ops.push_back(4);  // dual negation
    switch (choose(rng, ops)) {
      case 0: return conj(gen(depth - 1), gen(depth - 1));
      case 1: return tensor_or(gen(depth - 1), gen(depth - 1));
      case 2: return counterfactual(antecedent(), gen(depth - 1));
      case 3: return selective(classical(std::min(depth - 1, 2)), gen(depth - 1));
      default: return dual_neg(gen(depth - 1));
    }
  }
};

}  // namespace

FormulaPtr random_formula(const CausalTeam& t, const FormulaConfig& cfg, Rng& rng) {
  FormulaGen g{t, cfg, rng};
  return g.gen(cfg.max_depth);
}

}  // namespace ct
