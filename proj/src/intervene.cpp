#include "causalteam/intervene.hpp"

#include <algorithm>

namespace ct {

CausalTeam do_intervention(const CausalTeam& t, const std::vector<Binding>& spec) {
  if (!consistent(spec)) throw Error(ErrorKind::InconsistentSpec, "variable bound to two values");
  const Signature& s0 = t.sig();
  const Dag& g = s0.graph;

  std::vector<std::pair<std::size_t, Atom>> fixed;
  VarSet xs;
  for (const auto& b : spec) {
    std::size_t i = g.index_of(b.var);
    if (!s0.in_range(i, b.value))
      throw Error(ErrorKind::RangeViolation, b.var + "=" + b.value.to_string() + " outside its range");
    if (xs.insert(b.var).second) fixed.emplace_back(i, b.value);
  }

  CausalTeam closed = explicit_closure(t);
  const Signature& s = closed.sig();

  // Update order: by evaluation distance, then topological position, which
  // keeps every parent ahead of its child.
  std::vector<int> dist = eval_distances(g, xs);
  std::vector<std::size_t> order;
  for (std::size_t v : g.topological_order())
    if (dist[v] > 0) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  auto sig = std::make_shared<Signature>();
  sig->graph = remove_incoming(g, xs);
  sig->ranges = s.ranges;
  sig->functions = s.functions;
  for (const auto& [i, a] : fixed) sig->functions[i] = nullptr;

  Rows out;
  std::vector<Value> args;
  for (const auto& e : closed.rows()) {
    Row r = e.row;
    for (const auto& [i, a] : fixed) r[i] = Value(a);
    for (std::size_t z : order) {
      args.clear();
      for (std::size_t p : g.parents(z)) args.push_back(r[p]);
      const Value* hit = all_proper(args) ? s.functions[z]->lookup(args) : nullptr;
      r[z] = hit ? *hit : Value::term("f_" + g.vertices()[z], args);
    }
    out.add(std::move(r), e.count);
  }
  return CausalTeam(std::move(sig), std::move(out), t.mode());
}

}  // namespace ct
