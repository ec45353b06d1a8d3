#include "causalteam/graph.hpp"

#include <algorithm>
#include <queue>

#include "causalteam/value.hpp"

namespace ct {

Dag::Dag(std::vector<std::string> vertices,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw Error(ErrorKind::SchemaError, "duplicate vertex");
  parents_.assign(vertices_.size(), {});
  children_.assign(vertices_.size(), {});
  for (const auto& [a, b] : edges) {
    std::size_t i = index_of(a), j = index_of(b);
    if (i == j) throw Error(ErrorKind::CyclicGraph, "self loop on " + a);
    if (has_edge(i, j)) continue;
    parents_[j].push_back(i);
    children_[i].push_back(j);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
  if (!is_acyclic()) throw Error(ErrorKind::CyclicGraph, "the graph has a directed cycle");
}

std::size_t Dag::index_of(const std::string& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) throw Error(ErrorKind::UnknownVariable, v);
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool Dag::contains(const std::string& v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  const auto& p = parents_[to];
  return std::find(p.begin(), p.end(), from) != p.end();
}

bool Dag::has_edge(const std::string& from, const std::string& to) const {
  return has_edge(index_of(from), index_of(to));
}

std::vector<std::pair<std::string, std::string>> Dag::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j : children_[i]) out.emplace_back(vertices_[i], vertices_[j]);
  return out;
}

std::vector<std::string> Dag::parent_names(const std::string& v) const {
  std::vector<std::string> out;
  for (std::size_t p : parents_[index_of(v)]) out.push_back(vertices_[p]);
  return out;
}

VarSet Dag::endogenous() const {
  VarSet s;
  for (std::size_t i = 0; i < size(); ++i)
    if (is_endogenous(i)) s.insert(vertices_[i]);
  return s;
}

VarSet Dag::exogenous() const {
  VarSet s;
  for (std::size_t i = 0; i < size(); ++i)
    if (!is_endogenous(i)) s.insert(vertices_[i]);
  return s;
}

std::vector<std::size_t> Dag::topological_order() const {
  std::vector<std::size_t> indeg(size());
  for (std::size_t i = 0; i < size(); ++i) indeg[i] = parents_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t c : children_[v])
      if (--indeg[c] == 0) ready.push(c);
  }
  return order;
}

bool Dag::is_acyclic() const { return topological_order().size() == size(); }

VarSet Dag::descendants(const VarSet& xs) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack;
  for (const auto& x : xs)
    for (std::size_t c : children_[index_of(x)]) stack.push_back(c);
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    for (std::size_t c : children_[v]) stack.push_back(c);
  }
  VarSet out;
  for (std::size_t i = 0; i < size(); ++i)
    if (seen[i]) out.insert(vertices_[i]);
  return out;
}

VarSet Dag::nondescendants(const std::string& x) const {
  VarSet desc = descendants({x});
  VarSet out;
  for (const auto& v : vertices_)
    if (v != x && !desc.count(v)) out.insert(v);
  return out;
}

Dag remove_incoming(const Dag& g, const VarSet& xs) {
  for (const auto& x : xs) g.index_of(x);
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto& e : g.edges())
    if (!xs.count(e.second)) kept.push_back(e);
  return Dag(g.vertices(), kept);
}

std::vector<int> eval_distances(const Dag& g, const VarSet& xs) {
  std::vector<int> d(g.size(), -1);
  std::vector<bool> in_x(g.size(), false);
  for (const auto& x : xs) {
    std::size_t i = g.index_of(x);
    in_x[i] = true;
    d[i] = 0;
  }
  for (std::size_t v : g.topological_order()) {
    if (in_x[v]) continue;
    for (std::size_t p : g.parents(v))
      if (d[p] >= 0) d[v] = std::max(d[v], d[p] + 1);
  }
  return d;
}

int eval_distance(const Dag& g, const VarSet& xs, const std::string& y) {
  return eval_distances(g, xs)[g.index_of(y)];
}

}  // namespace ct
