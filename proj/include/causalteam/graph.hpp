#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ct {

using VarSet = std::set<std::string>;

// Directed graph over a fixed, alphabetically sorted vertex list.
class Dag {
 public:
  Dag() = default;
  Dag(std::vector<std::string> vertices, const std::vector<std::pair<std::string, std::string>>& edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t index_of(const std::string& v) const;  // throws UnknownVariable
  bool contains(const std::string& v) const;

  bool has_edge(std::size_t from, std::size_t to) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  std::vector<std::pair<std::string, std::string>> edges() const;

  // Indices in ascending (hence alphabetical) order.
  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_[v]; }
  std::vector<std::string> parent_names(const std::string& v) const;
  bool is_endogenous(std::size_t v) const { return !parents_[v].empty(); }
  VarSet endogenous() const;
  VarSet exogenous() const;

  bool is_acyclic() const;
  // Topological order, ties broken by vertex index. Requires acyclicity.
  std::vector<std::size_t> topological_order() const;

  VarSet descendants(const VarSet& xs) const;  // strict: excludes xs unless reachable
  VarSet nondescendants(const std::string& x) const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

Dag remove_incoming(const Dag& g, const VarSet& xs);

// Longest path length in G with arrows into xs removed, from some member of
// xs to y. 0 if y is in xs, -1 if unreachable.
int eval_distance(const Dag& g, const VarSet& xs, const std::string& y);
std::vector<int> eval_distances(const Dag& g, const VarSet& xs);

}  // namespace ct
