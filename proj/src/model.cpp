#include "causalteam/model.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ct {

using nlohmann::json;
using nlohmann::ordered_json;

const Value* FunctionTable::lookup(const std::vector<Value>& args) const {
  auto it = entries.find(args);
  return it == entries.end() ? nullptr : &it->second;
}

bool Signature::in_range(std::size_t var, const Atom& a) const {
  const auto& r = ranges[var];
  return std::find(r.begin(), r.end(), a) != r.end();
}

bool operator==(const Signature& a, const Signature& b) {
  if (!(a.graph == b.graph) || a.ranges != b.ranges) return false;
  if (a.functions.size() != b.functions.size()) return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (!f || !g) {
      if (f || g) return false;
      continue;
    }
    if (f != g && !(*f == *g)) return false;
  }
  return true;
}

void Rows::add(Row r, std::size_t count) {
  if (count == 0) return;
  total_ += count;
  auto it = index_.find(r);
  if (it != index_.end()) {
    entries_[it->second].count += count;
    return;
  }
  index_.emplace(r, entries_.size());
  entries_.push_back({std::move(r), count});
}

bool operator==(const Rows& a, const Rows& b) {
  if (a.total_ != b.total_ || a.entries_.size() != b.entries_.size()) return false;
  for (const auto& e : a.entries_) {
    auto it = b.index_.find(e.row);
    if (it == b.index_.end() || b.entries_[it->second].count != e.count) return false;
  }
  return true;
}

CausalTeam::CausalTeam(SignaturePtr sig, Rows rows, Mode mode)
    : sig_(std::move(sig)), rows_(std::move(rows)), mode_(mode) {
  if (mode_ == Mode::Set) {
    bool clamp = false;
    for (const auto& e : rows_)
      if (e.count != 1) clamp = true;
    if (clamp) {
      Rows r;
      for (const auto& e : rows_) r.add(e.row, 1);
      rows_ = std::move(r);
    }
  }
}

CausalTeam CausalTeam::with_rows(Rows rows) const { return CausalTeam(sig_, std::move(rows), mode_); }

bool operator==(const CausalTeam& a, const CausalTeam& b) {
  if (a.mode_ != b.mode_) return false;
  if (a.sig_ != b.sig_ && !(*a.sig_ == *b.sig_)) return false;
  return a.rows_ == b.rows_;
}

void CausalTeam::validate() const {
  const Signature& s = *sig_;
  const Dag& g = s.graph;
  for (const auto& v : g.vertices())
    if (v == "Key") throw Error(ErrorKind::SchemaError, "variable name 'Key' is reserved");
  if (!g.is_acyclic()) throw Error(ErrorKind::CyclicGraph, "graph has a cycle");
  if (s.ranges.size() != g.size() || s.functions.size() != g.size())
    throw Error(ErrorKind::SchemaError, "signature size mismatch");

  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.is_endogenous(v)) {
      if (s.functions[v]) throw Error(ErrorKind::SchemaError, "function given for exogenous " + g.vertices()[v]);
      continue;
    }
    if (!s.functions[v]) throw Error(ErrorKind::SchemaError, "missing function table for " + g.vertices()[v]);
    if (s.functions[v]->parents != g.parent_names(g.vertices()[v]))
      throw Error(ErrorKind::SchemaError, "parents of " + g.vertices()[v] + " must list graph parents alphabetically");
    const auto& pa = g.parents(v);
    for (const auto& [args, val] : s.functions[v]->entries) {
      if (args.size() != pa.size()) throw Error(ErrorKind::SchemaError, "arity mismatch in table of " + g.vertices()[v]);
      for (std::size_t k = 0; k < args.size(); ++k)
        if (args[k].is_proper() && !s.in_range(pa[k], args[k].atom()))
          throw Error(ErrorKind::RangeViolation, "table of " + g.vertices()[v] + " uses " + args[k].to_string() +
                                                     " outside Ran(" + g.vertices()[pa[k]] + ")");
      if (val.is_proper() && !s.in_range(v, val.atom()))
        throw Error(ErrorKind::RangeViolation, "table of " + g.vertices()[v] + " yields " + val.to_string() +
                                                   " outside its range");
    }
  }

  for (const auto& e : rows_) {
    if (e.row.size() != g.size()) throw Error(ErrorKind::SchemaError, "row width mismatch");
    for (std::size_t v = 0; v < g.size(); ++v)
      if (e.row[v].is_proper() && !s.in_range(v, e.row[v].atom()))
        throw Error(ErrorKind::RangeViolation,
                    g.vertices()[v] + "=" + e.row[v].to_string() + " outside its range");
  }

  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.is_endogenous(v)) continue;
    const auto& pa = g.parents(v);
    std::map<std::vector<Value>, Value> seen;
    for (const auto& e : rows_) {
      std::vector<Value> args;
      for (std::size_t p : pa) args.push_back(e.row[p]);
      if (!all_proper(args) || !e.row[v].is_proper()) continue;
      auto [it, fresh] = seen.emplace(args, e.row[v]);
      if (!fresh && !(it->second == e.row[v]))
        throw Error(ErrorKind::ConditionBViolation, "rows disagree on " + g.vertices()[v] + " for parents (" +
                                                        to_string(args) + ")");
      if (const Value* fv = s.functions[v]->lookup(args); fv && !(*fv == e.row[v]))
        throw Error(ErrorKind::ConditionCViolation, g.vertices()[v] + "=" + e.row[v].to_string() +
                                                        " but table gives " + fv->to_string() + " for (" +
                                                        to_string(args) + ")");
    }
  }
}

bool CausalTeam::is_parametric() const {
  const Signature& s = *sig_;
  for (std::size_t v = 0; v < s.graph.size(); ++v) {
    if (!s.graph.is_endogenous(v)) continue;
    const auto& pa = s.graph.parents(v);
    std::size_t need = 1;
    for (std::size_t p : pa) need *= s.ranges[p].size();
    std::size_t have = 0;
    for (const auto& [args, val] : s.functions[v]->entries) {
      if (!all_proper(args) || !val.is_proper()) continue;
      ++have;
    }
    if (have < need) return false;
  }
  return true;
}

bool CausalTeam::has_terms() const {
  for (const auto& e : rows_)
    if (!all_proper(e.row)) return true;
  return false;
}

std::vector<Value> CausalTeam::column(const std::string& var) const {
  std::size_t i = index_of(var);
  std::vector<Value> out;
  for (const auto& e : rows_) out.push_back(e.row[i]);
  return out;
}

CausalTeam build_team(const TeamSpec& spec, bool validate) {
  auto sig = std::make_shared<Signature>();
  std::vector<std::string> names;
  for (const auto& [n, r] : spec.variables) names.push_back(n);
  sig->graph = Dag(names, spec.edges);
  const Dag& g = sig->graph;
  sig->ranges.assign(g.size(), {});
  sig->functions.assign(g.size(), nullptr);
  for (const auto& [n, r] : spec.variables) {
    if (r.empty()) throw Error(ErrorKind::SchemaError, "empty range for " + n);
    auto sorted = r;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::SchemaError, "duplicate range value for " + n);
    sig->ranges[g.index_of(n)] = r;
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.is_endogenous(v)) continue;
    auto f = std::make_shared<FunctionTable>();
    f->parents = g.parent_names(g.vertices()[v]);
    sig->functions[v] = f;
  }
  for (const auto& [n, entries] : spec.functions) {
    std::size_t v = g.index_of(n);
    if (!g.is_endogenous(v)) throw Error(ErrorKind::SchemaError, "function given for exogenous " + n);
    auto f = std::make_shared<FunctionTable>(*sig->functions[v]);
    for (const auto& [args, val] : entries) {
      if (args.size() != f->parents.size())
        throw Error(ErrorKind::SchemaError, "arity mismatch in table of " + n);
      auto [it, fresh] = f->entries.emplace(args, val);
      if (!fresh && !(it->second == val))
        throw Error(ErrorKind::SchemaError, "table of " + n + " maps (" + to_string(args) + ") twice");
    }
    sig->functions[v] = f;
  }
  Rows rows;
  for (const auto& [values, count] : spec.rows) {
    if (spec.mode == Mode::Set && count != 1)
      throw Error(ErrorKind::SchemaError, "count must be 1 in set mode");
    if (count == 0) throw Error(ErrorKind::SchemaError, "count must be positive");
    Row r(g.size());
    for (const auto& [n, val] : values) {
      if (!g.contains(n)) throw Error(ErrorKind::SchemaError, "row assigns unknown variable " + n);
      r[g.index_of(n)] = val;
    }
    if (values.size() != g.size()) throw Error(ErrorKind::SchemaError, "row does not assign every variable");
    rows.add(std::move(r), count);
  }
  CausalTeam t(std::move(sig), std::move(rows), spec.mode);
  if (validate) t.validate();
  return t;
}

// ---- JSON -----------------------------------------------------------------

namespace {

Atom atom_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Atom(j.get<std::int64_t>());
  if (j.is_string()) return Atom(j.get<std::string>());
  if (j.is_object() && j.contains("term"))
    throw Error(ErrorKind::SchemaError, "formal terms are not accepted in input (" + where + ")");
  throw Error(ErrorKind::SchemaError, "expected an integer or string at " + where);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::SchemaError, std::string("missing '") + key + "' in " + where);
  return j.at(key);
}

ordered_json atom_to_json(const Atom& a) {
  if (a.is_int()) return a.as_int();
  return a.as_string();
}

ordered_json value_to_json(const Value& v) {
  if (v.is_proper()) return atom_to_json(v.atom());
  ordered_json args = ordered_json::array();
  for (const auto& a : v.as_term().args) args.push_back(value_to_json(a));
  ordered_json o;
  o["term"] = v.as_term().symbol;
  o["args"] = args;
  return o;
}

}  // namespace

CausalTeam load_team_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "top level must be an object");
  TeamSpec spec;
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    if (m == "set") spec.mode = Mode::Set;
    else if (m == "multi") spec.mode = Mode::Multi;
    else throw Error(ErrorKind::SchemaError, "mode must be \"set\" or \"multi\"");
  }
  const json& vars = field(j, "variables", "team");
  if (!vars.is_array()) throw Error(ErrorKind::SchemaError, "variables must be an array");
  for (const auto& v : vars) {
    const json& name = field(v, "name", "variable");
    if (!name.is_string()) throw Error(ErrorKind::SchemaError, "variable name must be a string");
    if (name == "Key") throw Error(ErrorKind::SchemaError, "variable name 'Key' is reserved");
    const json& range = field(v, "range", "variable " + name.get<std::string>());
    if (!range.is_array()) throw Error(ErrorKind::SchemaError, "range must be an array");
    std::vector<Atom> r;
    for (const auto& a : range) r.push_back(atom_from_json(a, "range of " + name.get<std::string>()));
    spec.variables.emplace_back(name.get<std::string>(), std::move(r));
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw Error(ErrorKind::SchemaError, "edge must be a pair of names");
      spec.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  std::map<std::string, std::vector<std::string>> declared_parents;
  if (j.contains("functions")) {
    const json& fs = j.at("functions");
    if (!fs.is_object()) throw Error(ErrorKind::SchemaError, "functions must be an object");
    for (const auto& [name, f] : fs.items()) {
      std::vector<std::string> parents;
      for (const auto& p : field(f, "parents", "function " + name)) {
        if (!p.is_string()) throw Error(ErrorKind::SchemaError, "parent names must be strings");
        parents.push_back(p.get<std::string>());
      }
      declared_parents[name] = parents;
      auto& entries = spec.functions[name];
      if (f.contains("table")) {
        for (const auto& row : f.at("table")) {
          std::vector<Value> args;
          for (const auto& a : field(row, "args", "table of " + name)) args.emplace_back(atom_from_json(a, "table of " + name));
          entries.emplace_back(std::move(args), Value(atom_from_json(field(row, "value", "table of " + name), "table of " + name)));
        }
      }
    }
  }
  const json& rows = field(j, "rows", "team");
  if (!rows.is_array()) throw Error(ErrorKind::SchemaError, "rows must be an array");
  for (const auto& r : rows) {
    std::map<std::string, Value> values;
    for (const auto& [name, v] : field(r, "values", "row").items()) values.emplace(name, Value(atom_from_json(v, "row")));
    std::size_t count = 1;
    if (r.contains("count")) {
      if (!r.at("count").is_number_unsigned()) throw Error(ErrorKind::SchemaError, "count must be a positive integer");
      count = r.at("count").get<std::size_t>();
      if (count == 0) throw Error(ErrorKind::SchemaError, "count must be a positive integer");
      if (spec.mode == Mode::Set && count != 1) throw Error(ErrorKind::SchemaError, "count must be 1 in set mode");
    }
    spec.rows.emplace_back(std::move(values), count);
  }
  CausalTeam t = build_team(spec, false);
  if (!t.graph().is_acyclic()) throw Error(ErrorKind::CyclicGraph, "graph has a cycle");
  for (const auto& [name, parents] : declared_parents)
    if (parents != t.graph().parent_names(name))
      throw Error(ErrorKind::SchemaError, "parents of " + name + " must list graph parents alphabetically");
  t.validate();
  return t;
}

CausalTeam load_team_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_team_json(ss.str());
}

std::string to_json(const CausalTeam& t) {
  const Signature& s = t.sig();
  const Dag& g = s.graph;
  ordered_json j;
  j["mode"] = t.mode() == Mode::Set ? "set" : "multi";
  ordered_json vars = ordered_json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    ordered_json r = ordered_json::array();
    for (const auto& a : s.ranges[v]) r.push_back(atom_to_json(a));
    ordered_json o;
    o["name"] = g.vertices()[v];
    o["range"] = r;
    vars.push_back(o);
  }
  j["variables"] = vars;
  ordered_json edges = ordered_json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back(ordered_json::array({a, b}));
  j["edges"] = edges;
  ordered_json fs = ordered_json::object();
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!s.functions[v]) continue;
    ordered_json table = ordered_json::array();
    for (const auto& [args, val] : s.functions[v]->entries) {
      ordered_json a = ordered_json::array();
      for (const auto& x : args) a.push_back(value_to_json(x));
      ordered_json e;
      e["args"] = a;
      e["value"] = value_to_json(val);
      table.push_back(e);
    }
    ordered_json f;
    f["parents"] = s.functions[v]->parents;
    f["table"] = table;
    fs[g.vertices()[v]] = f;
  }
  j["functions"] = fs;
  ordered_json rows = ordered_json::array();
  for (const auto& e : t.rows()) {
    ordered_json vals = ordered_json::object();
    for (std::size_t v = 0; v < g.size(); ++v) vals[g.vertices()[v]] = value_to_json(e.row[v]);
    ordered_json o;
    o["values"] = vals;
    if (t.mode() == Mode::Multi) o["count"] = e.count;
    rows.push_back(o);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string to_table(const CausalTeam& t, const std::vector<std::string>& column_order) {
  std::vector<std::string> cols = column_order.empty() ? t.domain() : column_order;
  std::vector<std::size_t> idx;
  for (const auto& c : cols) idx.push_back(t.index_of(c));
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? " " : "") << cols[i];
  os << '\n';
  for (const auto& e : t.rows()) {
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << e.row[idx[i]].to_string();
    if (t.mode() == Mode::Multi && e.count > 1) os << " x" << e.count;
    os << '\n';
  }
  return os.str();
}

CausalTeam explicit_closure(const CausalTeam& t) {
  const Signature& s = t.sig();
  const Dag& g = s.graph;
  std::vector<FunctionTablePtr> fs = s.functions;
  bool changed = false;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.is_endogenous(v)) continue;
    std::shared_ptr<FunctionTable> copy;
    for (const auto& e : t.rows()) {
      if (!e.row[v].is_proper()) continue;
      std::vector<Value> args;
      for (std::size_t p : g.parents(v)) args.push_back(e.row[p]);
      if (!all_proper(args)) continue;
      const FunctionTable& cur = copy ? *copy : *fs[v];
      if (cur.lookup(args)) continue;
      if (!copy) copy = std::make_shared<FunctionTable>(*fs[v]);
      copy->entries.emplace(std::move(args), e.row[v]);
    }
    if (copy) {
      fs[v] = copy;
      changed = true;
    }
  }
  if (!changed) return t;
  auto sig = std::make_shared<Signature>(s);
  sig->functions = std::move(fs);
  return CausalTeam(sig, t.rows(), t.mode());
}

std::optional<bool> classical_holds(const Signature& sig, const Row& r, const Formula& f) {
  if (auto n = f.as<node::Eq>()) {
    const Value& v = r[sig.index_of(n->var)];
    if (!v.is_proper()) return std::nullopt;
    return v.atom() == n->value;
  }
  if (auto n = f.as<node::Neq>()) {
    const Value& v = r[sig.index_of(n->var)];
    if (!v.is_proper()) return std::nullopt;
    return !(v.atom() == n->value);
  }
  if (auto n = f.as<node::And>()) {
    auto a = classical_holds(sig, r, *n->left), b = classical_holds(sig, r, *n->right);
    if (!a || !b) return std::nullopt;
    return *a && *b;
  }
  if (auto n = f.as<node::TensorOr>()) {
    auto a = classical_holds(sig, r, *n->left), b = classical_holds(sig, r, *n->right);
    if (!a || !b) return std::nullopt;
    return *a || *b;
  }
  throw Error(ErrorKind::AntecedentNotClassical, to_string(f));
}

CausalTeam select_subteam(const CausalTeam& t, const Formula& classical) {
  CausalTeam closed = explicit_closure(t);
  Rows kept;
  for (const auto& e : closed.rows()) {
    auto h = classical_holds(closed.sig(), e.row, classical);
    if (!h) throw Error(ErrorKind::FormalTermEncountered, "selection by " + to_string(classical) + " reads a term");
    if (*h) kept.add(e.row, e.count);
  }
  return closed.with_rows(std::move(kept));
}

CausalTeam singleton(const CausalTeam& t, const Row& r, std::size_t count) {
  Rows rows;
  rows.add(r, count);
  return t.with_rows(std::move(rows));
}

}  // namespace ct
