#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "causalteam/graph.hpp"
#include "causalteam/syntax.hpp"
#include "causalteam/value.hpp"

namespace ct {

enum class Mode { Set, Multi };

// Partial function for an endogenous variable; keys are parent tuples in
// alphabetical parent order.
struct FunctionTable {
  std::vector<std::string> parents;
  std::map<std::vector<Value>, Value> entries;

  const Value* lookup(const std::vector<Value>& args) const;
  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

using FunctionTablePtr = std::shared_ptr<const FunctionTable>;

// Everything but the rows. Shared between a team and its subteams.
struct Signature {
  Dag graph;                                  // vertices are the domain, sorted
  std::vector<std::vector<Atom>> ranges;      // by vertex index
  std::vector<FunctionTablePtr> functions;    // by vertex index; null for exogenous

  const std::vector<std::string>& domain() const { return graph.vertices(); }
  std::size_t index_of(const std::string& v) const { return graph.index_of(v); }
  bool in_range(std::size_t var, const Atom& a) const;
};

bool operator==(const Signature& a, const Signature& b);

using SignaturePtr = std::shared_ptr<const Signature>;

// Distinct assignments in first-seen order, each with a multiplicity.
class Rows {
 public:
  struct Entry {
    Row row;
    std::size_t count;
  };

  void add(Row r, std::size_t count = 1);  // merges duplicates
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t distinct() const { return entries_.size(); }
  std::size_t total() const { return total_; }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  // Order-insensitive multiset comparison.
  friend bool operator==(const Rows& a, const Rows& b);

 private:
  std::vector<Entry> entries_;
  std::map<Row, std::size_t> index_;
  std::size_t total_ = 0;
};

class CausalTeam {
 public:
  CausalTeam() = default;
  CausalTeam(SignaturePtr sig, Rows rows, Mode mode);

  const Signature& sig() const { return *sig_; }
  const SignaturePtr& sig_ptr() const { return sig_; }
  const Dag& graph() const { return sig_->graph; }
  const std::vector<std::string>& domain() const { return sig_->domain(); }
  const Rows& rows() const { return rows_; }
  Mode mode() const { return mode_; }
  bool empty() const { return rows_.empty(); }
  std::size_t index_of(const std::string& v) const { return sig_->index_of(v); }

  // Same signature and mode, different rows. Counts are clamped to 1 in set mode.
  CausalTeam with_rows(Rows rows) const;

  // Checks range membership (proper values only), dep(PA;Y) on proper rows,
  // table agreement, acyclicity and the parent ordering.
  void validate() const;

  bool is_parametric() const;
  bool has_terms() const;

  // Column values for var in row order (with repeats for multiplicity ignored).
  std::vector<Value> column(const std::string& var) const;

  friend bool operator==(const CausalTeam& a, const CausalTeam& b);

 private:
  SignaturePtr sig_;
  Rows rows_;
  Mode mode_ = Mode::Set;
};

// Builder used by the JSON loader and by tests that need terms in rows.
struct TeamSpec {
  Mode mode = Mode::Set;
  std::vector<std::pair<std::string, std::vector<Atom>>> variables;
  std::vector<std::pair<std::string, std::string>> edges;
  // var -> list of (args, value); parents follow the graph.
  std::map<std::string, std::vector<std::pair<std::vector<Value>, Value>>> functions;
  std::vector<std::pair<std::map<std::string, Value>, std::size_t>> rows;
};

CausalTeam build_team(const TeamSpec& spec, bool validate = true);

CausalTeam load_team_json(const std::string& text);
CausalTeam load_team_file(const std::string& path);
std::string to_json(const CausalTeam& t);  // pretty, deterministic, trailing newline

// Plain whitespace table: header line of variable names, then one line per
// distinct row (with "xN" suffix for multiplicities above one in multi mode).
std::string to_table(const CausalTeam& t, const std::vector<std::string>& column_order = {});

// Adds row(PA_Z) -> row(Z) for every endogenous Z and every row whose parent
// and Z entries are all proper.
CausalTeam explicit_closure(const CausalTeam& t);

// Rows of the closure whose singleton satisfies the classical formula.
CausalTeam select_subteam(const CausalTeam& t, const Formula& classical);

// Singleton team sharing the signature.
CausalTeam singleton(const CausalTeam& t, const Row& r, std::size_t count = 1);

// Truth of a classical formula on a single assignment; nullopt if a term is read.
std::optional<bool> classical_holds(const Signature& sig, const Row& r, const Formula& f);

}  // namespace ct
