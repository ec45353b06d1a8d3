#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalteam/model.hpp"
#include "causalteam/prob.hpp"
#include "causalteam/syntax.hpp"

namespace ct {

enum class CauseKind { Direct, Total, ProbDirect, ProbTotal, Contributing };
const char* to_string(CauseKind k);
CauseKind parse_cause_kind(const std::string& s);  // DC TC PDC PTC CC

struct CauseWitness {
  CauseKind kind;
  std::string cause, effect;
  Assignment fixed;  // context held fixed (empty when none)
  Atom x, x2;
  // Deterministic kinds: the effect values under x and x2.
  Atom y, y2;
  // Probabilistic kinds: the effect value and its probabilities under x and x2.
  Rational pr{0}, pr2{0};
};

// One line, e.g. "DC X->Y fix{Z=1} x:1=>y:2 x':2=>y':3".
std::string to_string(const CauseWitness& w);

struct CauseOptions {
  std::size_t max_candidates = 200000;  // SearchSpaceTooLarge beyond this
};

std::optional<CauseWitness> direct_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                         const CauseOptions& o = {});
std::optional<CauseWitness> total_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                        const CauseOptions& o = {});
std::optional<CauseWitness> prob_direct_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                              const CauseOptions& o = {});
std::optional<CauseWitness> prob_total_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                             const CauseOptions& o = {});
std::optional<CauseWitness> contributing_cause(const CausalTeam& t, const std::string& x, const std::string& y,
                                               const CauseOptions& o = {});
std::optional<CauseWitness> find_cause(CauseKind k, const CausalTeam& t, const std::string& x,
                                       const std::string& y, const CauseOptions& o = {});

// Object-language encodings as disjunctions with ++.
FormulaPtr direct_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y);
FormulaPtr total_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y);
FormulaPtr prob_direct_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y);
FormulaPtr prob_total_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y);
FormulaPtr contributing_cause_formula(const CausalTeam& t, const std::string& x, const std::string& y);

// psi holds on T and on T_{Z=z} for every non-empty Z and z in Ran(Z).
bool invariant(const CausalTeam& t, const Formula& psi, const CauseOptions& o = {});

// Dependencies need not be acyclic, so the two wider graphs are plain edge sets.
using EdgeSet = std::set<std::pair<std::string, std::string>>;

struct GraphHierarchy {
  Dag causal;          // G(T)
  EdgeSet invariant;   // X->Y when some determining set of Y containing X is invariant
  EdgeSet contingent;  // X->Y when some determining set of Y containing X holds in T
  bool chain_holds;    // causal within invariant within contingent
};

GraphHierarchy graph_hierarchy(const CausalTeam& t, const CauseOptions& o = {});

// Pr_T(chi) and Pr_{T_spec}(chi).
std::pair<Probability, Probability> intervention_shift(const CausalTeam& t, const std::vector<Binding>& spec,
                                                       const Formula& chi);

}  // namespace ct
