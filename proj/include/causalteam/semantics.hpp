#pragma once

#include <cstddef>
#include <string>

#include "causalteam/model.hpp"
#include "causalteam/syntax.hpp"

namespace ct {

struct Verdict {
  bool satisfied = false;
  std::string witness;  // split used for a top-level tensor disjunction, if any
};

enum class SplitStrategy {
  Auto,        // per row for flat disjuncts, partitions for downward-closed ones
  Partitions,  // 2-partitions of distinct rows whenever multiplicity is irrelevant
  Covers,      // every cover, always
};

struct EvalOptions {
  std::size_t cover_row_cap = 14;      // total multiplicity for full cover search
  std::size_t partition_row_cap = 22;  // distinct rows for partition search
  SplitStrategy split = SplitStrategy::Auto;
};

// T |= phi. Throws FormalTermEncountered when an atom reads a term.
Verdict satisfies(const CausalTeam& t, const Formula& phi, const EvalOptions& opts = {});
inline bool holds(const CausalTeam& t, const FormulaPtr& phi, const EvalOptions& opts = {}) {
  return satisfies(t, *phi, opts).satisfied;
}

// Falsifiability reading for teams with terms. Supports literals, dep, &, |,
// classical => and []->; anything else raises UnsupportedConnective.
bool satisfies_falsifiable(const CausalTeam& t, const Formula& phi, const EvalOptions& opts = {});

// Admissibility reading. Supports literals, dep and disjunctive normal forms
// whose clauses mention each variable once; anything else raises NotSupportedShape.
bool satisfies_admissible(const CausalTeam& t, const Formula& phi);

// Rational Pr_T(chi) over rows with multiplicity; nullopt on the empty team.
std::optional<Rational> team_probability(const CausalTeam& t, const Formula& chi, const EvalOptions& opts = {});

}  // namespace ct
