#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalteam/model.hpp"
#include "causalteam/rational.hpp"
#include "causalteam/syntax.hpp"

namespace ct {

// Pr_T(chi) for chi in CO. Throws EmptyTeam or NotInCO.
Probability probability_of(const CausalTeam& t, const Formula& chi);
// Pr_T(chi | given). Throws ZeroCondition when Pr_T(given) = 0.
Probability conditional_probability(const CausalTeam& t, const Formula& chi, const Formula& given);

// chi1 and chi2 independent (optionally given chi3). A zero-probability
// condition counts as independent.
bool prob_independent(const CausalTeam& t, const Formula& chi1, const Formula& chi2,
                      const Formula* given = nullptr);

using Assignment = std::vector<std::pair<std::string, Atom>>;

std::string to_string(const Assignment& a);
FormulaPtr conjunction_of(const Assignment& a);  // X=x & ... ; requires a non-empty list

struct MarkovViolation {
  std::string variable;
  Atom value;
  Assignment parents;
  Assignment context;  // the extra nondescendants conditioned on
  Probability without_context;
  Probability with_context;
};

struct MarkovReport {
  bool holds = true;
  std::vector<MarkovViolation> violations;
  std::optional<MarkovViolation> witness;  // largest discrepancy, first in row order on ties
};

std::string to_string(const MarkovViolation& v);

// Pr(X=x | pa) = Pr(X=x | pa, Y=y) with Y all nondescendants outside PA_X.
MarkovReport check_markov_axiom(const CausalTeam& t);
// Same over every subset of those nondescendants. DomainTooLarge past max_vars.
MarkovReport check_markov_condition(const CausalTeam& t, std::size_t max_vars = 8);

// Joint over full value tuples (domain order) obtained by pushing the
// exogenous distribution of T through the functions. NotParametric otherwise.
std::map<std::vector<Atom>, Probability> joint_from_exogenous(const CausalTeam& t);

// Pr_T of the full tuple (domain order), read directly off the rows.
Probability joint_probability(const CausalTeam& t, const std::vector<Atom>& tuple);

// Product of Pr_T(X_i = x_i | PA_i = pa_i) over the variables not in
// `intervened`; tuples that disagree with `intervened` get 0. A factor whose
// parent configuration never occurs in T is read off the function table.
Rational markov_product(const CausalTeam& t, const std::vector<Atom>& tuple,
                        const std::vector<std::pair<std::string, Atom>>& intervened = {});

// Every tuple in the product of ranges, domain order.
std::vector<std::vector<Atom>> range_product(const CausalTeam& t, const std::vector<std::string>& vars);

}  // namespace ct
