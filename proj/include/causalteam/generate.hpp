#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "causalteam/model.hpp"
#include "causalteam/syntax.hpp"

namespace ct {

struct GeneratorConfig {
  std::size_t min_vars = 2, max_vars = 6;
  std::size_t min_range = 2, max_range = 4;
  double edge_probability = 0.4;
  std::size_t min_rows = 1, max_rows = 12;
  bool parametric = true;
  bool multiteam = false;
  // Exogenous rows form a weighted product, so every exogenous variable is
  // independent of the others and the Markov axiom holds.
  bool independent_exogenous = false;
  std::uint64_t seed = 1;
};

using Rng = std::mt19937_64;

// Deterministic for a given rng state. Variables are A, B, C, ... with
// integer ranges 0..k-1; rows are exogenous tuples pushed through the
// functions, so conditions (b) and (c) hold by construction.
CausalTeam random_team(const GeneratorConfig& cfg, Rng& rng);
CausalTeam random_team(const GeneratorConfig& cfg);

// Uniformly chosen subset of the distinct rows of the explicit closure.
CausalTeam random_subteam(const CausalTeam& t, Rng& rng);

enum class FormulaShape {
  Classical,  // Eq, Neq, &, |
  C,          // plus []->
  CO,         // plus =>
  CO_neg,     // plus !
  CD,         // CO plus dep
};

struct FormulaConfig {
  FormulaShape shape = FormulaShape::CO;
  int max_depth = 4;
  double inconsistent_antecedent = 0.05;
};

FormulaPtr random_formula(const CausalTeam& t, const FormulaConfig& cfg, Rng& rng);
std::vector<Binding> random_bindings(const CausalTeam& t, Rng& rng, std::size_t max_vars = 2);

}  // namespace ct
