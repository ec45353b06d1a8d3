#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causalteam/generate.hpp"
#include "causalteam/model.hpp"

namespace ct {

struct LawInfo {
  std::string id;
  std::string statement;
  // Universal laws run random trials; the others replay fixed witness teams.
  bool universal;
};

// Every registered law, in a fixed order.
const std::vector<LawInfo>& law_registry();
const LawInfo& law_info(const std::string& id);  // UnknownLaw

enum class LawOutcome { Holds, Fails, CounterexampleConfirmed };
const char* to_string(LawOutcome o);

struct LawReport {
  std::string law;
  std::size_t trials = 0;
  std::size_t nonvacuous = 0;  // trials whose premises held
  LawOutcome outcome = LawOutcome::Holds;
  // For failures: the shrunk team as JSON followed by what went wrong.
  std::string witness;
  bool ok() const { return outcome != LawOutcome::Fails; }
};

struct LawOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 20240601;
  // Overrides the per-law generator settings when set.
  std::optional<GeneratorConfig> generator;
};

LawReport check_law(const std::string& id, const LawOptions& opts = {});

// Greedily drops rows (or single copies in multi mode) from the explicit
// closure while `fails` keeps returning true.
CausalTeam shrink_rows(const CausalTeam& t, const std::function<bool(const CausalTeam&)>& fails);

// One line: "<id> <outcome> trials=N nonvacuous=M".
std::string summary_line(const LawReport& r);

}  // namespace ct
