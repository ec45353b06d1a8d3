#pragma once

#include <vector>

#include "causalteam/model.hpp"
#include "causalteam/syntax.hpp"

namespace ct {

// T_{X=x}. Bindings must be consistent (InconsistentSpec otherwise), name
// known variables and stay inside their ranges. Lookups that miss, or whose
// arguments already hold terms, produce the formal term f_Z(args).
CausalTeam do_intervention(const CausalTeam& t, const std::vector<Binding>& spec);

}  // namespace ct
