#pragma once

#include "plwhile/tactics.hpp"

namespace plw {

/// Rewrites a leading secure read r <~ lx on one side into the two
/// plain assignments of its defining rule: the source is re-labeled
/// leaked, then its bare value is copied.
RelGoal tactic_declassify(const RelGoal& g, Side side);

/// Rewrites a leading secure sample lx <~$ d on one side into a fresh
/// plain sampling followed by a labeled store (v, d, S). The fresh
/// variable v#k is deterministic: smallest k avoiding the goal's
/// names.
RelGoal tactic_secrnd(const RelGoal& g, Side side);

/// The direct lazy-sampling rule: on a goal of the exact shape
///     t[x] <~$ d; r <~ t[x]   ~   r <~ t[x]
/// emits the two sub-goals of the rule, borrowing the right-hand
/// stored value into a fresh left-only labeled variable.
std::vector<RelGoal> tactic_secrndasgn(const RelGoal& g,
                                       const std::string& map_name,
                                       const ExprPtr& key,
                                       const std::string& fresh_var);

}  // namespace plw
