#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plwhile/assertion.hpp"

namespace plw {

/// A relational judgment: left and right command sequences over a shared
/// declaration universe, a precondition on memory pairs, and a
/// postcondition lifted to distributions over memories. Goals are
/// immutable; tactics produce new goals.
struct RelGoal {
  std::shared_ptr<const Universe> uni;
  const Module* lmod = nullptr;  // call-resolution context, may be null
  const Module* rmod = nullptr;
  std::vector<CommandPtr> left, right;
  AssertionPtr pre, post;
  std::string label;
};

/// Free variable and declared-name scan over a whole goal, used by
/// fresh-name generation.
bool name_used_in_goal(const RelGoal& g, const std::string& name);

/// Smallest fresh name of the form base#k not used in the goal.
std::string fresh_name(const RelGoal& g, const std::string& base);

/// Returns a copy of the goal's universe with an extra left-only
/// variable appended.
std::shared_ptr<const Universe> with_aug_left(const Universe& u, VarDecl d);

/// Returns a copy with a variable appended to the shared declarations
/// (visible to both sides).
std::shared_ptr<const Universe> with_shared_var(const Universe& u, VarDecl d);

}  // namespace plw
