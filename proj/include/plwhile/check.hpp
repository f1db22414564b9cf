#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "plwhile/ast.hpp"

namespace plw {

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

/// Static type information for an expression.
struct TypeInfo {
  enum class Kind { Elem, Bool, Labeled, DistOpt, Conf, Unit, Map, EmptyMap };
  Kind kind = Kind::Unit;
  int type_id = -1;      // Elem/Labeled/DistOpt (DistOpt -1 = bot, any type)
  int key_type_id = -1;  // Map
};

/// Variable scope used by the type checker: module globals plus the
/// current procedure's parameters and locals (or a goal universe).
using Scope = std::map<std::string, VarType>;

Scope module_scope(const Module& mod);
Scope proc_scope(const Module& mod, const Proc& p);

/// Infers the expression's type against a scope; appends diagnostics
/// and returns Unit-kinded info on failure.
TypeInfo infer_expr(const Program& prog, const Scope& scope, const Expr& e,
                    std::vector<Diagnostic>& errors);

/// Type-checks one command sequence.
void check_commands(const Program& prog, const Module* mod,
                    const Scope& scope, std::span<const CommandPtr> cmds,
                    std::vector<Diagnostic>& errors);

/// Full structural and type check of a module against the program's
/// declarations. Empty result means well-formed.
std::vector<Diagnostic> well_formed(const Program& prog, const Module& mod);

/// Checks the shared preamble (types, named distributions) and every
/// module.
std::vector<Diagnostic> well_formed(const Program& prog);

/// Enforces the labeled-value usage discipline: labeled variables and
/// labeled map entries may appear in procedure code only as sec-read
/// sources, sec-sample targets, or domain-of-definition tests. Label
/// machinery (projections, triples, label constants) is reserved for
/// assertions.
std::vector<Diagnostic> guard_check(const Program& prog, const Module& mod);

/// All variable and map identifiers read or written by the commands,
/// including transitively through procedure calls.
std::set<std::string> free_vars(const Program& prog, const Module* mod,
                                std::span<const CommandPtr> cmds);

/// Per-command read/write sets at variable granularity, used by the
/// swap tactic's dependency check.
struct VarUse {
  std::set<std::string> reads, writes;
};
VarUse var_use(const Program& prog, const Module* mod, const Command& c);

}  // namespace plw
