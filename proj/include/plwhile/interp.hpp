#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include "plwhile/memory.hpp"

namespace plw {

/// Runtime evaluation fault (e.g. reading an unset map entry outside a
/// domain test). Distinct from lost mass: faults propagate, lost mass
/// is silent sub-distribution weight.
struct EvalFault : std::runtime_error {
  explicit EvalFault(const std::string& msg, SourcePos p = {})
      : std::runtime_error(msg), pos(p) {}
  SourcePos pos;
};

/// Bound variables introduced by assertion-level quantifiers.
struct Env {
  const std::map<std::string, Elem>* bound = nullptr;

  std::optional<Elem> lookup(const std::string& name) const {
    if (!bound) return std::nullopt;
    auto it = bound->find(name);
    if (it == bound->end()) return std::nullopt;
    return it->second;
  }
};

struct ExecCtx {
  const Program* prog = nullptr;
  const Module* mod = nullptr;  // resolution context for proc calls
  int fuel = 64;
};

Value eval_expr(const Expr& e, const Memory& m, const Env& env = {});
bool eval_bool(const Expr& e, const Memory& m, const Env& env = {});
ElemDist eval_dist_expr(const DistExpr& d, const Memory& m,
                        const Env& env = {});
DistHandle eval_dist_handle(const DistExpr& d, const Memory& m,
                            const Env& env = {});

/// Writes a value into a variable or map-entry target.
void store(Memory& m, const LValue& target, const Value& v,
           const Env& env = {});

/// Exact denotational execution of a command sequence, yielding a
/// sub-distribution over memories. While loops unroll with the
/// context's fuel; unfinished branches contribute no mass.
Dist<Memory> exec(const ExecCtx& ctx, std::span<const CommandPtr> cmds,
                  const Memory& m);

struct ProcResult {
  Memory mem;
  Value ret;
  bool operator==(const ProcResult& o) const {
    return mem == o.mem && ret == o.ret;
  }
  bool operator<(const ProcResult& o) const {
    if (mem != o.mem) return mem < o.mem;
    return ret < o.ret;
  }
};

/// Builds the globals-only universe of a module (the state visible
/// between procedure calls).
std::shared_ptr<Universe> globals_universe(const Program& prog,
                                           const Module& mod);

/// Runs a procedure on a globals memory: binds parameters by value,
/// executes the body, evaluates the return expression, and projects
/// the result back onto the globals (locals do not persist).
Dist<ProcResult> run_proc(const Program& prog, const Module& mod,
                          const std::string& proc,
                          const std::vector<Value>& args, const Memory& m,
                          int fuel);

/// True iff the procedure terminates with probability 1 from every
/// memory over the declared finite domains.
bool lossless_check(const Program& prog, const Module& mod,
                    const std::string& proc, int fuel);

/// Collects every distinct evaluated distribution that can label a
/// value of each type: named bindings first, then uniform expressions
/// appearing anywhere in the program's modules or goals.
std::vector<std::vector<DistHandle>> collect_origins(const Program& prog);

}  // namespace plw
