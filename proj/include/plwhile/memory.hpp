#pragma once

#include <cstdint>
#include <set>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plwhile/value.hpp"

namespace plw {

/// The variable universe of a memory: the shared declarations slots
/// plus, for left memories only, the variables a tactic appended
/// (the borrowed values of secrndasgn). Also carries the per-type
/// universe of candidate sampling origins used when enumerating
/// labeled values.
struct Universe {
  const Program* prog = nullptr;
  std::vector<VarDecl> vars;
  std::vector<VarDecl> aug_left;
  /// Per type id: distinct evaluated distributions that may appear as
  /// origin labels (named bindings first, then uniforms in use).
  std::vector<std::vector<DistHandle>> origins;

  std::size_t slot_count(bool left) const {
    return vars.size() + (left ? aug_left.size() : 0);
  }
  const VarDecl& decl(std::size_t slot) const {
    return slot < vars.size() ? vars[slot] : aug_left[slot - vars.size()];
  }
  /// Returns the slot index, or -1 when unknown (aug slots are only
  /// visible to left memories).
  int slot_of(const std::string& name, bool left) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == name) return static_cast<int>(i);
    if (left)
      for (std::size_t i = 0; i < aug_left.size(); ++i)
        if (aug_left[i].name == name)
          return static_cast<int>(vars.size() + i);
    return -1;
  }
  bool has_var(const std::string& name) const {
    return slot_of(name, true) >= 0;
  }
  const std::vector<DistHandle>& origins_for(int type_id) const {
    return origins.at(type_id);
  }
  /// Interns d against the known origins so later comparisons are
  /// pointer checks where possible.
  DistHandle intern(int type_id, const ElemDist& d) const;

  /// Precomputed evaluations of memory-independent distribution
  /// expressions, shared with the origin handles; fill with
  /// finalize() after prog/origins are set.
  std::map<std::string, DistHandle> named_dists;
  std::vector<DistHandle> uniform_dists;  // per type id
  void finalize();
};

struct Memory {
  const Universe* uni = nullptr;
  bool left = true;
  std::vector<Binding> slots;

  Memory() = default;
  Memory(const Universe& u, bool is_left);

  Binding& at(int slot) { return slots[static_cast<std::size_t>(slot)]; }
  const Binding& at(int slot) const {
    return slots[static_cast<std::size_t>(slot)];
  }

  bool operator==(const Memory& o) const { return slots == o.slots; }
  bool operator<(const Memory& o) const { return slots < o.slots; }
};

/// Default binding for a declaration: first element for plain
/// variables, (first element, bot, L) for labeled ones, empty map.
Binding default_binding(const Universe& u, const VarDecl& d);

/// In-place odometer over all memories of one side of a universe, in
/// lexicographic declaration order. Enumeration of a labeled slot runs
/// value-major, then origin (bot first), then confidentiality (S < L);
/// map entries enumerate bot first.
class MemoryEnumerator {
 public:
  MemoryEnumerator(const Universe& u, bool left);
  /// Restricted form: only the given slots are enumerated; the rest
  /// stay at their first option. Used when the goal provably cannot
  /// read the other slots.
  MemoryEnumerator(const Universe& u, bool left,
                   const std::set<int>& relevant_slots);

  /// Number of memories (product of per-dial cardinalities).
  double approximate_count() const;

  void reset(Memory& m) const;
  /// Advances to the next memory; false when the enumeration wrapped.
  bool next(Memory& m) const;

 private:
  struct Dial {
    int slot;
    int key_index;  // -1 for non-map slots
    int cardinality;
  };
  void write_dial(Memory& m, const Dial& d, int v) const;
  int read_dial(const Memory& m, const Dial& d) const;

  const Universe* uni_;
  bool left_;
  std::vector<Dial> dials_;    // enumerated
  std::vector<Dial> pinned_;   // held at their first option
};

/// Enumerates the labeled-value option with the given index for a
/// value type (used by both the odometer and tests).
LabeledValue labeled_option(const Universe& u, int type_id, int option);
int labeled_option_count(const Universe& u, int type_id);
int labeled_option_index(const Universe& u, int type_id,
                         const LabeledValue& lv);

}  // namespace plw
