#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "plwhile/ast.hpp"
#include "plwhile/dist.hpp"

namespace plw {

using ElemDist = Dist<Elem>;

/// Shared handle to an evaluated distribution; null means bot (no
/// sampling origin). Distributions are interned where possible so the
/// common comparison path is a pointer check.
using DistHandle = std::shared_ptr<const ElemDist>;

inline bool dist_handle_eq(const DistHandle& a, const DistHandle& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}
inline bool dist_handle_lt(const DistHandle& a, const DistHandle& b) {
  if (a == b) return false;
  if (!a) return true;
  if (!b) return false;
  return *a < *b;
}

/// Value of a leakable type: the bare value, its distribution of
/// origin (or bot), and a confidentiality flag.
struct LabeledValue {
  Elem value;
  DistHandle origin;  // null = bot
  Conf conf = Conf::Leaked;

  bool operator==(const LabeledValue& o) const {
    return value == o.value && conf == o.conf &&
           dist_handle_eq(origin, o.origin);
  }
  bool operator<(const LabeledValue& o) const {
    if (value != o.value) return value < o.value;
    if (!dist_handle_eq(origin, o.origin))
      return dist_handle_lt(origin, o.origin);
    return conf < o.conf;
  }
};

inline bool is_leaked(const LabeledValue& lv) { return lv.conf != Conf::Secret; }
inline bool in_r(const LabeledValue& lv, const ElemDist& d) {
  return lv.origin && *lv.origin == d;
}
/// Label equality: values and origins agree, the
/// confidentiality flags are ignored.
inline bool label_eq(const LabeledValue& a, const LabeledValue& b) {
  return a.value == b.value && dist_handle_eq(a.origin, b.origin);
}

/// Total map into (labeled value or bot); entries indexed by the key
/// element's declaration index. All-bot is the empty map.
struct MapValue {
  std::vector<std::optional<LabeledValue>> entries;

  bool operator==(const MapValue& o) const { return entries == o.entries; }
  bool operator<(const MapValue& o) const { return entries < o.entries; }
  bool in_dom(int key_index) const {
    return entries.at(key_index).has_value();
  }
};

struct Unit {
  bool operator==(const Unit&) const { return true; }
  bool operator<(const Unit&) const { return false; }
};

/// Wrapper distinguishing dist-or-bot expression values (pi2 results)
/// from other variants.
struct DistValue {
  DistHandle d;  // null = bot
  bool operator==(const DistValue& o) const { return dist_handle_eq(d, o.d); }
  bool operator<(const DistValue& o) const { return dist_handle_lt(d, o.d); }
};

/// Result of expression evaluation.
using Value = std::variant<Unit, Elem, bool, LabeledValue, DistValue, Conf>;

/// One memory slot: plain element, labeled value, or labeled-codomain map.
using Binding = std::variant<Elem, LabeledValue, MapValue>;

}  // namespace plw
