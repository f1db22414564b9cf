#include "plwhile/memory.hpp"

#include <stdexcept>

namespace plw {

DistHandle Universe::intern(int type_id, const ElemDist& d) const {
  for (const auto& h : origins.at(type_id))
    if (*h == d) return h;
  return std::make_shared<const ElemDist>(d);
}

void Universe::finalize() {
  named_dists.clear();
  uniform_dists.assign(prog->types.size(), nullptr);
  for (const auto& def : prog->dists) {
    std::vector<ElemDist::Entry> w;
    for (std::size_t i = 0; i < def.weights.size(); ++i)
      w.emplace_back(Elem{def.type_id, static_cast<int>(i)},
                     def.weights[i]);
    named_dists[def.name] =
        intern(def.type_id, ElemDist::from_weights(std::move(w)));
  }
  for (std::size_t t = 0; t < prog->types.size(); ++t) {
    int n = static_cast<int>(prog->types[t].elements.size());
    std::vector<ElemDist::Entry> w;
    for (int i = 0; i < n; ++i)
      w.emplace_back(Elem{static_cast<int>(t), i},
                     Rational(BigInt(1), BigInt(n)));
    uniform_dists[t] =
        intern(static_cast<int>(t), ElemDist::from_weights(std::move(w)));
  }
}

Binding default_binding(const Universe& u, const VarDecl& d) {
  switch (d.type.kind) {
    case VarType::Kind::Plain:
      return Elem{d.type.type_id, 0};
    case VarType::Kind::Labeled:
      return LabeledValue{Elem{d.type.type_id, 0}, nullptr, Conf::Leaked};
    case VarType::Kind::Map: {
      MapValue m;
      m.entries.resize(
          u.prog->types.at(d.type.key_type_id).elements.size());
      return m;
    }
  }
  throw std::logic_error("unreachable");
}

Memory::Memory(const Universe& u, bool is_left) : uni(&u), left(is_left) {
  slots.reserve(u.slot_count(is_left));
  for (std::size_t i = 0; i < u.slot_count(is_left); ++i)
    slots.push_back(default_binding(u, u.decl(i)));
}

int labeled_option_count(const Universe& u, int type_id) {
  int vals = static_cast<int>(u.prog->types.at(type_id).elements.size());
  int origins = 1 + static_cast<int>(u.origins_for(type_id).size());
  return vals * origins * 2;
}

LabeledValue labeled_option(const Universe& u, int type_id, int option) {
  int origins = 1 + static_cast<int>(u.origins_for(type_id).size());
  int conf = option % 2;
  option /= 2;
  int orig = option % origins;
  option /= origins;
  LabeledValue lv;
  lv.value = Elem{type_id, option};
  lv.origin = orig == 0 ? nullptr : u.origins_for(type_id)[orig - 1];
  lv.conf = conf == 0 ? Conf::Secret : Conf::Leaked;
  return lv;
}

int labeled_option_index(const Universe& u, int type_id,
                         const LabeledValue& lv) {
  int origins = 1 + static_cast<int>(u.origins_for(type_id).size());
  int orig = 0;
  if (lv.origin) {
    const auto& cands = u.origins_for(type_id);
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (dist_handle_eq(cands[i], lv.origin)) {
        orig = static_cast<int>(i) + 1;
        break;
      }
    if (orig == 0) return -1;  // origin outside the declared universe
  }
  return (lv.value.index * origins + orig) * 2 +
         (lv.conf == Conf::Secret ? 0 : 1);
}

MemoryEnumerator::MemoryEnumerator(const Universe& u, bool left)
    : MemoryEnumerator(u, left, [&] {
        std::set<int> all;
        for (std::size_t s = 0; s < u.slot_count(left); ++s)
          all.insert(static_cast<int>(s));
        return all;
      }()) {}

MemoryEnumerator::MemoryEnumerator(const Universe& u, bool left,
                                   const std::set<int>& relevant_slots)
    : uni_(&u), left_(left) {
  for (std::size_t s = 0; s < u.slot_count(left); ++s) {
    const VarDecl& d = u.decl(s);
    bool active = relevant_slots.count(static_cast<int>(s)) > 0;
    auto add = [&](Dial dial) {
      (active ? dials_ : pinned_).push_back(dial);
    };
    switch (d.type.kind) {
      case VarType::Kind::Plain:
        add({static_cast<int>(s), -1,
             static_cast<int>(
                 u.prog->types.at(d.type.type_id).elements.size())});
        break;
      case VarType::Kind::Labeled:
        add({static_cast<int>(s), -1,
             labeled_option_count(u, d.type.type_id)});
        break;
      case VarType::Kind::Map: {
        int keys = static_cast<int>(
            u.prog->types.at(d.type.key_type_id).elements.size());
        int per_key = 1 + labeled_option_count(u, d.type.type_id);
        for (int k = 0; k < keys; ++k)
          add({static_cast<int>(s), k, per_key});
        break;
      }
    }
  }
}

double MemoryEnumerator::approximate_count() const {
  double n = 1;
  for (const auto& d : dials_) n *= d.cardinality;
  return n;
}

void MemoryEnumerator::write_dial(Memory& m, const Dial& d, int v) const {
  const VarDecl& decl = uni_->decl(d.slot);
  if (d.key_index < 0) {
    if (decl.type.kind == VarType::Kind::Plain)
      m.at(d.slot) = Elem{decl.type.type_id, v};
    else
      m.at(d.slot) = labeled_option(*uni_, decl.type.type_id, v);
  } else {
    auto& map = std::get<MapValue>(m.at(d.slot));
    if (v == 0)
      map.entries[d.key_index].reset();
    else
      map.entries[d.key_index] =
          labeled_option(*uni_, decl.type.type_id, v - 1);
  }
}

int MemoryEnumerator::read_dial(const Memory& m, const Dial& d) const {
  const VarDecl& decl = uni_->decl(d.slot);
  if (d.key_index < 0) {
    if (decl.type.kind == VarType::Kind::Plain)
      return std::get<Elem>(m.at(d.slot)).index;
    return labeled_option_index(*uni_, decl.type.type_id,
                                std::get<LabeledValue>(m.at(d.slot)));
  }
  const auto& entry =
      std::get<MapValue>(m.at(d.slot)).entries[d.key_index];
  if (!entry) return 0;
  return 1 + labeled_option_index(*uni_, decl.type.type_id, *entry);
}

void MemoryEnumerator::reset(Memory& m) const {
  m = Memory(*uni_, left_);
  for (const auto& d : pinned_) write_dial(m, d, 0);
  for (const auto& d : dials_) write_dial(m, d, 0);
}

bool MemoryEnumerator::next(Memory& m) const {
  for (auto it = dials_.rbegin(); it != dials_.rend(); ++it) {
    int v = read_dial(m, *it) + 1;
    if (v < it->cardinality) {
      write_dial(m, *it, v);
      return true;
    }
    write_dial(m, *it, 0);
  }
  return false;
}

}  // namespace plw
