#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "plwhile/rational.hpp"

namespace plw {

/// Finite-support sub-probability measure with exact rational weights.
/// Canonical form: outcomes sorted, weights strictly positive, total
/// mass <= 1. Missing mass represents non-termination (or exhausted
/// fuel). Value semantics throughout; extensional equality.
template <typename T>
class Dist {
 public:
  using Entry = std::pair<T, Rational>;

  Dist() = default;

  static Dist dirac(T v) {
    Dist d;
    d.w_.emplace_back(std::move(v), Rational(1));
    return d;
  }

  static Dist zero() { return Dist(); }

  /// Canonicalizes: merges duplicate outcomes, prunes zero weights,
  /// sorts by outcome. Throws if any weight is negative or the total
  /// mass exceeds 1.
  static Dist from_weights(std::vector<Entry> entries) {
    std::map<T, Rational> acc;
    for (auto& [v, w] : entries) {
      if (w.is_negative()) throw std::domain_error("negative weight");
      if (w.is_zero()) continue;
      auto [it, fresh] = acc.emplace(std::move(v), w);
      if (!fresh) it->second += w;
    }
    Dist d;
    Rational total;
    for (auto& [v, w] : acc) {
      total += w;
      d.w_.emplace_back(v, std::move(w));
    }
    if (Rational(1) < total) throw std::domain_error("mass exceeds 1");
    return d;
  }

  /// Monadic bind: weight of z is the sum over v of w(v) * (f v)(z).
  template <typename F>
  auto bind(F&& f) const {
    using Out = decltype(f(std::declval<const T&>()));
    using U = typename Out::outcome_type;
    std::map<U, Rational> acc;
    for (const auto& [v, w] : w_) {
      Out dv = f(v);
      for (const auto& [z, wz] : dv.weights()) {
        auto [it, fresh] = acc.emplace(z, w * wz);
        if (!fresh) it->second += w * wz;
      }
    }
    Dist<U> out;
    for (auto& [z, w] : acc)
      if (!w.is_zero()) out.mutable_weights().emplace_back(z, std::move(w));
    return out;
  }

  template <typename F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    return bind([&](const T& v) { return Dist<U>::dirac(f(v)); });
  }

  Rational mass() const {
    Rational total;
    for (const auto& [v, w] : w_) total += w;
    return total;
  }

  std::vector<T> support() const {
    std::vector<T> s;
    s.reserve(w_.size());
    for (const auto& [v, w] : w_) s.push_back(v);
    return s;
  }

  const Rational& weight_of(const T& v) const {
    static const Rational kZero;
    auto it = std::lower_bound(
        w_.begin(), w_.end(), v,
        [](const Entry& e, const T& x) { return e.first < x; });
    if (it != w_.end() && !(v < it->first)) return it->second;
    return kZero;
  }

  const std::vector<Entry>& weights() const { return w_; }
  std::vector<Entry>& mutable_weights() { return w_; }
  bool empty() const { return w_.empty(); }
  std::size_t size() const { return w_.size(); }

  bool operator==(const Dist& o) const { return w_ == o.w_; }
  bool operator!=(const Dist& o) const { return !(w_ == o.w_); }
  bool operator<(const Dist& o) const { return w_ < o.w_; }

  /// Scales every weight; used when mixing sub-distributions.
  Dist scaled(const Rational& factor) const {
    if (factor.is_zero()) return Dist();
    Dist d;
    d.w_.reserve(w_.size());
    for (const auto& [v, w] : w_) d.w_.emplace_back(v, w * factor);
    return d;
  }

  /// Pointwise sum of two canonical dists (mass may not exceed 1).
  Dist plus(const Dist& o) const {
    std::vector<Entry> all = w_;
    all.insert(all.end(), o.w_.begin(), o.w_.end());
    return from_weights(std::move(all));
  }

  using outcome_type = T;

 private:
  std::vector<Entry> w_;
};

/// Extensional equality of weight maps.
template <typename T>
bool dist_eq(const Dist<T>& a, const Dist<T>& b) {
  return a == b;
}

}  // namespace plw
