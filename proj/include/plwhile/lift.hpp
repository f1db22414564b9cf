#pragma once

#include <functional>
#include <vector>

#include "plwhile/dist.hpp"

namespace plw {

/// Coupling existence between two finite-support measures: true iff a
/// joint weight assignment exists with marginals d1 and d2 whose
/// support lies inside the relation. Masses must agree. Decided as a
/// max-flow feasibility problem with integer capacities obtained by
/// clearing denominators.
bool lift_check_indexed(const std::function<bool(std::size_t, std::size_t)>& rel,
                        const std::vector<Rational>& d1,
                        const std::vector<Rational>& d2);

template <typename T, typename Rel>
bool lift_check(Rel&& rel, const Dist<T>& d1, const Dist<T>& d2) {
  std::vector<Rational> w1, w2;
  w1.reserve(d1.size());
  w2.reserve(d2.size());
  for (const auto& [v, w] : d1.weights()) w1.push_back(w);
  for (const auto& [v, w] : d2.weights()) w2.push_back(w);
  const auto& a = d1.weights();
  const auto& b = d2.weights();
  return lift_check_indexed(
      [&](std::size_t i, std::size_t j) {
        return rel(a[i].first, b[j].first);
      },
      w1, w2);
}

}  // namespace plw
