#include "plwhile/lift.hpp"

#include <limits>
#include <queue>

namespace plw {

namespace {

BigInt lcm(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

/// Breadth-first augmenting-path max flow on a dense bipartite graph:
/// node 0 = source, 1..n = left outcomes, n+1..n+m = right outcomes,
/// n+m+1 = sink. Capacities are exact integers.
class Flow {
 public:
  Flow(int nodes) : n_(nodes), cap_(nodes, std::vector<BigInt>(nodes)) {}

  void add(int u, int v, BigInt c) { cap_[u][v] += std::move(c); }

  BigInt max_flow(int s, int t) {
    BigInt total = 0;
    while (true) {
      std::vector<int> parent(n_, -1);
      parent[s] = s;
      std::queue<int> q;
      q.push(s);
      while (!q.empty() && parent[t] < 0) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n_; ++v)
          if (parent[v] < 0 && cap_[u][v] > 0) {
            parent[v] = u;
            q.push(v);
          }
      }
      if (parent[t] < 0) return total;
      BigInt aug = -1;
      for (int v = t; v != s; v = parent[v]) {
        const BigInt& c = cap_[parent[v]][v];
        if (aug < 0 || c < aug) aug = c;
      }
      for (int v = t; v != s; v = parent[v]) {
        cap_[parent[v]][v] -= aug;
        cap_[v][parent[v]] += aug;
      }
      total += aug;
    }
  }

 private:
  int n_;
  std::vector<std::vector<BigInt>> cap_;
};

}  // namespace

bool lift_check_indexed(const std::function<bool(std::size_t, std::size_t)>& rel,
                        const std::vector<Rational>& d1,
                        const std::vector<Rational>& d2) {
  Rational m1, m2;
  for (const auto& w : d1) m1 += w;
  for (const auto& w : d2) m2 += w;
  if (m1 != m2) return false;
  if (m1.is_zero()) return true;

  BigInt denom = 1;
  for (const auto& w : d1) denom = lcm(denom, w.den());
  for (const auto& w : d2) denom = lcm(denom, w.den());

  int n = static_cast<int>(d1.size());
  int m = static_cast<int>(d2.size());
  Flow f(n + m + 2);
  int source = 0, sink = n + m + 1;
  BigInt scaled_mass = 0;
  for (int i = 0; i < n; ++i) {
    BigInt c = d1[i].num() * (denom / d1[i].den());
    scaled_mass += c;
    f.add(source, 1 + i, std::move(c));
  }
  for (int j = 0; j < m; ++j)
    f.add(1 + n + j, sink, d2[j].num() * (denom / d2[j].den()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (rel(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
        f.add(1 + i, 1 + n + j, scaled_mass);

  return f.max_flow(source, sink) == scaled_mass;
}

}  // namespace plw
