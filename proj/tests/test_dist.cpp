#include <doctest.h>

#include <random>

#include "plwhile/dist.hpp"

using plw::BigInt;
using plw::Dist;
using plw::Rational;

namespace {

Dist<int> from(std::initializer_list<std::pair<int, Rational>> w) {
  std::vector<Dist<int>::Entry> entries(w.begin(), w.end());
  return Dist<int>::from_weights(std::move(entries));
}

Rational half() { return Rational(BigInt(1), BigInt(2)); }
Rational quarter() { return Rational(BigInt(1), BigInt(4)); }

/// Independent oracle for two chained binds: the explicit double sum
/// over intermediate outcomes.
template <typename F, typename G>
Dist<int> double_sum(const Dist<int>& d, F f, G g) {
  std::map<int, Rational> acc;
  for (const auto& [v, wv] : d.weights()) {
    Dist<int> dfv = f(v);
    for (const auto& [w, ww] : dfv.weights()) {
      Dist<int> dgw = g(w);
      for (const auto& [z, wz] : dgw.weights()) acc[z] += wv * ww * wz;
    }
  }
  std::vector<Dist<int>::Entry> entries(acc.begin(), acc.end());
  return Dist<int>::from_weights(std::move(entries));
}

}  // namespace

TEST_CASE("dirac and canonical form") {
  auto d = Dist<int>::dirac(3);
  CHECK(d.mass().is_one());
  CHECK(d.weights().size() == 1);
  CHECK(d.weight_of(3).is_one());
  // merging, pruning, ordering
  auto m = from({{2, quarter()}, {1, quarter()}, {2, quarter()}, {3, Rational(0)}});
  CHECK(m.support() == std::vector<int>{1, 2});
  CHECK(m.weight_of(2) == half());
  CHECK_THROWS(from({{1, Rational(-1)}}));
  CHECK_THROWS(from({{1, Rational(1)}, {2, half()}}));
}

TEST_CASE("monad laws on enumerated small dists") {
  // All dists over {0,1,2} with weights from {0, 1/4, 1/2, 3/4, 1}
  // and mass <= 1.
  std::vector<Rational> grid{Rational(0), quarter(), half(),
                             quarter() * 3, Rational(1)};
  std::vector<Dist<int>> dists;
  for (const auto& w0 : grid)
    for (const auto& w1 : grid)
      for (const auto& w2 : grid) {
        if (Rational(1) < w0 + w1 + w2) continue;
        dists.push_back(from({{0, w0}, {1, w1}, {2, w2}}));
      }
  REQUIRE(dists.size() > 30);

  auto rot = [](int v) { return Dist<int>::dirac((v + 1) % 3); };
  auto sub = [&](int v) { return from({{v, half()}, {(v + 2) % 3, quarter()}}); };

  for (const auto& d : dists) {
    // left identity on every element
    for (int v = 0; v < 3; ++v) {
      CHECK(Dist<int>::dirac(v).bind(rot) == rot(v));
      CHECK(Dist<int>::dirac(v).bind(sub) == sub(v));
    }
    // right identity
    CHECK(d.bind([](int v) { return Dist<int>::dirac(v); }) == d);
    // associativity, against the double-sum oracle
    CHECK(d.bind(rot).bind(sub) ==
          d.bind([&](int v) { return rot(v).bind(sub); }));
    CHECK(d.bind(rot).bind(sub) == double_sum(d, rot, sub));
    CHECK(d.bind(sub).bind(rot) == double_sum(d, sub, rot));
  }
}

TEST_CASE("bind on random dists agrees with the double-sum oracle") {
  std::mt19937 rng(20240817);
  auto rand_rational = [&]() {
    int den = 1 + static_cast<int>(rng() % 6);
    int num = static_cast<int>(rng() % (den + 1));
    return Rational(BigInt(num), BigInt(3 * den));
  };
  auto rand_dist = [&]() {
    std::vector<Dist<int>::Entry> w;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i)
      w.emplace_back(static_cast<int>(rng() % 5), rand_rational());
    return Dist<int>::from_weights(std::move(w));
  };
  for (int it = 0; it < 50; ++it) {
    Dist<int> d = rand_dist();
    Dist<int> fv[5], gv[5];
    for (int v = 0; v < 5; ++v) {
      fv[v] = rand_dist();
      gv[v] = rand_dist();
    }
    auto f = [&](int v) { return fv[v % 5]; };
    auto g = [&](int v) { return gv[v % 5]; };
    CHECK(d.bind(f).bind(g) ==
          d.bind([&](int v) { return f(v).bind(g); }));
    CHECK(d.bind(f).bind(g) == double_sum(d, f, g));
  }
}

TEST_CASE("bind never increases mass") {
  auto d = from({{0, half()}, {1, quarter()}});
  auto lossy = [&](int v) {
    return v == 0 ? Dist<int>::dirac(7) : from({{7, half()}});
  };
  CHECK(d.bind(lossy).mass() == half() + quarter() * half());
  auto lossless = [](int v) { return Dist<int>::dirac(v + 1); };
  CHECK(d.bind(lossless).mass() == d.mass());
}

TEST_CASE("scaling and mixing") {
  auto d = from({{0, half()}, {1, half()}});
  auto s = d.scaled(half());
  CHECK(s.weight_of(0) == quarter());
  CHECK(s.plus(s) == d);
  CHECK(Dist<int>::zero().mass().is_zero());
}

TEST_CASE("weights stay in lowest terms through pipelines") {
  std::mt19937 rng(31337);
  auto rand_dist = [&]() {
    std::vector<Dist<int>::Entry> w;
    for (int i = 0; i < 3; ++i)
      w.emplace_back(static_cast<int>(rng() % 4),
                     Rational(BigInt(rng() % 3),
                              BigInt(3) * BigInt(2 + rng() % 9)));
    return Dist<int>::from_weights(std::move(w));
  };
  for (int it = 0; it < 40; ++it) {
    Dist<int> fv[4];
    for (auto& f : fv) f = rand_dist();
    auto out = rand_dist().bind([&](int v) { return fv[v % 4]; });
    for (const auto& [v, w] : out.weights()) {
      CHECK(w.den() > 0);
      CHECK(boost::multiprecision::gcd(
                w.num() < 0 ? plw::BigInt(-w.num()) : w.num(), w.den()) ==
            1);
      CHECK(!w.is_zero());
    }
  }
}
