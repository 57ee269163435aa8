#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "blockfit/metrics.hpp"
#include "blockfit/rng.hpp"
#include "doctest.h"

using namespace blockfit;

namespace {

// Brute-force assignment oracle: best agreement over all permutations of the
// (padded) class set, checked against the production matcher.
std::int64_t brute_force_agreement(const LabelVector& a, const LabelVector& b) {
  const ContingencyTable t = contingency(a, b);
  const int k = static_cast<int>(std::max(t.k_a, t.k_b));
  std::vector<int> perm(static_cast<size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = 0;
  do {
    std::int64_t w = 0;
    for (int j = 0; j < k; ++j)
      if (j < t.k_b && perm[static_cast<size_t>(j)] < t.k_a)
        w += t.at(perm[static_cast<size_t>(j)], j);
    best = std::max(best, w);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

LabelVector random_labels(size_t n, int k, std::uint64_t seed) {
  SplitMix64 r(seed);
  LabelVector v(n);
  for (auto& x : v) x = static_cast<int>(r.next_below(static_cast<std::uint64_t>(k)));
  return v;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("contingency counts a hand-worked example") {
  const LabelVector a = {0, 0, 1, 1, 2};
  const LabelVector b = {1, 1, 0, 1, 0};
  const ContingencyTable t = contingency(a, b);
  CHECK(t.k_a == 3);
  CHECK(t.k_b == 2);
  CHECK(t.n == 5);
  CHECK(t.at(0, 1) == 2);
  CHECK(t.at(1, 0) == 1);
  CHECK(t.at(1, 1) == 1);
  CHECK(t.at(2, 0) == 1);
  CHECK(t.at(0, 0) == 0);
}

TEST_CASE("contingency rejects bad input") {
  CHECK_THROWS_AS(contingency({0, 1}, {0}), DataError);
  CHECK_THROWS_AS(contingency({0, -1}, {0, 0}), DataError);
  CHECK_THROWS_AS(nmi({}, {}), DataError);
  CHECK_THROWS_AS(misclassification_rate({}, {}), DataError);
  CHECK_THROWS_AS(exact_recovery({}, {}), DataError);
}

TEST_CASE("nmi matches a hand-computed value in both variants") {
  // a=(0,0,1,1), b=(0,0,1,0):
  //   I  = 1/2 log(4/3) + 1/4 log(2/3) + 1/4 log 2
  //   Ha = log 2, Hb = -(3/4 log 3/4 + 1/4 log 1/4)
  const LabelVector a = {0, 0, 1, 1};
  const LabelVector b = {0, 0, 1, 0};
  CHECK(nmi(a, b) == doctest::Approx(0.3437110184854508).epsilon(1e-12));
  CHECK(nmi(a, b, NmiVariant::sqrt_norm) ==
        doctest::Approx(0.3455920299442113).epsilon(1e-12));
}

TEST_CASE("nmi is symmetric and permutation invariant") {
  const LabelVector a = random_labels(200, 3, 11);
  const LabelVector b = random_labels(200, 4, 12);
  CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));

  LabelVector b_perm = b;  // swap class ids 0 <-> 2
  for (auto& x : b_perm) x = (x == 0) ? 2 : (x == 2 ? 0 : x);
  CHECK(nmi(a, b_perm) == doctest::Approx(nmi(a, b)).epsilon(1e-12));
}

TEST_CASE("nmi of identical partitions is 1") {
  const LabelVector a = random_labels(100, 3, 5);
  CHECK(nmi(a, a) == doctest::Approx(1.0));
  CHECK(nmi(a, a, NmiVariant::sqrt_norm) == doctest::Approx(1.0));
}

TEST_CASE("nmi degenerate partitions") {
  const LabelVector ones(50, 0);
  const LabelVector mixed = random_labels(50, 2, 3);
  // both single-cluster: defined as 1
  CHECK(nmi(ones, ones) == 1.0);
  // one single-cluster, one informative: no mutual information
  CHECK(nmi(ones, mixed) == doctest::Approx(0.0));
  CHECK(nmi(ones, mixed, NmiVariant::sqrt_norm) == 0.0);
}

TEST_CASE("nmi of independent labelings is near zero") {
  const LabelVector a = random_labels(20000, 2, 100);
  const LabelVector b = random_labels(20000, 2, 200);
  CHECK(nmi(a, b) < 0.01);
}

TEST_CASE("misclassification matches a hand-worked case") {
  // Best matching keeps 3 of 4 nodes: rate 1/4.
  CHECK(misclassification_rate({0, 0, 1, 1}, {0, 0, 1, 0}) == doctest::Approx(0.25));
  CHECK(misclassification_rate({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(0.0));
  CHECK(misclassification_rate({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.5));
}

TEST_CASE("matcher agrees with brute force over random instances") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int ka = 2 + static_cast<int>(s % 4);       // 2..5 classes
    const int kb = 2 + static_cast<int>((s / 4) % 4);
    const LabelVector a = random_labels(60, ka, 1000 + s);
    const LabelVector b = random_labels(60, kb, 2000 + s);
    const ContingencyTable t = contingency(a, b);
    const double expected =
        1.0 - static_cast<double>(brute_force_agreement(a, b)) / static_cast<double>(t.n);
    CHECK(misclassification_rate(a, b) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("misclassification handles unequal class counts") {
  // b uses 3 classes against a's 2; padding must not distort the optimum.
  const LabelVector a = {0, 0, 0, 1, 1, 1};
  const LabelVector b = {2, 2, 2, 0, 1, 1};
  const double expected =
      1.0 - static_cast<double>(brute_force_agreement(a, b)) / 6.0;
  CHECK(misclassification_rate(a, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exact recovery is permutation-aware") {
  const LabelVector a = {0, 0, 1, 1, 2};
  LabelVector b = {2, 2, 0, 0, 1};
  CHECK(exact_recovery(a, b));
  b[4] = 0;
  CHECK_FALSE(exact_recovery(a, b));
  CHECK(exact_recovery(a, a));
}

TEST_CASE("exact recovery implies zero misclassification and unit nmi") {
  const LabelVector a = random_labels(300, 4, 77);
  LabelVector b = a;
  for (auto& x : b) x = (x + 2) % 4;  // relabel by a cyclic permutation
  REQUIRE(exact_recovery(a, b));
  CHECK(misclassification_rate(a, b) == 0.0);
  CHECK(nmi(a, b) == doctest::Approx(1.0));
}

}  // TEST_SUITE
