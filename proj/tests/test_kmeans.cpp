#include <cmath>
#include <cstdint>
#include <vector>

#include "blockfit/kmeans.hpp"
#include "blockfit/metrics.hpp"
#include "blockfit/rng.hpp"
#include "blockfit/types.hpp"
#include "doctest.h"

using namespace blockfit;

namespace {

// points: three tight 2-d clouds of `per` points around given centers
Matrix three_clouds(Index per, std::uint64_t seed) {
  const double cx[3] = {0.0, 10.0, 0.0};
  const double cy[3] = {0.0, 0.0, 10.0};
  SplitMix64 rng(seed);
  Matrix pts(3 * per, 2);
  for (int c = 0; c < 3; ++c)
    for (Index i = 0; i < per; ++i) {
      pts(c * per + i, 0) = cx[c] + 0.1 * (rng.next_double() - 0.5);
      pts(c * per + i, 1) = cy[c] + 0.1 * (rng.next_double() - 0.5);
    }
  return pts;
}

double inertia_of(const Matrix& pts, const LabelVector& labels, int K) {
  Matrix centers(K, pts.cols(), 0.0);
  std::vector<Index> counts(static_cast<size_t>(K), 0);
  for (Index i = 0; i < pts.rows(); ++i) {
    counts[static_cast<size_t>(labels[i])]++;
    for (Index d = 0; d < pts.cols(); ++d) centers(labels[i], d) += pts(i, d);
  }
  for (int k = 0; k < K; ++k)
    if (counts[static_cast<size_t>(k)] > 0)
      for (Index d = 0; d < pts.cols(); ++d)
        centers(k, d) /= static_cast<double>(counts[static_cast<size_t>(k)]);
  double s = 0.0;
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index d = 0; d < pts.cols(); ++d) {
      const double diff = pts(i, d) - centers(labels[i], d);
      s += diff * diff;
    }
  return s;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("k=1 labels everything zero") {
  Matrix pts(7, 2);
  for (Index i = 0; i < 7; ++i) {
    pts(i, 0) = static_cast<double>(i);
    pts(i, 1) = -static_cast<double>(i);
  }
  const LabelVector labels = kmeans(pts, 1, 3, 50, 0);
  for (int l : labels) CHECK(l == 0);
}

TEST_CASE("well separated clouds are recovered exactly") {
  const Matrix pts = three_clouds(40, 11);
  const LabelVector labels = kmeans(pts, 3, 10, 100, 7);
  LabelVector truth(120);
  for (Index i = 0; i < 120; ++i) truth[static_cast<size_t>(i)] = static_cast<int>(i / 40);
  CHECK(exact_recovery(truth, labels));
}

TEST_CASE("lloyd from explicit centers is deterministic and assigns nearest") {
  Matrix pts(4, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = 1.0;
  pts(2, 0) = 10.0;
  pts(3, 0) = 11.0;
  Matrix centers(2, 1);
  centers(0, 0) = 0.0;
  centers(1, 0) = 10.0;
  const auto res = kmeans_lloyd(pts, centers, 10);
  CHECK(res.labels == LabelVector{0, 0, 1, 1});
  CHECK(res.centers(0, 0) == doctest::Approx(0.5));
  CHECK(res.centers(1, 0) == doctest::Approx(10.5));
  CHECK(res.inertia == doctest::Approx(1.0));  // 4 * 0.25
}

TEST_CASE("nearest-center ties go to the smaller index") {
  Matrix pts(1, 1);
  pts(0, 0) = 5.0;
  Matrix centers(2, 1);
  centers(0, 0) = 4.0;
  centers(1, 0) = 6.0;  // equidistant
  const auto res = kmeans_lloyd(pts, centers, 1);
  CHECK(res.labels[0] == 0);
}

TEST_CASE("empty cluster is refilled with the farthest point") {
  // Both centers start on the left blob; the right blob is initially empty-handed.
  Matrix pts(4, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = 0.1;
  pts(2, 0) = 9.9;
  pts(3, 0) = 10.0;
  Matrix centers(2, 1);
  centers(0, 0) = 0.0;
  centers(1, 0) = 100.0;  // grabs nothing on the first assignment
  const auto res = kmeans_lloyd(pts, centers, 20);
  // after refill + iterations both clusters are non-empty and optimal
  CHECK(res.labels[0] == res.labels[1]);
  CHECK(res.labels[2] == res.labels[3]);
  CHECK(res.labels[0] != res.labels[2]);
  CHECK(res.inertia == doctest::Approx(0.01));
}

TEST_CASE("restarts find the optimal split of a small instance") {
  // brute-force optimum over all 2-partitions of 6 one-dimensional points
  Matrix pts(6, 1);
  const double xs[6] = {0.0, 0.2, 0.5, 5.0, 5.1, 5.3};
  for (Index i = 0; i < 6; ++i) pts(i, 0) = xs[i];
  double best = 1e300;
  for (int mask = 1; mask < 63; ++mask) {  // non-trivial bipartitions
    LabelVector l(6);
    for (int i = 0; i < 6; ++i) l[static_cast<size_t>(i)] = (mask >> i) & 1;
    best = std::min(best, inertia_of(pts, l, 2));
  }
  const LabelVector labels = kmeans(pts, 2, 20, 100, 3);
  CHECK(inertia_of(pts, labels, 2) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("same seed, same labels; duplicates handled") {
  Matrix pts(10, 2);
  for (Index i = 0; i < 10; ++i) {
    pts(i, 0) = (i < 5) ? 1.0 : 2.0;  // two stacks of identical points
    pts(i, 1) = 0.0;
  }
  const LabelVector a = kmeans(pts, 2, 5, 50, 13);
  const LabelVector b = kmeans(pts, 2, 5, 50, 13);
  CHECK(a == b);
  LabelVector truth(10);
  for (Index i = 0; i < 10; ++i) truth[static_cast<size_t>(i)] = i < 5 ? 0 : 1;
  CHECK(exact_recovery(truth, a));
}

}  // TEST_SUITE
