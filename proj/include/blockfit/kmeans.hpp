#pragma once

#include <cstdint>

#include "blockfit/types.hpp"

namespace blockfit {

struct KmeansResult {
  LabelVector labels;
  double inertia = 0.0;
  Matrix centers;
};

// Lloyd iterations from explicit initial centers (also the deterministic
// test hook). Nearest-center ties go to the smaller index; a cluster left
// empty is refilled with the point farthest from its assigned center.
KmeansResult kmeans_lloyd(const Matrix& points, Matrix centers, int max_iter);

// Plus-plus seeding, `restarts` independent runs, lowest within-cluster sum
// of squares wins (ties: earliest restart).
LabelVector kmeans(const Matrix& points, int K, int restarts, int max_iter,
                   std::uint64_t seed);

}  // namespace blockfit
