#pragma once

#include <cstdint>

#include "blockfit/graph.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

struct ScpConfig {
  int k = 2;
  double reg_tau = 0.25;  // regularization, as a multiple of the mean degree
  double eig_tol = 1e-8;
  int eig_max_iter = 1000;
  int kmeans_restarts = 20;
  int kmeans_max_iter = 100;
  std::uint64_t seed = 0;
};

// Regularized spectral clustering: L = D_t^{-1/2} (A + reg*dbar/n * J) D_t^{-1/2}
// with D_t = D + reg*dbar*I (rank-one term applied implicitly), top-k
// eigenvectors by magnitude, rows normalized to unit length (zero rows kept
// zero), then k-means on the rows.
LabelVector scp(const SparseGraph& g, const ScpConfig& cfg);

// Same pipeline on the product operator A*A' (rows_side) or A'*A of a
// bipartite graph, composed lazily from two sparse matvecs; "degrees" are the
// product's row sums.
LabelVector scp_on_product(const SparseGraph& g, bool rows_side, const ScpConfig& cfg);

}  // namespace blockfit
