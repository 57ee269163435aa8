#pragma once

#include <cstdint>
#include <vector>

#include "blockfit/graph.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

struct SbmSpec {
  Index n = 0;
  std::vector<double> pi;  // class proportions, sums to 1
  Matrix P;                // K x K symmetric edge probabilities
};

struct DcsbmSpec {
  Index n = 0;
  std::vector<double> pi;
  Matrix P;
  std::vector<double> theta;  // per-node degree weights, sample mean 1
};

struct BisbmSpec {
  Index m = 0;  // type-1 (row) nodes
  Index n = 0;  // type-2 (column) nodes
  std::vector<double> pi1;
  std::vector<double> pi2;
  Matrix P;  // K1 x K2
};

struct SbmSample {
  SparseGraph graph;
  LabelVector labels;
};

struct BisbmSample {
  SparseGraph graph;  // bipartite m x n
  LabelVector labels_rows;
  LabelVector labels_cols;
};

// Edge-probability matrix from the out-in ratio parameterization: P* is
// diag(omega) when beta == 0, otherwise diag(omega/beta) with unit
// off-diagonals; P = lambda / ((n-1) * pi' P* pi) * P*, so a sampled network
// has expected average degree lambda. Entries > 1 are a parameter error.
Matrix build_edge_prob_matrix(int K, double beta, const std::vector<double>& omega,
                              double lambda, const std::vector<double>& pi, Index n);

// Labels i.i.d. categorical(pi); each unordered pair {i,j} is an edge with
// probability P[c_i][c_j]. Deterministic given seed. Uses per-pair draws for
// n <= 10^4 and geometric skipping within block pairs above that.
SbmSample sample_sbm(const SbmSpec& spec, std::uint64_t seed);

// Edge draws of sample_sbm with the labels fixed by the caller instead of
// drawn from pi. With labels equal to sample_sbm's draw on the same seed the
// returned graph is identical. Used when the truth must have exact class
// counts (e.g. balanced communities), which perturb_labels requires.
SparseGraph sample_sbm_edges(const LabelVector& labels, const Matrix& P,
                             std::uint64_t seed);

// Bernoulli(theta_i * theta_j * P[c_i][c_j]) edges; theta == 1 reproduces
// sample_sbm draw-for-draw on the same seed. Pair rates above 1 are a
// parameter error.
SbmSample sample_dcsbm(const DcsbmSpec& spec, std::uint64_t seed);

// Two-point degree weights: theta_i is 2/(m+1) or 2m/(m+1) with equal
// probability (mean 1 in expectation); the raw variant returns those draws,
// the plain variant rescales the vector to sample mean exactly 1.
std::vector<double> sample_theta_two_point_raw(Index n, int m, std::uint64_t seed);
std::vector<double> sample_theta_two_point(Index n, int m, std::uint64_t seed);

// Independent Bernoulli(P[c1_i][c2_j]) bi-adjacency entries.
BisbmSample sample_bisbm(const BisbmSpec& spec, std::uint64_t seed);

// Initial labels with exact per-class overlap: floor(gamma_k * m_k) nodes of
// true class k keep label k; the surplus is distributed round-robin (by node
// index) over the other classes so output class counts equal the truth's.
LabelVector perturb_labels(const LabelVector& truth, const std::vector<double>& gamma,
                           std::uint64_t seed);
LabelVector perturb_labels(const LabelVector& truth, double gamma, std::uint64_t seed);

// Relabels random nodes (uniform over all classes) until NMI against the
// truth lands within +-0.02 of target, by bisection on the flip count.
LabelVector perturb_labels_to_nmi(const LabelVector& truth, double target_nmi,
                                  std::uint64_t seed);

}  // namespace blockfit
