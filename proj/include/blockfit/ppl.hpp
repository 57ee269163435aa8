#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blockfit/graph.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

// Mixture parameters (pi, P). pi is over the latent row classes; P maps
// (row class, column class) to an edge probability, clamped away from {0,1}.
// Square fits have K_row == K_col; bipartite fits are rectangular.
struct BlockParams {
  std::vector<double> pi;
  Matrix P;
};

// Posterior row-class probabilities, one row per graph row.
struct Responsibilities {
  Matrix tau;
};

struct FitConfig {
  double inner_tol = 1e-8;  // relative objective change ending the inner EM
  int inner_max_iter = 100;
  double outer_tol = 1e-6;  // relative objective change ending the outer loop
  int outer_max_iter = 60;
  double eps_p = 1e-10;  // probability clamp [eps_p, 1-eps_p]
  bool revive_empty = false;
  std::uint64_t seed = 0;
};

struct FitResult {
  LabelVector labels;
  BlockParams params;
  std::vector<double> objective_trace;  // objective per outer iteration, ascending
  std::vector<int> inner_iteration_counts;
  bool converged = false;
  double runtime_ms = 0.0;
};

// Row-mixture log pseudo-likelihood of the labeled-columns model:
// sum_i log sum_l pi_l prod_j P[l][e_j]^A_ij (1-P[l][e_j])^(1-A_ij),
// evaluated in the log domain in O(|E|*K + n*K^2).
double log_pseudo_likelihood(const SparseGraph& g, const BlockParams& params,
                             const LabelVector& e);

// Empirical parameters from labels: pi from row-class fractions, P from
// block edge densities. Empty blocks fall back to the global density;
// everything clamped to [eps_p, 1-eps_p].
BlockParams init_params_from_labels(const SparseGraph& g, const LabelVector& row_labels,
                                    const LabelVector& col_labels, int k_row, int k_col,
                                    double eps_p = 1e-10);
BlockParams init_params_from_labels(const SparseGraph& g, const LabelVector& e, int k,
                                    double eps_p = 1e-10);

// Posterior row-class responsibilities at (params, e); softmax of the same
// per-row class scores log_pseudo_likelihood accumulates.
Responsibilities e_step(const SparseGraph& g, const BlockParams& params,
                        const LabelVector& e);

// Mixture maximizers at fixed responsibilities: pi_k = mean tau_k,
// P_kl = (tau-weighted edges into column class l) / (T_k * n_l). Blocks with
// an empty denominator keep their previous value (global density if absent).
BlockParams m_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                   int k_col, const BlockParams* prev = nullptr, double eps_p = 1e-10);

// EM on (pi, P) at fixed column labels until the objective's relative change
// drops below inner_tol. Always returns responsibilities freshly computed at
// the returned parameters (the loop exits right after an E-step).
struct InnerEmResult {
  BlockParams params;
  Responsibilities tau;
  int iterations = 0;  // number of E-steps performed
  double loglik = 0.0;
};
InnerEmResult run_inner_em(const SparseGraph& g, BlockParams params, const LabelVector& e,
                           const FitConfig& cfg);

// Node-wise column-label maximization:
// e_j = argmax_k sum_l logit(P_lk) M_jl + sum_l T_l log(1-P_lk), with
// M_jl the tau-mass of j's neighbors. Ties pick the smallest k. g_cols is
// the transpose adjacency (a symmetric square graph is its own transpose).
LabelVector update_column_labels(const SparseGraph& g_cols, const BlockParams& params,
                                 const Responsibilities& tau);

// Alternating maximization: inner EM over (pi, P), then the label update,
// until the objective's relative change drops below outer_tol or
// outer_max_iter is hit. The recorded trace is non-decreasing.
FitResult fit(const SparseGraph& g, int k, const LabelVector& init_labels,
              const FitConfig& cfg = {});

// One-step estimator: parameters from e0 (or the hint), one inner EM to
// convergence, one label update.
LabelVector refine_once(const SparseGraph& g, const LabelVector& e0,
                        const std::optional<BlockParams>& params_hint = std::nullopt,
                        const FitConfig& cfg = {});

namespace detail {
// Rectangular engine shared with the bipartite fitter: rows of g carry the
// latent mixture (k_row classes), columns carry the label vector (k_col
// classes); g_cols must be transpose(g).
FitResult rect_fit(const SparseGraph& g, const SparseGraph& g_cols, int k_row, int k_col,
                   const LabelVector& init_row_labels, const LabelVector& init_col_labels,
                   const FitConfig& cfg);
double e_step_impl(const SparseGraph& g, const BlockParams& params, const LabelVector& e,
                   Matrix* tau_out);
}  // namespace detail

}  // namespace blockfit
