#pragma once

#include <vector>

#include "blockfit/graph.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

// Degree-corrected mixture parameters: pi over latent row classes, Lambda a
// positive K x K rate matrix, theta a per-node activity vector with mean 1.
struct DCParams {
  std::vector<double> pi;
  Matrix Lambda;
  std::vector<double> theta;
};

struct DcFitConfig : FitConfig {
  double eps_lambda = 1e-10;  // lower floor for Lambda entries
  double eps_theta = 1e-10;   // lower floor for theta entries
  int theta_sweeps = 1;       // Gauss-Seidel passes per CM step
};

struct DcFitResult {
  LabelVector labels;
  DCParams params;
  std::vector<double> objective_trace;
  std::vector<int> inner_iteration_counts;
  bool converged = false;
  double runtime_ms = 0.0;
};

// Poisson-kernel row-mixture objective:
// sum_i log sum_l pi_l prod_j exp(-theta_i theta_j L[l][e_j]) (theta_i theta_j L[l][e_j])^A_ij,
// accumulated in the log domain in O(|E| + n K^2).
double dc_log_pseudo_likelihood(const SparseGraph& g, const DCParams& params,
                                const LabelVector& e);

// Empirical start: pi from class fractions, theta proportional to degree
// (isolated nodes get the floor) normalized to mean 1, Lambda from block edge
// counts over products of class theta sums.
DCParams init_dc_params(const SparseGraph& g, const LabelVector& e, int k,
                        double eps_lambda = 1e-10, double eps_theta = 1e-10);

// Row-class responsibilities: softmax of the same per-row class scores the
// objective accumulates (node-specific theta terms cancel).
Responsibilities dc_e_step(const SparseGraph& g, const DCParams& params, const LabelVector& e);

// Conditional maximization: pi and Lambda in closed form at theta_prev, then
// theta_sweeps ascending Gauss-Seidel passes where each theta_i is the
// positive root of 2 g_ii t^2 + h_i t - d_i = 0 (g_ii the expected rate
// coefficient, h_i the cross term over already/not-yet updated neighbors).
// After each pass theta is rescaled to mean 1 and Lambda absorbs the square
// of the scale, keeping all rates theta_i theta_j lambda unchanged.
DCParams dc_cm_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                    const DCParams& prev, const DcFitConfig& cfg = {});

// Node-wise label maximization:
// e_j = argmax_k [ -theta_j sum_l L[l][k] U_l + sum_l M_jl log L[l][k] ],
// U_l the theta-weighted tau mass, M_jl the tau mass of j's neighbors.
LabelVector dc_update_labels(const SparseGraph& g, const DCParams& params,
                             const Responsibilities& tau);

// Alternating maximization with an ECM inner loop at fixed labels; same loop
// skeleton and convergence rules as fit().
DcFitResult fit_dcsbm(const SparseGraph& g, int k, const LabelVector& init_labels,
                      const DcFitConfig& cfg = {});

}  // namespace blockfit
