#pragma once

#include "blockfit/graph.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

// Bipartite mixture parameters: pi over the latent row-side classes, P a
// rectangular K_row x K_col probability matrix (no symmetry requirement).
using BiBlockParams = BlockParams;

// Rectangular analogues of the square kernels. The row side of g carries the
// latent mixture; e labels the column side.
Responsibilities bi_e_step(const SparseGraph& g, const BiBlockParams& params,
                           const LabelVector& e);
BiBlockParams bi_m_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                        int k_col, const BiBlockParams* prev = nullptr, double eps_p = 1e-10);
LabelVector bi_update_labels(const SparseGraph& g_cols, const BiBlockParams& params,
                             const Responsibilities& tau);

struct BisbmFitResult {
  FitResult c2;  // column-side labels, fitted on A  (rows latent, K1 classes)
  FitResult c1;  // row-side labels, fitted on A^T (columns latent, K2 classes)
};

// Two independent one-sided fits: column labels c2 estimated on A with K1
// latent row classes, then row labels c1 estimated on A^T with K2 latent
// classes. The two runs are exactly symmetric code paths.
BisbmFitResult fit_bisbm(const SparseGraph& g, int k1, int k2, const LabelVector& init_c1,
                         const LabelVector& init_c2, const FitConfig& cfg = {});

}  // namespace blockfit
