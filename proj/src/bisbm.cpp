#include "blockfit/bisbm.hpp"

namespace blockfit {

Responsibilities bi_e_step(const SparseGraph& g, const BiBlockParams& params,
                           const LabelVector& e) {
  return e_step(g, params, e);
}

BiBlockParams bi_m_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                        int k_col, const BiBlockParams* prev, double eps_p) {
  return m_step(g, tau, e, k_col, prev, eps_p);
}

LabelVector bi_update_labels(const SparseGraph& g_cols, const BiBlockParams& params,
                             const Responsibilities& tau) {
  return update_column_labels(g_cols, params, tau);
}

BisbmFitResult fit_bisbm(const SparseGraph& g, int k1, int k2, const LabelVector& init_c1,
                         const LabelVector& init_c2, const FitConfig& cfg) {
  if (!g.bipartite) throw DataError("fit_bisbm: expected a bipartite graph");
  const SparseGraph gt = transpose(g);
  BisbmFitResult out;
  out.c2 = detail::rect_fit(g, gt, k1, k2, init_c1, init_c2, cfg);
  out.c1 = detail::rect_fit(gt, g, k2, k1, init_c2, init_c1, cfg);
  return out;
}

}  // namespace blockfit
