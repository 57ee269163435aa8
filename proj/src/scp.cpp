#include "blockfit/scp.hpp"

#include <cmath>
#include <vector>

#include "blockfit/eigen.hpp"
#include "blockfit/kmeans.hpp"
#include "blockfit/parallel.hpp"
#include "blockfit/rng.hpp"

namespace blockfit {

namespace {

double det_sum(const double* x, Index n) {
  std::vector<double> part(parallel_chunk_count(n), 0.0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double s = 0.0;
    for (Index i = lo; i < hi; ++i) s += x[i];
    part[chunk] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void spmv(const SparseGraph& g, const double* x, double* y) {
  parallel_for(g.n_rows, [&](Index lo, Index hi, Index) {
    for (Index i = lo; i < hi; ++i) {
      double s = 0.0;
      for (const Index* p = g.row_begin(i); p != g.row_end(i); ++p) s += x[*p];
      y[i] = s;
    }
  });
}

// Shared tail of both SCP variants: given the base operator (A or a product)
// and its row sums, apply regularized normalization, solve, cluster.
LabelVector scp_pipeline(Index n, const std::vector<double>& row_sums,
                         const std::function<void(const double*, double*)>& base_apply,
                         const ScpConfig& cfg) {
  if (cfg.k < 1) throw DataError("scp: need k >= 1");
  if (cfg.k >= n) throw DataError("scp: need k < node count");
  double dbar = 0.0;
  for (double s : row_sums) dbar += s;
  dbar /= static_cast<double>(n);
  if (dbar <= 0.0) throw DataError("scp: graph has no edges");

  std::vector<double> inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    const double dt = row_sums[i] + cfg.reg_tau * dbar;
    inv_sqrt[i] = dt > 0.0 ? 1.0 / std::sqrt(dt) : 0.0;
  }
  const double rank1 = cfg.reg_tau * dbar / static_cast<double>(n);

  std::vector<double> z(n);
  SymmetricOp op;
  op.n = n;
  op.apply = [&](const double* x, double* y) {
    parallel_for(n, [&](Index lo, Index hi, Index) {
      for (Index i = lo; i < hi; ++i) z[i] = inv_sqrt[i] * x[i];
    });
    base_apply(z.data(), y);
    const double sigma = rank1 > 0.0 ? rank1 * det_sum(z.data(), n) : 0.0;
    parallel_for(n, [&](Index lo, Index hi, Index) {
      for (Index i = lo; i < hi; ++i) y[i] = inv_sqrt[i] * (y[i] + sigma);
    });
  };

  const EigenPairs pairs = top_eigenpairs(op, cfg.k, cfg.eig_tol, cfg.eig_max_iter,
                                          SplitMix64::derive(cfg.seed, 30));

  Matrix rows(n, cfg.k);
  parallel_for(n, [&](Index lo, Index hi, Index) {
    for (Index i = lo; i < hi; ++i) {
      double nrm = 0.0;
      for (int c = 0; c < cfg.k; ++c) nrm += pairs.vectors(i, c) * pairs.vectors(i, c);
      nrm = std::sqrt(nrm);
      const double inv = nrm > 0.0 ? 1.0 / nrm : 0.0;  // zero rows stay zero
      for (int c = 0; c < cfg.k; ++c) rows(i, c) = pairs.vectors(i, c) * inv;
    }
  });

  return kmeans(rows, cfg.k, cfg.kmeans_restarts, cfg.kmeans_max_iter,
                SplitMix64::derive(cfg.seed, 31));
}

}  // namespace

LabelVector scp(const SparseGraph& g, const ScpConfig& cfg) {
  if (g.bipartite) throw DataError("scp: bipartite input; use scp_on_product");
  std::vector<double> row_sums(g.n_rows);
  for (Index i = 0; i < g.n_rows; ++i) row_sums[i] = static_cast<double>(g.degree(i));
  return scp_pipeline(
      g.n_rows, row_sums, [&](const double* x, double* y) { spmv(g, x, y); }, cfg);
}

LabelVector scp_on_product(const SparseGraph& g, bool rows_side, const ScpConfig& cfg) {
  if (!g.bipartite) throw DataError("scp_on_product: expected a bipartite graph");
  const SparseGraph gt = transpose(g);
  const SparseGraph& first = rows_side ? gt : g;   // inner matvec
  const SparseGraph& second = rows_side ? g : gt;  // outer matvec
  const Index n = second.n_rows;

  std::vector<double> ones(first.n_cols, 1.0), tmp(first.n_rows), row_sums(n);
  spmv(first, ones.data(), tmp.data());
  spmv(second, tmp.data(), row_sums.data());

  std::vector<double> mid(first.n_rows);
  return scp_pipeline(
      n, row_sums,
      [&](const double* x, double* y) {
        spmv(first, x, mid.data());
        spmv(second, mid.data(), y);
      },
      cfg);
}

}  // namespace blockfit
