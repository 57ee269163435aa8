#include "blockfit/ppl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "blockfit/parallel.hpp"

namespace blockfit {

namespace {

void check_labels(const LabelVector& e, Index expected_len, int k, const char* what) {
  if (static_cast<Index>(e.size()) != expected_len) {
    throw DataError(std::string(what) + ": label vector has length " +
                    std::to_string(e.size()) + ", expected " + std::to_string(expected_len));
  }
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] < 0 || e[j] >= k) {
      throw DataError(std::string(what) + ": label " + std::to_string(e[j]) + " at position " +
                      std::to_string(j) + " is outside [0, " + std::to_string(k) + ")");
    }
  }
}

void check_params(const BlockParams& params, const char* what) {
  const int k_row = static_cast<int>(params.pi.size());
  if (k_row == 0 || params.P.rows() != k_row || params.P.cols() == 0) {
    throw DataError(std::string(what) + ": parameter shapes are inconsistent");
  }
  double pi_sum = 0.0;
  for (double p : params.pi) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DataError(std::string(what) + ": pi has a negative or non-finite entry");
    }
    pi_sum += p;
  }
  if (std::abs(pi_sum - 1.0) > 1e-8) {
    throw DataError(std::string(what) + ": pi must sum to 1");
  }
  for (Index i = 0; i < params.P.rows() * params.P.cols(); ++i) {
    const double p = params.P.data()[i];
    if (!(p > 0.0) || !(p < 1.0)) {
      throw DataError(std::string(what) + ": P entries must lie strictly inside (0, 1)");
    }
  }
}

std::vector<std::int64_t> column_class_counts(const LabelVector& e, int k_col) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k_col), 0);
  for (int label : e) counts[static_cast<std::size_t>(label)] += 1;
  return counts;
}

// log(p / (1-p)) and log(1-p) tables for every block, precomputed once per pass.
struct LogTables {
  int k_row = 0;
  int k_col = 0;
  std::vector<double> logit;   // k_row x k_col
  std::vector<double> log1mp;  // k_row x k_col
};

LogTables make_log_tables(const Matrix& p) {
  LogTables t;
  t.k_row = static_cast<int>(p.rows());
  t.k_col = static_cast<int>(p.cols());
  t.logit.resize(static_cast<std::size_t>(t.k_row) * t.k_col);
  t.log1mp.resize(static_cast<std::size_t>(t.k_row) * t.k_col);
  for (Index i = 0; i < p.rows() * p.cols(); ++i) {
    const double v = p.data()[i];
    t.log1mp[static_cast<std::size_t>(i)] = std::log1p(-v);
    t.logit[static_cast<std::size_t>(i)] = std::log(v) - std::log1p(-v);
  }
  return t;
}

}  // namespace

namespace detail {

// Shared row scan: per-row class scores
//   s_il = log pi_l + sum_c cnt_c(i) logit(P_lc) + sum_c n_c log(1 - P_lc),
// where cnt_c(i) counts i's neighbors in column class c and n_c the class
// sizes. Log-sum-exp of the scores accumulates the objective; the softmax
// (when requested) gives the responsibilities.
double e_step_impl(const SparseGraph& g, const BlockParams& params, const LabelVector& e,
                   Matrix* tau_out) {
  const int k_row = static_cast<int>(params.pi.size());
  const int k_col = static_cast<int>(params.P.cols());
  const Index n_rows = g.n_rows;

  const LogTables tables = make_log_tables(params.P);
  const std::vector<std::int64_t> n_col = column_class_counts(e, k_col);

  std::vector<double> log_pi(static_cast<std::size_t>(k_row));
  for (int k = 0; k < k_row; ++k) {
    log_pi[static_cast<std::size_t>(k)] =
        params.pi[static_cast<std::size_t>(k)] > 0.0
            ? std::log(params.pi[static_cast<std::size_t>(k)])
            : -std::numeric_limits<double>::infinity();
  }

  // Class-size term is row-independent: base_l = log pi_l + sum_c n_c log(1-P_lc).
  std::vector<double> base(static_cast<std::size_t>(k_row));
  for (int l = 0; l < k_row; ++l) {
    double acc = log_pi[static_cast<std::size_t>(l)];
    for (int c = 0; c < k_col; ++c) {
      acc += static_cast<double>(n_col[static_cast<std::size_t>(c)]) *
             tables.log1mp[static_cast<std::size_t>(l) * k_col + c];
    }
    base[static_cast<std::size_t>(l)] = acc;
  }

  if (tau_out != nullptr) *tau_out = Matrix(n_rows, k_row);

  const Index chunks = parallel_chunk_count(n_rows);
  std::vector<double> ll_partial(static_cast<std::size_t>(chunks), 0.0);

  parallel_for(n_rows, [&](Index lo, Index hi, Index chunk) {
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(k_col), 0);
    std::vector<int> touched;
    touched.reserve(64);
    std::vector<double> score(static_cast<std::size_t>(k_row));
    double ll_local = 0.0;

    for (Index i = lo; i < hi; ++i) {
      touched.clear();
      for (Index idx = g.row_offsets[static_cast<std::size_t>(i)];
           idx < g.row_offsets[static_cast<std::size_t>(i) + 1]; ++idx) {
        const int c = e[static_cast<std::size_t>(g.col_indices[static_cast<std::size_t>(idx)])];
        if (cnt[static_cast<std::size_t>(c)] == 0) touched.push_back(c);
        cnt[static_cast<std::size_t>(c)] += 1;
      }

      for (int l = 0; l < k_row; ++l) score[static_cast<std::size_t>(l)] = base[static_cast<std::size_t>(l)];
      for (int c : touched) {
        const double w = static_cast<double>(cnt[static_cast<std::size_t>(c)]);
        for (int l = 0; l < k_row; ++l) {
          score[static_cast<std::size_t>(l)] += w * tables.logit[static_cast<std::size_t>(l) * k_col + c];
        }
      }
      for (int c : touched) cnt[static_cast<std::size_t>(c)] = 0;

      double smax = score[0];
      for (int l = 1; l < k_row; ++l) smax = std::max(smax, score[static_cast<std::size_t>(l)]);
      double z = 0.0;
      for (int l = 0; l < k_row; ++l) {
        score[static_cast<std::size_t>(l)] = std::exp(score[static_cast<std::size_t>(l)] - smax);
        z += score[static_cast<std::size_t>(l)];
      }
      ll_local += smax + std::log(z);
      if (tau_out != nullptr) {
        double* row = tau_out->row(i);
        for (int l = 0; l < k_row; ++l) row[l] = score[static_cast<std::size_t>(l)] / z;
      }
    }
    ll_partial[static_cast<std::size_t>(chunk)] = ll_local;
  });

  double ll = 0.0;
  for (double v : ll_partial) ll += v;
  if (!std::isfinite(ll)) {
    throw NumericalError("objective is not finite; parameters may have collapsed");
  }
  return ll;
}

}  // namespace detail

double log_pseudo_likelihood(const SparseGraph& g, const BlockParams& params,
                             const LabelVector& e) {
  check_params(params, "log_pseudo_likelihood");
  check_labels(e, g.n_cols, static_cast<int>(params.P.cols()), "log_pseudo_likelihood");
  return detail::e_step_impl(g, params, e, nullptr);
}

Responsibilities e_step(const SparseGraph& g, const BlockParams& params, const LabelVector& e) {
  check_params(params, "e_step");
  check_labels(e, g.n_cols, static_cast<int>(params.P.cols()), "e_step");
  Responsibilities r;
  detail::e_step_impl(g, params, e, &r.tau);
  return r;
}

BlockParams init_params_from_labels(const SparseGraph& g, const LabelVector& row_labels,
                                    const LabelVector& col_labels, int k_row, int k_col,
                                    double eps_p) {
  if (k_row < 1 || k_col < 1) throw DataError("init_params_from_labels: K must be at least 1");
  check_labels(row_labels, g.n_rows, k_row, "init_params_from_labels");
  check_labels(col_labels, g.n_cols, k_col, "init_params_from_labels");

  std::vector<std::int64_t> n_row(static_cast<std::size_t>(k_row), 0);
  for (int label : row_labels) n_row[static_cast<std::size_t>(label)] += 1;
  const std::vector<std::int64_t> n_col = column_class_counts(col_labels, k_col);

  std::vector<std::int64_t> block_edges(static_cast<std::size_t>(k_row) * k_col, 0);
  for (Index i = 0; i < g.n_rows; ++i) {
    const int k = row_labels[static_cast<std::size_t>(i)];
    for (Index idx = g.row_offsets[static_cast<std::size_t>(i)];
         idx < g.row_offsets[static_cast<std::size_t>(i) + 1]; ++idx) {
      const int l = col_labels[static_cast<std::size_t>(g.col_indices[static_cast<std::size_t>(idx)])];
      block_edges[static_cast<std::size_t>(k) * k_col + l] += 1;
    }
  }

  const double density =
      static_cast<double>(g.edge_count) /
      std::max(1.0, static_cast<double>(g.n_rows) * static_cast<double>(g.n_cols));

  BlockParams params;
  params.pi.assign(static_cast<std::size_t>(k_row), 0.0);
  for (int k = 0; k < k_row; ++k) {
    params.pi[static_cast<std::size_t>(k)] =
        static_cast<double>(n_row[static_cast<std::size_t>(k)]) / static_cast<double>(g.n_rows);
  }
  params.P = Matrix(k_row, k_col);
  for (int k = 0; k < k_row; ++k) {
    for (int l = 0; l < k_col; ++l) {
      const double denom = static_cast<double>(n_row[static_cast<std::size_t>(k)]) *
                           static_cast<double>(n_col[static_cast<std::size_t>(l)]);
      double p = denom > 0.0
                     ? static_cast<double>(block_edges[static_cast<std::size_t>(k) * k_col + l]) / denom
                     : density;
      params.P(k, l) = std::clamp(p, eps_p, 1.0 - eps_p);
    }
  }
  return params;
}

BlockParams init_params_from_labels(const SparseGraph& g, const LabelVector& e, int k,
                                    double eps_p) {
  if (g.bipartite) {
    throw DataError("init_params_from_labels: square overload needs a square graph");
  }
  return init_params_from_labels(g, e, e, k, k, eps_p);
}

BlockParams m_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                   int k_col, const BlockParams* prev, double eps_p) {
  const Index n_rows = g.n_rows;
  if (tau.tau.rows() != n_rows || tau.tau.cols() < 1) {
    throw DataError("m_step: responsibilities shape does not match the graph");
  }
  const int k_row = static_cast<int>(tau.tau.cols());
  check_labels(e, g.n_cols, k_col, "m_step");

  const std::vector<std::int64_t> n_col = column_class_counts(e, k_col);

  const Index chunks = parallel_chunk_count(n_rows);
  std::vector<double> t_partial(static_cast<std::size_t>(chunks) * k_row, 0.0);
  std::vector<double> num_partial(static_cast<std::size_t>(chunks) * k_row * k_col, 0.0);

  parallel_for(n_rows, [&](Index lo, Index hi, Index chunk) {
    double* t_local = t_partial.data() + static_cast<std::size_t>(chunk) * k_row;
    double* num_local = num_partial.data() + static_cast<std::size_t>(chunk) * k_row * k_col;
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(k_col), 0);
    std::vector<int> touched;
    touched.reserve(64);

    for (Index i = lo; i < hi; ++i) {
      const double* tau_row = tau.tau.row(i);
      for (int k = 0; k < k_row; ++k) t_local[k] += tau_row[k];

      touched.clear();
      for (Index idx = g.row_offsets[static_cast<std::size_t>(i)];
           idx < g.row_offsets[static_cast<std::size_t>(i) + 1]; ++idx) {
        const int c = e[static_cast<std::size_t>(g.col_indices[static_cast<std::size_t>(idx)])];
        if (cnt[static_cast<std::size_t>(c)] == 0) touched.push_back(c);
        cnt[static_cast<std::size_t>(c)] += 1;
      }
      for (int c : touched) {
        const double w = static_cast<double>(cnt[static_cast<std::size_t>(c)]);
        cnt[static_cast<std::size_t>(c)] = 0;
        for (int k = 0; k < k_row; ++k) {
          num_local[static_cast<std::size_t>(k) * k_col + c] += w * tau_row[k];
        }
      }
    }
  });

  std::vector<double> t_sum(static_cast<std::size_t>(k_row), 0.0);
  std::vector<double> num(static_cast<std::size_t>(k_row) * k_col, 0.0);
  for (Index c = 0; c < chunks; ++c) {
    for (int k = 0; k < k_row; ++k) {
      t_sum[static_cast<std::size_t>(k)] += t_partial[static_cast<std::size_t>(c) * k_row + k];
    }
    for (int kl = 0; kl < k_row * k_col; ++kl) {
      num[static_cast<std::size_t>(kl)] +=
          num_partial[static_cast<std::size_t>(c) * k_row * k_col + kl];
    }
  }

  const double density =
      static_cast<double>(g.edge_count) /
      std::max(1.0, static_cast<double>(g.n_rows) * static_cast<double>(g.n_cols));

  BlockParams params;
  params.pi.assign(static_cast<std::size_t>(k_row), 0.0);
  double total = 0.0;
  for (double t : t_sum) total += t;
  if (!(total > 0.0)) throw NumericalError("m_step: responsibilities sum to zero");
  double head = 0.0;
  for (int k = 0; k + 1 < k_row; ++k) {
    params.pi[static_cast<std::size_t>(k)] = t_sum[static_cast<std::size_t>(k)] / total;
    head += params.pi[static_cast<std::size_t>(k)];
  }
  params.pi[static_cast<std::size_t>(k_row - 1)] = std::max(0.0, 1.0 - head);

  params.P = Matrix(k_row, k_col);
  for (int k = 0; k < k_row; ++k) {
    for (int l = 0; l < k_col; ++l) {
      const double denom =
          t_sum[static_cast<std::size_t>(k)] * static_cast<double>(n_col[static_cast<std::size_t>(l)]);
      double p;
      if (n_col[static_cast<std::size_t>(l)] == 0 || t_sum[static_cast<std::size_t>(k)] < 1e-12) {
        p = prev != nullptr ? prev->P(k, l) : density;
      } else {
        p = num[static_cast<std::size_t>(k) * k_col + l] / denom;
      }
      params.P(k, l) = std::clamp(p, eps_p, 1.0 - eps_p);
    }
  }
  return params;
}

InnerEmResult run_inner_em(const SparseGraph& g, BlockParams params, const LabelVector& e,
                           const FitConfig& cfg) {
  check_params(params, "run_inner_em");
  const int k_col = static_cast<int>(params.P.cols());
  check_labels(e, g.n_cols, k_col, "run_inner_em");

  InnerEmResult out;
  out.params = std::move(params);
  double prev_ll = 0.0;
  bool have_prev = false;

  // The loop always ends right after an E-step so the returned
  // responsibilities match the returned parameters exactly.
  for (int it = 1; it <= cfg.inner_max_iter; ++it) {
    out.loglik = detail::e_step_impl(g, out.params, e, &out.tau.tau);
    out.iterations = it;
    if (have_prev) {
      const double denom = std::max(std::abs(prev_ll), 1e-12);
      if (std::abs(out.loglik - prev_ll) <= cfg.inner_tol * denom) break;
    }
    prev_ll = out.loglik;
    have_prev = true;
    if (it == cfg.inner_max_iter) break;
    out.params = m_step(g, out.tau, e, k_col, &out.params, cfg.eps_p);
  }
  return out;
}

LabelVector update_column_labels(const SparseGraph& g_cols, const BlockParams& params,
                                 const Responsibilities& tau) {
  check_params(params, "update_column_labels");
  const int k_row = static_cast<int>(params.pi.size());
  const int k_col = static_cast<int>(params.P.cols());
  if (tau.tau.cols() != k_row || tau.tau.rows() != g_cols.n_cols) {
    throw DataError("update_column_labels: responsibilities shape does not match");
  }

  const LogTables tables = make_log_tables(params.P);

  // Column sums of tau, merged in chunk order.
  const Index n_rows = tau.tau.rows();
  const Index row_chunks = parallel_chunk_count(n_rows);
  std::vector<double> t_partial(static_cast<std::size_t>(row_chunks) * k_row, 0.0);
  parallel_for(n_rows, [&](Index lo, Index hi, Index chunk) {
    double* t_local = t_partial.data() + static_cast<std::size_t>(chunk) * k_row;
    for (Index i = lo; i < hi; ++i) {
      const double* row = tau.tau.row(i);
      for (int k = 0; k < k_row; ++k) t_local[k] += row[k];
    }
  });
  std::vector<double> t_sum(static_cast<std::size_t>(k_row), 0.0);
  for (Index c = 0; c < row_chunks; ++c) {
    for (int k = 0; k < k_row; ++k) {
      t_sum[static_cast<std::size_t>(k)] += t_partial[static_cast<std::size_t>(c) * k_row + k];
    }
  }

  // Candidate-class constant: w0_k = sum_l T_l log(1 - P_lk).
  std::vector<double> w0(static_cast<std::size_t>(k_col), 0.0);
  for (int k = 0; k < k_col; ++k) {
    double acc = 0.0;
    for (int l = 0; l < k_row; ++l) {
      acc += t_sum[static_cast<std::size_t>(l)] * tables.log1mp[static_cast<std::size_t>(l) * k_col + k];
    }
    w0[static_cast<std::size_t>(k)] = acc;
  }

  const Index n_cols_nodes = g_cols.n_rows;
  LabelVector labels(static_cast<std::size_t>(n_cols_nodes), 0);
  parallel_for(n_cols_nodes, [&](Index lo, Index hi, Index) {
    std::vector<double> m_row(static_cast<std::size_t>(k_row));
    for (Index j = lo; j < hi; ++j) {
      std::fill(m_row.begin(), m_row.end(), 0.0);
      for (Index idx = g_cols.row_offsets[static_cast<std::size_t>(j)];
           idx < g_cols.row_offsets[static_cast<std::size_t>(j) + 1]; ++idx) {
        const double* row =
            tau.tau.row(g_cols.col_indices[static_cast<std::size_t>(idx)]);
        for (int l = 0; l < k_row; ++l) m_row[static_cast<std::size_t>(l)] += row[l];
      }
      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < k_col; ++k) {
        double score = w0[static_cast<std::size_t>(k)];
        for (int l = 0; l < k_row; ++l) {
          score += m_row[static_cast<std::size_t>(l)] * tables.logit[static_cast<std::size_t>(l) * k_col + k];
        }
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
      labels[static_cast<std::size_t>(j)] = best;
    }
  });
  return labels;
}

namespace detail {

namespace {

// Optional rescue for column classes the label update emptied: move the most
// uncertain nodes (smallest max_k tau_jk) into each empty class.
void revive_empty_classes(LabelVector& e, int k_col, const Matrix& tau) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k_col), 0);
  for (int label : e) counts[static_cast<std::size_t>(label)] += 1;

  std::vector<char> used(e.size(), 0);
  for (int k = 0; k < k_col; ++k) {
    if (counts[static_cast<std::size_t>(k)] != 0) continue;
    Index best_j = -1;
    double best_flat = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < tau.rows(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (counts[static_cast<std::size_t>(e[static_cast<std::size_t>(j)])] <= 1) continue;
      const double* row = tau.row(j);
      double peak = row[0];
      for (Index l = 1; l < tau.cols(); ++l) peak = std::max(peak, row[l]);
      if (peak < best_flat) {
        best_flat = peak;
        best_j = j;
      }
    }
    if (best_j < 0) continue;
    counts[static_cast<std::size_t>(e[static_cast<std::size_t>(best_j)])] -= 1;
    e[static_cast<std::size_t>(best_j)] = k;
    counts[static_cast<std::size_t>(k)] += 1;
    used[static_cast<std::size_t>(best_j)] = 1;
  }
}

}  // namespace

FitResult rect_fit(const SparseGraph& g, const SparseGraph& g_cols, int k_row, int k_col,
                   const LabelVector& init_row_labels, const LabelVector& init_col_labels,
                   const FitConfig& cfg) {
  if (k_row < 1 || k_col < 1) throw DataError("fit: K must be at least 1");
  if (k_row > g.n_rows || k_col > g.n_cols) {
    throw DataError("fit: K exceeds the number of nodes on that side");
  }
  const auto t0 = std::chrono::steady_clock::now();

  FitResult result;
  result.labels = init_col_labels;
  result.params =
      init_params_from_labels(g, init_row_labels, init_col_labels, k_row, k_col, cfg.eps_p);
  result.objective_trace.push_back(
      e_step_impl(g, result.params, result.labels, nullptr));

  for (int s = 1; s <= cfg.outer_max_iter; ++s) {
    InnerEmResult inner = run_inner_em(g, std::move(result.params), result.labels, cfg);
    result.params = std::move(inner.params);
    result.inner_iteration_counts.push_back(inner.iterations);

    result.labels = update_column_labels(g_cols, result.params, inner.tau);
    if (cfg.revive_empty) revive_empty_classes(result.labels, k_col, inner.tau.tau);

    const double obj = e_step_impl(g, result.params, result.labels, nullptr);
    const double prev = result.objective_trace.back();
    result.objective_trace.push_back(obj);
    if (std::abs(obj - prev) <= cfg.outer_tol * std::max(std::abs(prev), 1e-12)) {
      result.converged = true;
      break;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  result.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return result;
}

}  // namespace detail

FitResult fit(const SparseGraph& g, int k, const LabelVector& init_labels,
              const FitConfig& cfg) {
  if (g.bipartite) throw DataError("fit: expected a square graph (use the bipartite fitter)");
  check_labels(init_labels, g.n_cols, std::max(k, 1), "fit");
  return detail::rect_fit(g, g, k, k, init_labels, init_labels, cfg);
}

LabelVector refine_once(const SparseGraph& g, const LabelVector& e0,
                        const std::optional<BlockParams>& params_hint, const FitConfig& cfg) {
  if (g.bipartite) throw DataError("refine_once: expected a square graph");
  BlockParams params;
  if (params_hint.has_value()) {
    params = *params_hint;
    check_params(params, "refine_once");
    check_labels(e0, g.n_cols, static_cast<int>(params.P.cols()), "refine_once");
  } else {
    int k = 1;
    for (int label : e0) k = std::max(k, label + 1);
    check_labels(e0, g.n_cols, k, "refine_once");
    params = init_params_from_labels(g, e0, k, cfg.eps_p);
  }
  InnerEmResult inner = run_inner_em(g, std::move(params), e0, cfg);
  return update_column_labels(g, inner.params, inner.tau);
}

}  // namespace blockfit
