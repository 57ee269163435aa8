#include "blockfit/dcsbm.hpp"

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

void check_dc_params(const SparseGraph& g, const DCParams& params, const char* what) {
  const int k = static_cast<int>(params.pi.size());
  if (k == 0 || params.Lambda.rows() != k || params.Lambda.cols() != k) {
    throw DataError(std::string(what) + ": parameter shapes are inconsistent");
  }
  if (static_cast<Index>(params.theta.size()) != g.n_rows) {
    throw DataError(std::string(what) + ": theta length does not match the graph");
  }
  for (double v : params.Lambda.storage()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DataError(std::string(what) + ": Lambda entries must be positive and finite");
    }
  }
  for (double t : params.theta) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DataError(std::string(what) + ": theta entries must be positive and finite");
    }
  }
}

// Class-wise theta sums S_c = sum_{j: e_j = c} theta_j.
std::vector<double> class_theta_sums(const LabelVector& e, const std::vector<double>& theta,
                                     int k) {
  std::vector<double> s(static_cast<std::size_t>(k), 0.0);
  for (std::size_t j = 0; j < e.size(); ++j) {
    s[static_cast<std::size_t>(e[j])] += theta[j];
  }
  return s;
}

// Shared row scan behind the objective and the E-step. Per-row class scores
//   s_il = log pi_l - theta_i * sum_c L[l][c] S_c + sum_c cnt_c(i) log L[l][c];
// the objective adds the class-independent d_i log theta_i + sum_{j in N(i)}
// log theta_j per row.
double dc_e_step_impl(const SparseGraph& g, const DCParams& params, const LabelVector& e,
                      Matrix* tau_out) {
  const int k = static_cast<int>(params.pi.size());
  const Index n = g.n_rows;

  std::vector<double> log_lambda(static_cast<std::size_t>(k) * k);
  for (Index i = 0; i < params.Lambda.rows() * params.Lambda.cols(); ++i) {
    log_lambda[static_cast<std::size_t>(i)] = std::log(params.Lambda.data()[i]);
  }
  const std::vector<double> s_theta = class_theta_sums(e, params.theta, k);
  std::vector<double> rate(static_cast<std::size_t>(k), 0.0);
  for (int l = 0; l < k; ++l) {
    double acc = 0.0;
    for (int c = 0; c < k; ++c) {
      acc += params.Lambda(l, c) * s_theta[static_cast<std::size_t>(c)];
    }
    rate[static_cast<std::size_t>(l)] = acc;
  }
  std::vector<double> log_pi(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) {
    log_pi[static_cast<std::size_t>(l)] =
        params.pi[static_cast<std::size_t>(l)] > 0.0
            ? std::log(params.pi[static_cast<std::size_t>(l)])
            : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> log_theta(params.theta.size());
  for (std::size_t i = 0; i < params.theta.size(); ++i) log_theta[i] = std::log(params.theta[i]);

  if (tau_out != nullptr) *tau_out = Matrix(n, k);

  const Index chunks = parallel_chunk_count(n);
  std::vector<double> ll_partial(static_cast<std::size_t>(chunks), 0.0);

  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(k), 0);
    std::vector<int> touched;
    touched.reserve(64);
    std::vector<double> score(static_cast<std::size_t>(k));
    double ll_local = 0.0;

    for (Index i = lo; i < hi; ++i) {
      touched.clear();
      double neighbor_log_theta = 0.0;
      Index deg = 0;
      for (Index idx = g.row_offsets[static_cast<std::size_t>(i)];
           idx < g.row_offsets[static_cast<std::size_t>(i) + 1]; ++idx) {
        const Index j = g.col_indices[static_cast<std::size_t>(idx)];
        const int c = e[static_cast<std::size_t>(j)];
        if (cnt[static_cast<std::size_t>(c)] == 0) touched.push_back(c);
        cnt[static_cast<std::size_t>(c)] += 1;
        neighbor_log_theta += log_theta[static_cast<std::size_t>(j)];
        deg += 1;
      }

      const double theta_i = params.theta[static_cast<std::size_t>(i)];
      for (int l = 0; l < k; ++l) {
        score[static_cast<std::size_t>(l)] =
            log_pi[static_cast<std::size_t>(l)] - theta_i * rate[static_cast<std::size_t>(l)];
      }
      for (int c : touched) {
        const double w = static_cast<double>(cnt[static_cast<std::size_t>(c)]);
        cnt[static_cast<std::size_t>(c)] = 0;
        for (int l = 0; l < k; ++l) {
          score[static_cast<std::size_t>(l)] += w * log_lambda[static_cast<std::size_t>(l) * k + c];
        }
      }

      double smax = score[0];
      for (int l = 1; l < k; ++l) smax = std::max(smax, score[static_cast<std::size_t>(l)]);
      double z = 0.0;
      for (int l = 0; l < k; ++l) {
        score[static_cast<std::size_t>(l)] = std::exp(score[static_cast<std::size_t>(l)] - smax);
        z += score[static_cast<std::size_t>(l)];
      }
      const double row_const =
          deg > 0 ? static_cast<double>(deg) * log_theta[static_cast<std::size_t>(i)] +
                        neighbor_log_theta
                  : 0.0;
      ll_local += row_const + smax + std::log(z);
      if (tau_out != nullptr) {
        double* row = tau_out->row(i);
        for (int l = 0; l < k; ++l) row[l] = score[static_cast<std::size_t>(l)] / z;
      }
    }
    ll_partial[static_cast<std::size_t>(chunk)] = ll_local;
  });

  double ll = 0.0;
  for (double v : ll_partial) ll += v;
  if (!std::isfinite(ll)) {
    throw NumericalError("degree-corrected objective is not finite");
  }
  return ll;
}

}  // namespace

double dc_log_pseudo_likelihood(const SparseGraph& g, const DCParams& params,
                                const LabelVector& e) {
  check_dc_params(g, params, "dc_log_pseudo_likelihood");
  check_labels(e, g.n_cols, static_cast<int>(params.pi.size()), "dc_log_pseudo_likelihood");
  return dc_e_step_impl(g, params, e, nullptr);
}

Responsibilities dc_e_step(const SparseGraph& g, const DCParams& params, const LabelVector& e) {
  check_dc_params(g, params, "dc_e_step");
  check_labels(e, g.n_cols, static_cast<int>(params.pi.size()), "dc_e_step");
  Responsibilities r;
  dc_e_step_impl(g, params, e, &r.tau);
  return r;
}

DCParams init_dc_params(const SparseGraph& g, const LabelVector& e, int k, double eps_lambda,
                        double eps_theta) {
  if (g.bipartite) throw DataError("init_dc_params: expected a square graph");
  if (k < 1) throw DataError("init_dc_params: K must be at least 1");
  if (g.edge_count == 0) throw DataError("init_dc_params: graph has no edges");
  check_labels(e, g.n_cols, k, "init_dc_params");

  const Index n = g.n_rows;
  DCParams params;

  std::vector<std::int64_t> class_size(static_cast<std::size_t>(k), 0);
  for (int label : e) class_size[static_cast<std::size_t>(label)] += 1;
  params.pi.assign(static_cast<std::size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    params.pi[static_cast<std::size_t>(c)] =
        static_cast<double>(class_size[static_cast<std::size_t>(c)]) / static_cast<double>(n);
  }

  // theta proportional to degree, isolated nodes floored, then mean 1.
  params.theta.assign(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = static_cast<double>(g.degree(i));
    const double t = d > 0.0 ? d : eps_theta;
    params.theta[static_cast<std::size_t>(i)] = t;
    total += t;
  }
  const double scale = static_cast<double>(n) / total;
  for (double& t : params.theta) t = std::max(t * scale, eps_theta);

  // Block edge counts over products of class theta sums.
  const std::vector<double> s_theta = class_theta_sums(e, params.theta, k);
  std::vector<std::int64_t> block_edges(static_cast<std::size_t>(k) * k, 0);
  for (Index i = 0; i < n; ++i) {
    const int a = e[static_cast<std::size_t>(i)];
    for (Index idx = g.row_offsets[static_cast<std::size_t>(i)];
         idx < g.row_offsets[static_cast<std::size_t>(i) + 1]; ++idx) {
      const int b = e[static_cast<std::size_t>(g.col_indices[static_cast<std::size_t>(idx)])];
      block_edges[static_cast<std::size_t>(a) * k + b] += 1;
    }
  }
  params.Lambda = Matrix(k, k);
  const double fallback =
      static_cast<double>(g.edge_count) / (static_cast<double>(n) * static_cast<double>(n));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double denom = s_theta[static_cast<std::size_t>(a)] * s_theta[static_cast<std::size_t>(b)];
      double v = denom > 0.0
                     ? static_cast<double>(block_edges[static_cast<std::size_t>(a) * k + b]) / denom
                     : fallback;
      params.Lambda(a, b) = std::max(v, eps_lambda);
    }
  }
  return params;
}

DCParams dc_cm_step(const SparseGraph& g, const Responsibilities& tau, const LabelVector& e,
                    const DCParams& prev, const DcFitConfig& cfg) {
  const Index n = g.n_rows;
  if (tau.tau.rows() != n || tau.tau.cols() < 1) {
    throw DataError("dc_cm_step: responsibilities shape does not match the graph");
  }
  const int k = static_cast<int>(tau.tau.cols());
  check_labels(e, g.n_cols, k, "dc_cm_step");
  check_dc_params(g, prev, "dc_cm_step");

  const Index chunks = parallel_chunk_count(n);

  // Chunk-merged accumulators: T_k = sum tau_ik, U_k = sum tau_ik theta_i^prev,
  // N_kl = tau-weighted edge counts into column class l.
  std::vector<double> t_partial(static_cast<std::size_t>(chunks) * k, 0.0);
  std::vector<double> u_partial(static_cast<std::size_t>(chunks) * k, 0.0);
  std::vector<double> num_partial(static_cast<std::size_t>(chunks) * k * k, 0.0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double* t_local = t_partial.data() + static_cast<std::size_t>(chunk) * k;
    double* u_local = u_partial.data() + static_cast<std::size_t>(chunk) * k;
    double* num_local = num_partial.data() + static_cast<std::size_t>(chunk) * k * k;
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(k), 0);
    std::vector<int> touched;
    touched.reserve(64);
    for (Index i = lo; i < hi; ++i) {
      const double* tau_row = tau.tau.row(i);
      const double theta_i = prev.theta[static_cast<std::size_t>(i)];
      for (int c = 0; c < k; ++c) {
        t_local[c] += tau_row[c];
        u_local[c] += tau_row[c] * theta_i;
      }
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
        for (int a = 0; a < k; ++a) num_local[static_cast<std::size_t>(a) * k + c] += w * tau_row[a];
      }
    }
  });
  std::vector<double> t_sum(static_cast<std::size_t>(k), 0.0);
  std::vector<double> u_sum(static_cast<std::size_t>(k), 0.0);
  std::vector<double> num(static_cast<std::size_t>(k) * k, 0.0);
  for (Index c = 0; c < chunks; ++c) {
    for (int a = 0; a < k; ++a) {
      t_sum[static_cast<std::size_t>(a)] += t_partial[static_cast<std::size_t>(c) * k + a];
      u_sum[static_cast<std::size_t>(a)] += u_partial[static_cast<std::size_t>(c) * k + a];
    }
    for (int ab = 0; ab < k * k; ++ab) {
      num[static_cast<std::size_t>(ab)] += num_partial[static_cast<std::size_t>(c) * k * k + ab];
    }
  }

  DCParams out;
  out.pi.assign(static_cast<std::size_t>(k), 0.0);
  double total = 0.0;
  for (double t : t_sum) total += t;
  if (!(total > 0.0)) throw NumericalError("dc_cm_step: responsibilities sum to zero");
  double head = 0.0;
  for (int a = 0; a + 1 < k; ++a) {
    out.pi[static_cast<std::size_t>(a)] = t_sum[static_cast<std::size_t>(a)] / total;
    head += out.pi[static_cast<std::size_t>(a)];
  }
  out.pi[static_cast<std::size_t>(k - 1)] = std::max(0.0, 1.0 - head);

  const std::vector<double> s_theta = class_theta_sums(e, prev.theta, k);
  std::vector<std::int64_t> class_size(static_cast<std::size_t>(k), 0);
  for (int label : e) class_size[static_cast<std::size_t>(label)] += 1;

  out.Lambda = Matrix(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      double v;
      if (class_size[static_cast<std::size_t>(b)] == 0 ||
          u_sum[static_cast<std::size_t>(a)] < 1e-12) {
        v = prev.Lambda(a, b);
      } else {
        v = num[static_cast<std::size_t>(a) * k + b] /
            (u_sum[static_cast<std::size_t>(a)] * s_theta[static_cast<std::size_t>(b)]);
      }
      out.Lambda(a, b) = std::max(v, cfg.eps_lambda);
    }
  }

  // Gauss-Seidel theta sweep(s), ascending node order, sequential by
  // contract. Each node update is the exact coordinate maximizer of the
  // expected complete-data objective. theta_i enters that objective through
  // its own row's rates, through every other row's rates via the class sums,
  // and through the neighbours' edge terms, so with
  //   g_ij = sum_a tau_ia Lambda(a, e_j),
  //   h = sum_{j != i} theta_j (g_ij + g_ji),
  // the coordinate stationarity condition is
  //   2 g_ii t^2 + h t - 2 d_i = 0,
  // whose positive root is taken, evaluated in the subtraction-free conjugate
  // form 2 d / (h + sqrt(h^2 + 8 d g_ii)) so it stays accurate when
  // 8 d g_ii << h^2 (rate columns at their floor) and degenerates to the
  // linear-limit rule d / h as g_ii -> 0. Running class sums W_c, rate
  // projections R_a = sum_c Lambda(a,c) W_c, and weighted posteriors
  // U_a = sum_j tau_ja theta_j are updated incrementally, so each node
  // costs O(K).
  out.theta = prev.theta;
  for (int sweep = 0; sweep < std::max(1, cfg.theta_sweeps); ++sweep) {
    std::vector<double> w = class_theta_sums(e, out.theta, k);
    std::vector<double> r(static_cast<std::size_t>(k), 0.0);
    for (int a = 0; a < k; ++a) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += out.Lambda(a, c) * w[static_cast<std::size_t>(c)];
      r[static_cast<std::size_t>(a)] = acc;
    }
    std::vector<double> u(static_cast<std::size_t>(k), 0.0);
    for (Index j = 0; j < n; ++j) {
      const double* row_j = tau.tau.row(j);
      const double theta_j = out.theta[static_cast<std::size_t>(j)];
      for (int a = 0; a < k; ++a) u[static_cast<std::size_t>(a)] += row_j[a] * theta_j;
    }
    for (Index i = 0; i < n; ++i) {
      const double* tau_row = tau.tau.row(i);
      const int ci = e[static_cast<std::size_t>(i)];
      double g_ii = 0.0;
      double full_row = 0.0;
      double full_col = 0.0;
      for (int a = 0; a < k; ++a) {
        g_ii += tau_row[a] * out.Lambda(a, ci);
        full_row += tau_row[a] * r[static_cast<std::size_t>(a)];
        full_col += out.Lambda(a, ci) * u[static_cast<std::size_t>(a)];
      }
      const double theta_old = out.theta[static_cast<std::size_t>(i)];
      const double h = (full_row - theta_old * g_ii) + (full_col - theta_old * g_ii);
      const double d2 = 2.0 * static_cast<double>(g.degree(i));
      const double denom = std::max(h + std::sqrt(h * h + 8.0 * d2 * g_ii), 1e-12);
      double theta_new = std::max(2.0 * d2 / denom, cfg.eps_theta);
      const double delta = theta_new - theta_old;
      if (delta != 0.0) {
        w[static_cast<std::size_t>(ci)] += delta;
        for (int a = 0; a < k; ++a) {
          r[static_cast<std::size_t>(a)] += out.Lambda(a, ci) * delta;
          u[static_cast<std::size_t>(a)] += tau_row[a] * delta;
        }
        out.theta[static_cast<std::size_t>(i)] = theta_new;
      }
    }

    // Restore the mean-1 normalization; Lambda absorbs the square of the
    // scale so every rate theta_i theta_j lambda is unchanged.
    double sum_theta = 0.0;
    for (double t : out.theta) sum_theta += t;
    const double scale = sum_theta / static_cast<double>(n);
    if (scale > 0.0 && std::isfinite(scale)) {
      for (double& t : out.theta) t = std::max(t / scale, cfg.eps_theta);
      for (double& v : out.Lambda.storage()) v = std::max(v * scale * scale, cfg.eps_lambda);
    }
  }
  return out;
}

LabelVector dc_update_labels(const SparseGraph& g, const DCParams& params,
                             const Responsibilities& tau) {
  check_dc_params(g, params, "dc_update_labels");
  const int k = static_cast<int>(params.pi.size());
  if (tau.tau.cols() != k || tau.tau.rows() != g.n_rows) {
    throw DataError("dc_update_labels: responsibilities shape does not match");
  }
  const Index n = g.n_rows;

  // U_l = sum_i tau_il theta_i, merged in chunk order.
  const Index chunks = parallel_chunk_count(n);
  std::vector<double> u_partial(static_cast<std::size_t>(chunks) * k, 0.0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double* u_local = u_partial.data() + static_cast<std::size_t>(chunk) * k;
    for (Index i = lo; i < hi; ++i) {
      const double* row = tau.tau.row(i);
      const double theta_i = params.theta[static_cast<std::size_t>(i)];
      for (int l = 0; l < k; ++l) u_local[l] += row[l] * theta_i;
    }
  });
  std::vector<double> u(static_cast<std::size_t>(k), 0.0);
  for (Index c = 0; c < chunks; ++c) {
    for (int l = 0; l < k; ++l) u[static_cast<std::size_t>(l)] += u_partial[static_cast<std::size_t>(c) * k + l];
  }

  // Candidate-class tables: V_k = sum_l Lambda[l][k] U_l and log Lambda.
  std::vector<double> v(static_cast<std::size_t>(k), 0.0);
  std::vector<double> log_lambda(static_cast<std::size_t>(k) * k);
  for (int l = 0; l < k; ++l) {
    for (int c = 0; c < k; ++c) {
      log_lambda[static_cast<std::size_t>(l) * k + c] = std::log(params.Lambda(l, c));
    }
  }
  for (int c = 0; c < k; ++c) {
    double acc = 0.0;
    for (int l = 0; l < k; ++l) acc += params.Lambda(l, c) * u[static_cast<std::size_t>(l)];
    v[static_cast<std::size_t>(c)] = acc;
  }

  LabelVector labels(static_cast<std::size_t>(n), 0);
  parallel_for(n, [&](Index lo, Index hi, Index) {
    std::vector<double> m_row(static_cast<std::size_t>(k));
    for (Index j = lo; j < hi; ++j) {
      std::fill(m_row.begin(), m_row.end(), 0.0);
      for (Index idx = g.row_offsets[static_cast<std::size_t>(j)];
           idx < g.row_offsets[static_cast<std::size_t>(j) + 1]; ++idx) {
        const double* row = tau.tau.row(g.col_indices[static_cast<std::size_t>(idx)]);
        for (int l = 0; l < k; ++l) m_row[static_cast<std::size_t>(l)] += row[l];
      }
      const double theta_j = params.theta[static_cast<std::size_t>(j)];
      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double score = -theta_j * v[static_cast<std::size_t>(c)];
        for (int l = 0; l < k; ++l) {
          score += m_row[static_cast<std::size_t>(l)] * log_lambda[static_cast<std::size_t>(l) * k + c];
        }
        if (score > best_score) {
          best_score = score;
          best = c;
        }
      }
      labels[static_cast<std::size_t>(j)] = best;
    }
  });
  return labels;
}

namespace {

struct DcInnerResult {
  DCParams params;
  Responsibilities tau;
  int iterations = 0;
  double loglik = 0.0;
};

// ECM at fixed labels; same structure as the plain-model inner loop, always
// exiting right after an E-step.
DcInnerResult run_inner_ecm(const SparseGraph& g, DCParams params, const LabelVector& e,
                            const DcFitConfig& cfg) {
  DcInnerResult out;
  out.params = std::move(params);
  double prev_ll = 0.0;
  bool have_prev = false;
  for (int it = 1; it <= cfg.inner_max_iter; ++it) {
    out.loglik = dc_e_step_impl(g, out.params, e, &out.tau.tau);
    out.iterations = it;
    if (have_prev) {
      const double denom = std::max(std::abs(prev_ll), 1e-12);
      if (std::abs(out.loglik - prev_ll) <= cfg.inner_tol * denom) break;
    }
    prev_ll = out.loglik;
    have_prev = true;
    if (it == cfg.inner_max_iter) break;
    out.params = dc_cm_step(g, out.tau, e, out.params, cfg);
  }
  return out;
}

}  // namespace

DcFitResult fit_dcsbm(const SparseGraph& g, int k, const LabelVector& init_labels,
                      const DcFitConfig& cfg) {
  if (g.bipartite) throw DataError("fit_dcsbm: expected a square graph");
  if (k < 1) throw DataError("fit_dcsbm: K must be at least 1");
  if (k > g.n_rows) throw DataError("fit_dcsbm: K exceeds the number of nodes");
  check_labels(init_labels, g.n_cols, k, "fit_dcsbm");
  const auto t0 = std::chrono::steady_clock::now();

  DcFitResult result;
  result.labels = init_labels;
  result.params = init_dc_params(g, init_labels, k, cfg.eps_lambda, cfg.eps_theta);
  result.objective_trace.push_back(dc_e_step_impl(g, result.params, result.labels, nullptr));

  for (int s = 1; s <= cfg.outer_max_iter; ++s) {
    DcInnerResult inner = run_inner_ecm(g, std::move(result.params), result.labels, cfg);
    result.params = std::move(inner.params);
    result.inner_iteration_counts.push_back(inner.iterations);

    result.labels = dc_update_labels(g, result.params, inner.tau);

    const double obj = dc_e_step_impl(g, result.params, result.labels, nullptr);
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

}  // namespace blockfit
