#include "blockfit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blockfit/metrics.hpp"
#include "blockfit/rng.hpp"

namespace blockfit {

namespace {

constexpr Index kPairSamplerMaxN = 10000;

void check_proportions(const std::vector<double>& pi, const char* what) {
  if (pi.empty()) throw DataError(std::string(what) + ": empty proportion vector");
  double s = 0.0;
  for (double p : pi) {
    if (p < 0.0) throw DataError(std::string(what) + ": negative proportion");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw DataError(std::string(what) + ": proportions must sum to 1");
}

void check_probabilities(const Matrix& P, const char* what) {
  for (Index i = 0; i < P.rows(); ++i)
    for (Index j = 0; j < P.cols(); ++j)
      if (P(i, j) < 0.0 || P(i, j) > 1.0)
        throw DataError(std::string(what) + ": edge probability outside [0,1]");
}

LabelVector draw_labels(Index n, const std::vector<double>& pi, SplitMix64& rng) {
  LabelVector c(n);
  for (Index i = 0; i < n; ++i) c[i] = rng.categorical(pi);
  return c;
}

std::vector<std::vector<Index>> group_by_class(const LabelVector& c, int K) {
  std::vector<std::vector<Index>> nodes(K);
  for (Index i = 0; i < static_cast<Index>(c.size()); ++i)
    nodes[c[i]].push_back(i);  // ascending node index within each class
  return nodes;
}

// Pairs (r,s), r<s, of an m-set in lexicographic order: index of the first
// pair with left element r is C(r) = r*(2m-r-1)/2; invert with a float guess
// plus an integer fix-up.
void unrank_triangular(std::uint64_t t, Index m, Index& r, Index& s) {
  auto cum = [m](Index row) {
    return static_cast<std::uint64_t>(row) * (2 * m - row - 1) / 2;
  };
  double mm = static_cast<double>(m) - 0.5;
  Index row = static_cast<Index>(mm - std::sqrt(std::max(0.0, mm * mm - 2.0 * static_cast<double>(t))));
  row = std::clamp<Index>(row, 0, m - 2);
  while (row > 0 && cum(row) > t) --row;
  while (row < m - 2 && cum(row + 1) <= t) ++row;
  r = row;
  s = row + 1 + static_cast<Index>(t - cum(row));
}

// Shared SBM/DCSBM edge sampler. theta empty means "all ones" (plain SBM);
// code paths and RNG consumption are identical in that case, so the theta==1
// reduction is draw-for-draw exact.
std::vector<std::pair<Index, Index>> sample_square_edges(const LabelVector& c,
                                                         const Matrix& P,
                                                         const std::vector<double>& theta,
                                                         std::uint64_t seed) {
  const Index n = static_cast<Index>(c.size());
  const bool dc = !theta.empty();
  std::vector<std::pair<Index, Index>> edges;

  auto pair_rate = [&](Index i, Index j) {
    double rate = P(c[i], c[j]);
    if (dc) rate *= theta[i] * theta[j];
    if (rate > 1.0)
      throw DataError("sample_dcsbm: pair rate theta_i*theta_j*P exceeds 1");
    return rate;
  };

  if (n <= kPairSamplerMaxN) {
    SplitMix64 rng(SplitMix64::derive(seed, 1));
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (rng.bernoulli(pair_rate(i, j))) edges.emplace_back(i, j);
    return edges;
  }

  const int K = static_cast<int>(P.rows());
  const auto nodes = group_by_class(c, K);
  std::vector<double> theta_max(K, 1.0);
  if (dc) {
    for (int k = 0; k < K; ++k) {
      theta_max[k] = 0.0;
      for (Index i : nodes[k]) theta_max[k] = std::max(theta_max[k], theta[i]);
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int l = k; l < K; ++l) {
      const auto& a = nodes[k];
      const auto& b = nodes[l];
      if (a.empty() || b.empty()) continue;
      double p_max = P(k, l) * theta_max[k] * theta_max[l];
      if (p_max <= 0.0) continue;
      p_max = std::min(p_max, 1.0);
      const std::uint64_t total =
          (k == l) ? static_cast<std::uint64_t>(a.size()) * (a.size() - 1) / 2
                   : static_cast<std::uint64_t>(a.size()) * b.size();
      SplitMix64 rng(SplitMix64::derive(seed, 1000 + static_cast<std::uint64_t>(k) * K + l));
      std::uint64_t t = rng.geometric_skip(p_max);
      while (t < total) {
        Index i, j;
        if (k == l) {
          Index r, s;
          unrank_triangular(t, static_cast<Index>(a.size()), r, s);
          i = a[r];
          j = a[s];
        } else {
          i = a[t / b.size()];
          j = b[t % b.size()];
        }
        const double rate = pair_rate(i, j);
        // thinning: accept at rate/p_max; the draw is skipped when the block
        // rate is uniform so the plain-SBM stream is untouched
        if (rate >= p_max || rng.bernoulli(rate / p_max)) edges.emplace_back(i, j);
        t += 1 + rng.geometric_skip(p_max);
      }
    }
  }
  return edges;
}

}  // namespace

Matrix build_edge_prob_matrix(int K, double beta, const std::vector<double>& omega,
                              double lambda, const std::vector<double>& pi, Index n) {
  if (K < 1 || static_cast<int>(omega.size()) != K || static_cast<int>(pi.size()) != K)
    throw DataError("build_edge_prob_matrix: dimension mismatch");
  if (beta < 0.0) throw DataError("build_edge_prob_matrix: beta must be >= 0");
  if (lambda <= 0.0) throw DataError("build_edge_prob_matrix: lambda must be > 0");
  for (double w : omega)
    if (w <= 0.0) throw DataError("build_edge_prob_matrix: omega entries must be > 0");
  check_proportions(pi, "build_edge_prob_matrix");
  if (n < 2) throw DataError("build_edge_prob_matrix: need n >= 2");

  Matrix pstar(K, K, beta == 0.0 ? 0.0 : 1.0);
  for (int k = 0; k < K; ++k) pstar(k, k) = beta == 0.0 ? omega[k] : omega[k] / beta;

  double quad = 0.0;
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) quad += pi[k] * pstar(k, l) * pi[l];
  const double scale = lambda / (static_cast<double>(n - 1) * quad);

  Matrix P(K, K);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) {
      P(k, l) = scale * pstar(k, l);
      if (P(k, l) > 1.0)
        throw DataError("build_edge_prob_matrix: resulting probability exceeds 1");
    }
  return P;
}

SbmSample sample_sbm(const SbmSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw DataError("sample_sbm: need n >= 1");
  check_proportions(spec.pi, "sample_sbm");
  check_probabilities(spec.P, "sample_sbm");
  if (spec.P.rows() != spec.P.cols() ||
      spec.P.rows() != static_cast<Index>(spec.pi.size()))
    throw DataError("sample_sbm: P dimensions must match pi");
  for (Index k = 0; k < spec.P.rows(); ++k)
    for (Index l = 0; l < k; ++l)
      if (spec.P(k, l) != spec.P(l, k)) throw DataError("sample_sbm: P must be symmetric");

  SplitMix64 label_rng(SplitMix64::derive(seed, 0));
  SbmSample out;
  out.labels = draw_labels(spec.n, spec.pi, label_rng);
  auto edges = sample_square_edges(out.labels, spec.P, {}, seed);
  out.graph = graph_from_edges(spec.n, spec.n, false, std::move(edges));
  return out;
}

SparseGraph sample_sbm_edges(const LabelVector& labels, const Matrix& P,
                             std::uint64_t seed) {
  const Index n = static_cast<Index>(labels.size());
  if (n < 1) throw DataError("sample_sbm_edges: need n >= 1");
  check_probabilities(P, "sample_sbm_edges");
  if (P.rows() != P.cols()) throw DataError("sample_sbm_edges: P must be square");
  for (Index k = 0; k < P.rows(); ++k)
    for (Index l = 0; l < k; ++l)
      if (P(k, l) != P(l, k)) throw DataError("sample_sbm_edges: P must be symmetric");
  for (Index i = 0; i < n; ++i)
    if (labels[i] < 0 || labels[i] >= static_cast<int>(P.rows()))
      throw DataError("sample_sbm_edges: label outside [0, K)");
  auto edges = sample_square_edges(labels, P, {}, seed);
  return graph_from_edges(n, n, false, std::move(edges));
}

SbmSample sample_dcsbm(const DcsbmSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw DataError("sample_dcsbm: need n >= 1");
  check_proportions(spec.pi, "sample_dcsbm");
  check_probabilities(spec.P, "sample_dcsbm");
  if (static_cast<Index>(spec.theta.size()) != spec.n)
    throw DataError("sample_dcsbm: theta length mismatch");
  double mean = 0.0;
  for (double t : spec.theta) {
    if (t <= 0.0) throw DataError("sample_dcsbm: theta entries must be > 0");
    mean += t;
  }
  mean /= static_cast<double>(spec.n);
  if (std::abs(mean - 1.0) > 1e-9)
    throw DataError("sample_dcsbm: theta sample mean must be 1");

  SplitMix64 label_rng(SplitMix64::derive(seed, 0));
  SbmSample out;
  out.labels = draw_labels(spec.n, spec.pi, label_rng);
  auto edges = sample_square_edges(out.labels, spec.P, spec.theta, seed);
  out.graph = graph_from_edges(spec.n, spec.n, false, std::move(edges));
  return out;
}

std::vector<double> sample_theta_two_point_raw(Index n, int m, std::uint64_t seed) {
  if (m < 1) throw DataError("sample_theta_two_point: need m >= 1");
  const double x = 2.0 / (m + 1.0);
  SplitMix64 rng(SplitMix64::derive(seed, 7));
  std::vector<double> theta(n);
  for (Index i = 0; i < n; ++i) theta[i] = rng.bernoulli(0.5) ? m * x : x;
  return theta;
}

std::vector<double> sample_theta_two_point(Index n, int m, std::uint64_t seed) {
  std::vector<double> theta = sample_theta_two_point_raw(n, m, seed);
  const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
  const double scale = static_cast<double>(n) / sum;
  for (double& t : theta) t *= scale;
  return theta;
}

BisbmSample sample_bisbm(const BisbmSpec& spec, std::uint64_t seed) {
  if (spec.m < 1 || spec.n < 1) throw DataError("sample_bisbm: need m, n >= 1");
  check_proportions(spec.pi1, "sample_bisbm");
  check_proportions(spec.pi2, "sample_bisbm");
  check_probabilities(spec.P, "sample_bisbm");
  if (spec.P.rows() != static_cast<Index>(spec.pi1.size()) ||
      spec.P.cols() != static_cast<Index>(spec.pi2.size()))
    throw DataError("sample_bisbm: P dimensions must match pi1/pi2");

  SplitMix64 rng1(SplitMix64::derive(seed, 0));
  SplitMix64 rng2(SplitMix64::derive(seed, 5));
  BisbmSample out;
  out.labels_rows = draw_labels(spec.m, spec.pi1, rng1);
  out.labels_cols = draw_labels(spec.n, spec.pi2, rng2);

  std::vector<std::pair<Index, Index>> edges;
  if (std::max(spec.m, spec.n) <= kPairSamplerMaxN) {
    SplitMix64 rng(SplitMix64::derive(seed, 1));
    for (Index i = 0; i < spec.m; ++i)
      for (Index j = 0; j < spec.n; ++j)
        if (rng.bernoulli(spec.P(out.labels_rows[i], out.labels_cols[j])))
          edges.emplace_back(i, j);
  } else {
    const int K1 = static_cast<int>(spec.P.rows());
    const int K2 = static_cast<int>(spec.P.cols());
    const auto rows = group_by_class(out.labels_rows, K1);
    const auto cols = group_by_class(out.labels_cols, K2);
    for (int k = 0; k < K1; ++k)
      for (int l = 0; l < K2; ++l) {
        const auto& a = rows[k];
        const auto& b = cols[l];
        const double p = spec.P(k, l);
        if (a.empty() || b.empty() || p <= 0.0) continue;
        const std::uint64_t total = static_cast<std::uint64_t>(a.size()) * b.size();
        SplitMix64 rng(SplitMix64::derive(seed, 1000 + static_cast<std::uint64_t>(k) * K2 + l));
        for (std::uint64_t t = rng.geometric_skip(p); t < total;
             t += 1 + rng.geometric_skip(p)) {
          edges.emplace_back(a[t / b.size()], b[t % b.size()]);
        }
      }
  }
  out.graph = graph_from_edges(spec.m, spec.n, true, std::move(edges));
  return out;
}

LabelVector perturb_labels(const LabelVector& truth, const std::vector<double>& gamma,
                           std::uint64_t seed) {
  if (truth.empty()) throw DataError("perturb_labels: empty labels");
  int K = 0;
  for (int c : truth) K = std::max(K, c + 1);
  if (static_cast<int>(gamma.size()) != K)
    throw DataError("perturb_labels: gamma length must equal class count");
  for (double g : gamma)
    if (g < 0.0 || g > 1.0) throw DataError("perturb_labels: gamma outside [0,1]");

  auto nodes = group_by_class(truth, K);
  std::vector<Index> capacity(K);  // open slots per output class
  std::vector<std::vector<Index>> surplus(K);
  LabelVector out(truth.size(), -1);
  for (int k = 0; k < K; ++k) {
    auto& list = nodes[k];
    const Index keep = static_cast<Index>(
        std::floor(gamma[k] * static_cast<double>(list.size()) + 1e-12));
    SplitMix64 rng(SplitMix64::derive(seed, 10 + static_cast<std::uint64_t>(k)));
    for (Index i = static_cast<Index>(list.size()) - 1; i > 0; --i) {
      std::swap(list[i], list[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
    }
    for (Index i = 0; i < keep; ++i) out[list[i]] = k;
    surplus[k].assign(list.begin() + keep, list.end());
    std::sort(surplus[k].begin(), surplus[k].end());  // round-robin by node index
    capacity[k] = static_cast<Index>(list.size()) - keep;
  }
  for (int k = 0; k < K; ++k) {
    int cursor = (k + 1) % K;
    for (Index node : surplus[k]) {
      int tried = 0;
      while (tried < K && (cursor == k || capacity[cursor] == 0)) {
        cursor = (cursor + 1) % K;
        ++tried;
      }
      if (cursor == k || capacity[cursor] == 0)
        throw DataError("perturb_labels: infeasible overlap constraints");
      out[node] = cursor;
      capacity[cursor]--;
      cursor = (cursor + 1) % K;
    }
  }
  return out;
}

LabelVector perturb_labels(const LabelVector& truth, double gamma, std::uint64_t seed) {
  int K = 0;
  for (int c : truth) K = std::max(K, c + 1);
  return perturb_labels(truth, std::vector<double>(K, gamma), seed);
}

LabelVector perturb_labels_to_nmi(const LabelVector& truth, double target_nmi,
                                  std::uint64_t seed) {
  if (target_nmi < 0.0 || target_nmi > 1.0)
    throw DataError("perturb_labels_to_nmi: target outside [0,1]");
  const Index n = static_cast<Index>(truth.size());
  if (n == 0) throw DataError("perturb_labels_to_nmi: empty labels");
  int K = 0;
  for (int c : truth) K = std::max(K, c + 1);
  constexpr double kTol = 0.02;

  // one fixed shuffle + one fixed relabel draw per node, so the candidate
  // labeling is a function of the flip count alone
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 shuffle_rng(SplitMix64::derive(seed, 20));
  for (Index i = n - 1; i > 0; --i)
    std::swap(order[i], order[shuffle_rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  SplitMix64 label_rng(SplitMix64::derive(seed, 21));
  LabelVector relabel(n);
  for (Index i = 0; i < n; ++i)
    relabel[i] = static_cast<int>(label_rng.next_below(static_cast<std::uint64_t>(K)));

  auto candidate = [&](Index flips) {
    LabelVector e = truth;
    for (Index i = 0; i < flips; ++i) e[order[i]] = relabel[order[i]];
    return e;
  };

  Index lo = 0, hi = n;
  double best_gap = 2.0, best_nmi = -1.0;
  Index best_flips = 0;
  for (int it = 0; it < 64 && lo <= hi; ++it) {
    const Index mid = lo + (hi - lo) / 2;
    const LabelVector e = candidate(mid);
    const double v = nmi(e, truth);
    if (std::abs(v - target_nmi) < best_gap) {
      best_gap = std::abs(v - target_nmi);
      best_nmi = v;
      best_flips = mid;
    }
    if (std::abs(v - target_nmi) <= kTol) return e;
    if (v > target_nmi) {
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  // NMI(flips) is only approximately monotone; sweep near the best candidate
  const Index radius = std::max<Index>(2, n / 50);
  for (Index f = std::max<Index>(0, best_flips - radius);
       f <= std::min(n, best_flips + radius); ++f) {
    const LabelVector e = candidate(f);
    if (std::abs(nmi(e, truth) - target_nmi) <= kTol) return e;
  }
  throw DataError("perturb_labels_to_nmi: target " + std::to_string(target_nmi) +
                  " unreachable; best achieved NMI " + std::to_string(best_nmi));
}

}  // namespace blockfit
