#include "blockfit/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "blockfit/parallel.hpp"
#include "blockfit/rng.hpp"

namespace blockfit {

namespace {

double sqdist(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index t = 0; t < d; ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

// assignment pass; returns true if any label changed
bool assign(const Matrix& points, const Matrix& centers, LabelVector& labels) {
  const Index n = points.rows(), d = points.cols(), K = centers.rows();
  bool changed = false;
  std::vector<char> chunk_changed(parallel_chunk_count(n), 0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    for (Index i = lo; i < hi; ++i) {
      int best = 0;
      double best_d = sqdist(points.row(i), centers.row(0), d);
      for (Index k = 1; k < K; ++k) {
        const double dist = sqdist(points.row(i), centers.row(k), d);
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(k);
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        chunk_changed[chunk] = 1;
      }
    }
  });
  for (char c : chunk_changed) changed |= (c != 0);
  return changed;
}

void recompute_centers(const Matrix& points, const LabelVector& labels, Matrix& centers) {
  const Index n = points.rows(), d = points.cols(), K = centers.rows();
  const Index chunks = parallel_chunk_count(n);
  std::vector<double> sums(static_cast<size_t>(chunks * K * d), 0.0);
  std::vector<Index> cnt(static_cast<size_t>(chunks * K), 0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double* s = sums.data() + chunk * K * d;
    Index* c = cnt.data() + chunk * K;
    for (Index i = lo; i < hi; ++i) {
      const int k = labels[i];
      c[k]++;
      const double* row = points.row(i);
      for (Index t = 0; t < d; ++t) s[k * d + t] += row[t];
    }
  });
  for (Index k = 0; k < K; ++k) {
    Index total = 0;
    std::vector<double> acc(d, 0.0);
    for (Index ch = 0; ch < chunks; ++ch) {
      total += cnt[ch * K + k];
      for (Index t = 0; t < d; ++t) acc[t] += sums[(ch * K + k) * d + t];
    }
    if (total > 0)
      for (Index t = 0; t < d; ++t) centers(k, t) = acc[t] / static_cast<double>(total);
    // empty clusters keep their center; the refill step handles them
  }
}

double compute_inertia(const Matrix& points, const Matrix& centers,
                       const LabelVector& labels) {
  const Index n = points.rows(), d = points.cols();
  std::vector<double> part(parallel_chunk_count(n), 0.0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double s = 0.0;
    for (Index i = lo; i < hi; ++i) s += sqdist(points.row(i), centers.row(labels[i]), d);
    part[chunk] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void refill_empty_clusters(const Matrix& points, Matrix& centers, LabelVector& labels) {
  const Index n = points.rows(), d = points.cols(), K = centers.rows();
  for (Index k = 0; k < K; ++k) {
    std::vector<Index> size(K, 0);
    for (int l : labels) size[l]++;
    if (size[k] > 0) continue;
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (size[labels[i]] <= 1) continue;  // moving it would empty another cluster
      const double dist = sqdist(points.row(i), centers.row(labels[i]), d);
      if (dist > far_d) {
        far_d = dist;
        far = i;
      }
    }
    if (far < 0) continue;  // n < K effectively; leave empty
    labels[far] = static_cast<int>(k);
    for (Index t = 0; t < d; ++t) centers(k, t) = points(far, t);
  }
}

}  // namespace

KmeansResult kmeans_lloyd(const Matrix& points, Matrix centers, int max_iter) {
  const Index n = points.rows();
  if (centers.cols() != points.cols()) throw DataError("kmeans: dimension mismatch");
  KmeansResult res;
  res.labels.assign(n, 0);
  assign(points, centers, res.labels);
  for (int it = 0; it < max_iter; ++it) {
    recompute_centers(points, res.labels, centers);
    refill_empty_clusters(points, centers, res.labels);
    if (!assign(points, centers, res.labels)) break;
  }
  recompute_centers(points, res.labels, centers);
  res.inertia = compute_inertia(points, centers, res.labels);
  res.centers = std::move(centers);
  return res;
}

LabelVector kmeans(const Matrix& points, int K, int restarts, int max_iter,
                   std::uint64_t seed) {
  const Index n = points.rows(), d = points.cols();
  if (K < 1) throw DataError("kmeans: need K >= 1");
  if (n < K) throw DataError("kmeans: need at least K points");
  if (restarts < 1) restarts = 1;

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng(SplitMix64::derive(seed, 100 + static_cast<std::uint64_t>(r)));
    Matrix centers(K, d);
    // plus-plus seeding
    const Index first = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
    for (Index t = 0; t < d; ++t) centers(0, t) = points(first, t);
    std::vector<double> d2(n);
    for (Index i = 0; i < n; ++i) d2[i] = sqdist(points.row(i), centers.row(0), d);
    for (int k = 1; k < K; ++k) {
      double total = 0.0;
      for (double v : d2) total += v;
      Index pick;
      if (total <= 0.0) {
        pick = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));
      } else {
        const double u = rng.next_double() * total;
        double acc = 0.0;
        pick = n - 1;
        for (Index i = 0; i < n; ++i) {
          acc += d2[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      for (Index t = 0; t < d; ++t) centers(k, t) = points(pick, t);
      for (Index i = 0; i < n; ++i)
        d2[i] = std::min(d2[i], sqdist(points.row(i), centers.row(k), d));
    }
    KmeansResult res = kmeans_lloyd(points, std::move(centers), max_iter);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best.labels;
}

}  // namespace blockfit
