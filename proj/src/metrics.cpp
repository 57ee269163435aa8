#include "blockfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockfit {

ContingencyTable contingency(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size()) throw DataError("contingency: label vectors differ in length");
  ContingencyTable t;
  for (int x : a) t.k_a = std::max<Index>(t.k_a, x + 1);
  for (int x : b) t.k_b = std::max<Index>(t.k_b, x + 1);
  t.counts.assign(static_cast<size_t>(t.k_a * t.k_b), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) throw DataError("contingency: negative label");
    t.counts[static_cast<size_t>(a[i]) * t.k_b + b[i]]++;
  }
  t.n = static_cast<std::int64_t>(a.size());
  return t;
}

double nmi(const LabelVector& a, const LabelVector& b, NmiVariant variant) {
  const ContingencyTable t = contingency(a, b);
  if (t.n == 0) throw DataError("nmi: empty label vectors");
  const double n = static_cast<double>(t.n);
  std::vector<double> pa(t.k_a, 0.0), pb(t.k_b, 0.0);
  for (Index i = 0; i < t.k_a; ++i)
    for (Index j = 0; j < t.k_b; ++j) {
      pa[i] += t.at(i, j);
      pb[j] += t.at(i, j);
    }
  for (auto& x : pa) x /= n;
  for (auto& x : pb) x /= n;

  double mi = 0.0, ha = 0.0, hb = 0.0;
  for (Index i = 0; i < t.k_a; ++i)
    for (Index j = 0; j < t.k_b; ++j)
      if (t.at(i, j) > 0) {
        const double pij = t.at(i, j) / n;
        mi += pij * std::log(pij / (pa[i] * pb[j]));
      }
  for (double x : pa)
    if (x > 0) ha -= x * std::log(x);
  for (double x : pb)
    if (x > 0) hb -= x * std::log(x);

  if (ha + hb == 0.0) return 1.0;  // both partitions single-cluster
  double v;
  if (variant == NmiVariant::arithmetic) {
    v = 2.0 * mi / (ha + hb);
  } else {
    if (ha == 0.0 || hb == 0.0) return 0.0;
    v = mi / std::sqrt(ha * hb);
  }
  return std::clamp(v, 0.0, 1.0);
}

namespace {

// Hungarian algorithm (potentials form), minimizing total cost of a perfect
// matching on a k x k table. Returns column j -> row match[j].
std::vector<int> assign_min_cost(const std::vector<std::int64_t>& cost, int k) {
  constexpr std::int64_t INF = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(k + 1, 0), v(k + 1, 0), minv(k + 1);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), INF);
    std::vector<bool> used(k + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::int64_t delta = INF;
      int j1 = -1;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[static_cast<size_t>(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(k);
  for (int j = 1; j <= k; ++j) match[j - 1] = p[j] - 1;
  return match;
}

// Best total agreement achievable by permuting b's classes.
std::int64_t max_matched_weight(const ContingencyTable& t) {
  const int k = static_cast<int>(std::max(t.k_a, t.k_b));
  std::int64_t top = 0;
  for (auto c : t.counts) top = std::max(top, c);
  std::vector<std::int64_t> cost(static_cast<size_t>(k) * k, top);  // pads as weight 0
  for (Index i = 0; i < t.k_a; ++i)
    for (Index j = 0; j < t.k_b; ++j)
      cost[static_cast<size_t>(i) * k + j] = top - t.at(i, j);
  const std::vector<int> match = assign_min_cost(cost, k);
  std::int64_t w = 0;
  for (int j = 0; j < k; ++j) {
    if (j < t.k_b && match[j] < t.k_a) w += t.at(match[j], j);
  }
  return w;
}

}  // namespace

double misclassification_rate(const LabelVector& a, const LabelVector& b) {
  const ContingencyTable t = contingency(a, b);
  if (t.n == 0) throw DataError("misclassification_rate: empty label vectors");
  return 1.0 - static_cast<double>(max_matched_weight(t)) / static_cast<double>(t.n);
}

bool exact_recovery(const LabelVector& a, const LabelVector& b) {
  const ContingencyTable t = contingency(a, b);
  if (t.n == 0) throw DataError("exact_recovery: empty label vectors");
  return max_matched_weight(t) == t.n;
}

}  // namespace blockfit
