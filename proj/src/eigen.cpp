#include "blockfit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blockfit/parallel.hpp"
#include "blockfit/rng.hpp"

namespace blockfit {

namespace {

// Deterministic long-vector dot product: fixed-chunk partials merged in
// chunk order regardless of thread count.
double det_dot(const double* a, const double* b, Index n) {
  std::vector<double> part(parallel_chunk_count(n), 0.0);
  parallel_for(n, [&](Index lo, Index hi, Index chunk) {
    double s = 0.0;
    for (Index i = lo; i < hi; ++i) s += a[i] * b[i];
    part[chunk] = s;
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void axpy(double alpha, const double* x, double* y, Index n) {
  parallel_for(n, [&](Index lo, Index hi, Index) {
    for (Index i = lo; i < hi; ++i) y[i] += alpha * x[i];
  });
}

// Modified Gram-Schmidt, two passes, on the columns of X (n x p, stored as p
// contiguous length-n columns). Degenerate columns are refreshed from rng.
void orthonormalize(std::vector<double*>& cols, Index n, SplitMix64& rng) {
  const size_t p = cols.size();
  for (size_t j = 0; j < p; ++j) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (size_t i = 0; i < j; ++i) {
          const double r = det_dot(cols[i], cols[j], n);
          axpy(-r, cols[i], cols[j], n);
        }
      }
      const double nrm = std::sqrt(det_dot(cols[j], cols[j], n));
      if (nrm > 1e-150) {
        const double inv = 1.0 / nrm;
        parallel_for(n, [&](Index lo, Index hi, Index) {
          for (Index i = lo; i < hi; ++i) cols[j][i] *= inv;
        });
        break;
      }
      for (Index i = 0; i < n; ++i) cols[j][i] = 2.0 * rng.next_double() - 1.0;
    }
  }
}

}  // namespace

void jacobi_eigensymm(Matrix a, std::vector<double>& values, Matrix& vecs) {
  const Index p = a.rows();
  vecs = Matrix(p, p);
  for (Index i = 0; i < p; ++i) vecs(i, i) = 1.0;

  double norm = 0.0;
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) norm += a(i, j) * a(i, j);
  norm = std::sqrt(norm);
  const double stop = std::max(1e-300, 1e-15 * norm);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= stop) break;
    for (Index q = 1; q < p; ++q) {
      for (Index r = 0; r < q; ++r) {
        const double apq = a(r, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(r, r)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Index i = 0; i < p; ++i) {
          const double air = a(i, r), aiq = a(i, q);
          a(i, r) = c * air - s * aiq;
          a(i, q) = s * air + c * aiq;
        }
        for (Index i = 0; i < p; ++i) {
          const double ari = a(r, i), aqi = a(q, i);
          a(r, i) = c * ari - s * aqi;
          a(q, i) = s * ari + c * aqi;
        }
        for (Index i = 0; i < p; ++i) {
          const double vir = vecs(i, r), viq = vecs(i, q);
          vecs(i, r) = c * vir - s * viq;
          vecs(i, q) = s * vir + c * viq;
        }
      }
    }
  }
  values.resize(p);
  for (Index i = 0; i < p; ++i) values[i] = a(i, i);
}

EigenPairs top_eigenpairs(const SymmetricOp& op, int k, double tol, int max_iter,
                          std::uint64_t seed) {
  const Index n = op.n;
  if (k < 1 || k >= n) throw DataError("top_eigenpairs: need 1 <= k < n");
  if (tol <= 0.0 || max_iter < 1) throw DataError("top_eigenpairs: bad tolerance/iterations");
  const int p = static_cast<int>(std::min<Index>(n, k + 4));

  std::vector<std::vector<double>> xs(p, std::vector<double>(n));
  std::vector<std::vector<double>> ys(p, std::vector<double>(n));
  SplitMix64 rng(SplitMix64::derive(seed, 3));
  for (auto& col : xs)
    for (double& v : col) v = 2.0 * rng.next_double() - 1.0;
  std::vector<double*> xcols(p), ycols(p);
  for (int j = 0; j < p; ++j) {
    xcols[j] = xs[j].data();
    ycols[j] = ys[j].data();
  }
  orthonormalize(xcols, n, rng);

  std::vector<double> best_residuals(k, std::numeric_limits<double>::infinity());
  std::vector<double> ritz;
  Matrix w;

  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int j = 0; j < p; ++j) op.apply(xcols[j], ycols[j]);

    Matrix b(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        const double v = det_dot(xcols[i], ycols[j], n);
        b(i, j) = v;
        b(j, i) = v;
      }
    jacobi_eigensymm(b, ritz, w);

    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a2, int b2) {
      return std::abs(ritz[a2]) > std::abs(ritz[b2]);
    });

    double normest = 0.0;
    for (double v : ritz) normest = std::max(normest, std::abs(v));
    normest = std::max(normest, 1e-300);

    // residual of Ritz pair (theta, X w): || Y w - theta X w ||
    bool ok = true;
    std::vector<double> res(k);
    for (int r = 0; r < k; ++r) {
      const int c = order[r];
      const double theta = ritz[c];
      double s2 = 0.0;
      std::vector<double> part(parallel_chunk_count(n), 0.0);
      parallel_for(n, [&](Index lo, Index hi, Index chunk) {
        double local = 0.0;
        for (Index i = lo; i < hi; ++i) {
          double yv = 0.0, xv = 0.0;
          for (int j = 0; j < p; ++j) {
            yv += ycols[j][i] * w(j, c);
            xv += xcols[j][i] * w(j, c);
          }
          const double d = yv - theta * xv;
          local += d * d;
        }
        part[chunk] = local;
      });
      for (double pv : part) s2 += pv;
      res[r] = std::sqrt(s2);
      best_residuals[r] = std::min(best_residuals[r], res[r]);
      if (res[r] > tol * normest) ok = false;
    }

    if (ok) {
      EigenPairs out;
      out.iterations = iter;
      out.values.resize(k);
      out.vectors = Matrix(n, k);
      for (int r = 0; r < k; ++r) {
        const int c = order[r];
        out.values[r] = ritz[c];
        parallel_for(n, [&](Index lo, Index hi, Index) {
          for (Index i = lo; i < hi; ++i) {
            double xv = 0.0;
            for (int j = 0; j < p; ++j) xv += xcols[j][i] * w(j, c);
            out.vectors(i, r) = xv;
          }
        });
        // unit norm + canonical sign (largest-|entry| coordinate positive)
        double nrm = 0.0, peak = 0.0, sign = 1.0;
        for (Index i = 0; i < n; ++i) nrm += out.vectors(i, r) * out.vectors(i, r);
        nrm = std::sqrt(nrm);
        for (Index i = 0; i < n; ++i) {
          const double v = std::abs(out.vectors(i, r));
          if (v > peak) {
            peak = v;
            sign = out.vectors(i, r) >= 0 ? 1.0 : -1.0;
          }
        }
        const double inv = (nrm > 0 ? 1.0 / nrm : 0.0) * sign;
        for (Index i = 0; i < n; ++i) out.vectors(i, r) *= inv;
      }
      return out;
    }

    for (int j = 0; j < p; ++j) std::swap(xcols[j], ycols[j]);
    orthonormalize(xcols, n, rng);
  }

  std::string msg = "top_eigenpairs: no convergence after " + std::to_string(max_iter) +
                    " iterations; best residuals:";
  for (double r : best_residuals) msg += " " + std::to_string(r);
  throw NumericalError(msg);
}

}  // namespace blockfit
