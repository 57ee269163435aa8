#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "blockfit/types.hpp"

namespace blockfit {

// Symmetric linear operator given by its action; lets SCP apply the sparse
// adjacency plus an implicit rank-one regularizer without materializing it.
struct SymmetricOp {
  Index n = 0;
  std::function<void(const double* x, double* y)> apply;
};

struct EigenPairs {
  std::vector<double> values;  // k largest by magnitude, descending
  Matrix vectors;              // n x k, orthonormal columns
  int iterations = 0;
};

// Block orthogonal iteration with a Rayleigh-Ritz projection each sweep and a
// few guard vectors. Converged when every requested Ritz pair has residual
// ||Mv - lambda v|| <= tol * ||M||_est; throws NumericalError (reporting the
// best residuals) if max_iter sweeps are not enough.
EigenPairs top_eigenpairs(const SymmetricOp& op, int k, double tol, int max_iter,
                          std::uint64_t seed);

// Cyclic Jacobi eigendecomposition for small dense symmetric matrices
// (Rayleigh-Ritz projections are tiny). Eigenpairs are unsorted; vectors are
// the columns of `vecs`.
void jacobi_eigensymm(Matrix a, std::vector<double>& values, Matrix& vecs);

}  // namespace blockfit
