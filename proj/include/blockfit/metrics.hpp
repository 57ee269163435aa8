#pragma once

#include <cstdint>
#include <vector>

#include "blockfit/types.hpp"

namespace blockfit {

struct ContingencyTable {
  Index k_a = 0;
  Index k_b = 0;
  std::vector<std::int64_t> counts;  // k_a x k_b row-major
  std::int64_t n = 0;

  std::int64_t at(Index i, Index j) const { return counts[static_cast<size_t>(i * k_b + j)]; }
};

ContingencyTable contingency(const LabelVector& a, const LabelVector& b);

enum class NmiVariant { arithmetic, sqrt_norm };

// Normalized mutual information in [0,1]: 2I/(Ha+Hb) (arithmetic variant,
// the default) or I/sqrt(Ha*Hb); natural logs, 0*log0 = 0. Two single-cluster
// partitions score 1.
double nmi(const LabelVector& a, const LabelVector& b,
           NmiVariant variant = NmiVariant::arithmetic);

// Smallest mismatch fraction over all class-index permutations of b
// (maximum-weight assignment on the contingency table).
double misclassification_rate(const LabelVector& a, const LabelVector& b);

// True iff some permutation of b's class indices reproduces a exactly.
bool exact_recovery(const LabelVector& a, const LabelVector& b);

}  // namespace blockfit
