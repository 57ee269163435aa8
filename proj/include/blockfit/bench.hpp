#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "blockfit/types.hpp"

namespace blockfit {

// Simulation families mirroring the benchmark scenarios:
//   s1_convergence  convergence proportion vs initialization quality
//   s2_small_dense  small dense two-block graphs, spectral init vs refit
//   s3_sparse       sparse out-in-ratio family, K=3, pi=(0.2,0.3,0.5)
//   dcsbm           degree-corrected three-block family, two-point theta
//   bisbm           bipartite two-by-two family, one row per side
//   consistency     one-step refinement exact-recovery rate vs overlap
enum class SweepSetting { s1_convergence, s2_small_dense, s3_sparse, dcsbm, bisbm, consistency };

SweepSetting parse_setting(const std::string& name);  // DataError on unknown names
std::string setting_name(SweepSetting setting);

struct SweepSpec {
  SweepSetting setting = SweepSetting::s3_sparse;
  // Named axes, expanded as a cartesian product in the given order.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  int replicates = 10;
  std::uint64_t base_seed = 0;
};

// The paper-shaped default grid for a setting, at desk scale.
SweepSpec default_sweep(SweepSetting setting);

struct SweepRow {
  std::vector<double> point;  // axis values, same order as the table's axes
  int replicate = 0;
  std::uint64_t seed = 0;
  double nmi = 0.0;
  double nmi_init = 0.0;  // the spectral (or perturbed) starting point's NMI
  double objective = 0.0;
  double runtime_ms = 0.0;  // fit time only; generation and init excluded
  int converged = 0;
  int outer_iters = 0;
  int exact = 0;  // exact label recovery up to permutation
  std::string error;  // non-empty when this replicate failed
};

struct SweepTable {
  std::string setting;
  std::vector<std::string> axes;
  std::vector<SweepRow> rows;  // grid-major, replicate-minor; fixed order
};

// Runs every grid point x replicate with seed = base_seed + replicate index.
// Replicates are independent jobs; rows appear in deterministic grid order
// regardless of scheduling. Individual failures land in the row's error
// column and never abort the sweep.
SweepTable run_sweep(const SweepSpec& spec);

struct SummaryRow {
  std::vector<double> point;
  int replicates = 0;
  int failures = 0;
  double nmi_mean = 0.0;
  double nmi_sd = 0.0;
  double nmi_init_mean = 0.0;
  double convergence_rate = 0.0;
  double exact_rate = 0.0;
  double runtime_ms_mean = 0.0;
};

struct SummaryTable {
  std::string setting;
  std::vector<std::string> axes;
  std::vector<SummaryRow> rows;
};

// Mean/sd aggregation per grid point (sample sd, n-1 denominator; 0 for a
// single replicate). Failed rows count in `failures` and are excluded from
// the moments.
SummaryTable summarize(const SweepTable& table);

void write_sweep_csv(const SweepTable& table, std::ostream& out);
void write_summary_csv(const SummaryTable& table, std::ostream& out);

}  // namespace blockfit
