#include "blockfit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "blockfit/bisbm.hpp"
#include "blockfit/dcsbm.hpp"
#include "blockfit/generators.hpp"
#include "blockfit/metrics.hpp"
#include "blockfit/parallel.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/scp.hpp"

namespace blockfit {

SweepSetting parse_setting(const std::string& name) {
  if (name == "s1_convergence") return SweepSetting::s1_convergence;
  if (name == "s2_small_dense") return SweepSetting::s2_small_dense;
  if (name == "s3_sparse") return SweepSetting::s3_sparse;
  if (name == "dcsbm") return SweepSetting::dcsbm;
  if (name == "bisbm") return SweepSetting::bisbm;
  if (name == "consistency") return SweepSetting::consistency;
  throw DataError("unknown sweep setting: " + name);
}

std::string setting_name(SweepSetting setting) {
  switch (setting) {
    case SweepSetting::s1_convergence: return "s1_convergence";
    case SweepSetting::s2_small_dense: return "s2_small_dense";
    case SweepSetting::s3_sparse: return "s3_sparse";
    case SweepSetting::dcsbm: return "dcsbm";
    case SweepSetting::bisbm: return "bisbm";
    case SweepSetting::consistency: return "consistency";
  }
  throw DataError("unknown sweep setting");
}

SweepSpec default_sweep(SweepSetting setting) {
  SweepSpec spec;
  spec.setting = setting;
  switch (setting) {
    case SweepSetting::s1_convergence:
      spec.grid = {{"config", {0, 1}},
                   {"target_nmi", {0.1, 0.2, 0.3, 0.4, 0.5}},
                   {"n", {500}}};
      spec.replicates = 20;
      break;
    case SweepSetting::s2_small_dense:
      spec.grid = {{"n", {300, 500, 800}}};
      spec.replicates = 10;
      break;
    case SweepSetting::s3_sparse:
      spec.grid = {{"beta", {0.0, 0.05, 0.1, 0.15, 0.2}}, {"lambda", {5}}, {"n", {1000}}};
      spec.replicates = 10;
      break;
    case SweepSetting::dcsbm:
      spec.grid = {{"m", {2, 4, 6}}, {"n", {1200}}};
      spec.replicates = 10;
      break;
    case SweepSetting::bisbm:
      spec.grid = {{"side", {1, 2}}, {"n", {1200}}};
      spec.replicates = 10;
      break;
    case SweepSetting::consistency:
      spec.grid = {{"gamma", {0.5, 0.6, 0.7, 0.8, 0.9}}, {"n", {1000}}};
      spec.replicates = 20;
      break;
  }
  return spec;
}

namespace {

double axis_value(const std::map<std::string, double>& point, const std::string& name) {
  auto it = point.find(name);
  if (it == point.end()) throw DataError("sweep grid is missing the axis '" + name + "'");
  return it->second;
}

Index axis_index(const std::map<std::string, double>& point, const std::string& name) {
  const double v = axis_value(point, name);
  const Index n = static_cast<Index>(std::llround(v));
  if (n < 1 || static_cast<double>(n) != v) {
    throw DataError("axis '" + name + "' must be a positive integer, got " + std::to_string(v));
  }
  return n;
}

Matrix two_block_matrix(int k, double within, double between) {
  Matrix p(k, k, between);
  for (int i = 0; i < k; ++i) p(i, i) = within;
  return p;
}

void fill_fit_fields(SweepRow& row, const std::vector<double>& trace, bool converged,
                     double runtime_ms) {
  row.converged = converged ? 1 : 0;
  row.outer_iters = static_cast<int>(trace.size()) - 1;
  row.objective = trace.empty() ? 0.0 : trace.back();
  row.runtime_ms = runtime_ms;
}

// One grid-point x replicate job. Everything downstream of `seed` is
// deterministic; runtime_ms covers the fit call only.
void run_one(SweepSetting setting, const std::map<std::string, double>& point,
             std::uint64_t seed, SweepRow& row) {
  switch (setting) {
    case SweepSetting::s1_convergence: {
      const int config = static_cast<int>(axis_value(point, "config"));
      if (config != 0 && config != 1) throw DataError("axis 'config' must be 0 or 1");
      const Index n = axis_index(point, "n");
      const int k = config == 0 ? 2 : 5;
      const double p1 = config == 0 ? 0.13 : 0.10;
      const double p2 = config == 0 ? 0.07 : 0.13;
      SbmSpec spec;
      spec.n = n;
      spec.pi.assign(static_cast<std::size_t>(k), 1.0 / k);
      spec.P = two_block_matrix(k, p1, p2);
      SbmSample sample = sample_sbm(spec, seed);
      LabelVector init = perturb_labels_to_nmi(sample.labels, axis_value(point, "target_nmi"), seed);
      row.nmi_init = nmi(init, sample.labels);
      FitConfig cfg;
      cfg.seed = seed;
      FitResult fr = fit(sample.graph, k, init, cfg);
      row.nmi = nmi(fr.labels, sample.labels);
      row.exact = exact_recovery(fr.labels, sample.labels) ? 1 : 0;
      fill_fit_fields(row, fr.objective_trace, fr.converged, fr.runtime_ms);
      break;
    }
    case SweepSetting::s2_small_dense: {
      const Index n = axis_index(point, "n");
      SbmSpec spec;
      spec.n = n;
      spec.pi = {0.5, 0.5};
      spec.P = two_block_matrix(2, 0.84, 0.06);
      SbmSample sample = sample_sbm(spec, seed);
      ScpConfig scp_cfg;
      scp_cfg.k = 2;
      scp_cfg.seed = seed;
      LabelVector init = scp(sample.graph, scp_cfg);
      row.nmi_init = nmi(init, sample.labels);
      FitConfig cfg;
      cfg.seed = seed;
      FitResult fr = fit(sample.graph, 2, init, cfg);
      row.nmi = nmi(fr.labels, sample.labels);
      row.exact = exact_recovery(fr.labels, sample.labels) ? 1 : 0;
      fill_fit_fields(row, fr.objective_trace, fr.converged, fr.runtime_ms);
      break;
    }
    case SweepSetting::s3_sparse: {
      const Index n = axis_index(point, "n");
      const int k = 3;
      SbmSpec spec;
      spec.n = n;
      spec.pi = {0.2, 0.3, 0.5};
      spec.P = build_edge_prob_matrix(k, axis_value(point, "beta"), {1.0, 1.0, 1.0},
                                      axis_value(point, "lambda"), spec.pi, n);
      SbmSample sample = sample_sbm(spec, seed);
      ScpConfig scp_cfg;
      scp_cfg.k = k;
      scp_cfg.seed = seed;
      LabelVector init = scp(sample.graph, scp_cfg);
      row.nmi_init = nmi(init, sample.labels);
      FitConfig cfg;
      cfg.seed = seed;
      FitResult fr = fit(sample.graph, k, init, cfg);
      row.nmi = nmi(fr.labels, sample.labels);
      row.exact = exact_recovery(fr.labels, sample.labels) ? 1 : 0;
      fill_fit_fields(row, fr.objective_trace, fr.converged, fr.runtime_ms);
      break;
    }
    case SweepSetting::dcsbm: {
      const Index n = axis_index(point, "n");
      const int m = static_cast<int>(axis_index(point, "m"));
      const int k = 3;
      DcsbmSpec spec;
      spec.n = n;
      spec.pi = {0.2, 0.3, 0.5};
      spec.P = Matrix(k, k, 0.01);
      spec.P(0, 0) = 0.03;
      spec.P(1, 1) = 0.04;
      spec.P(2, 2) = 0.05;
      spec.theta = sample_theta_two_point(n, m, seed);
      SbmSample sample = sample_dcsbm(spec, seed);
      ScpConfig scp_cfg;
      scp_cfg.k = k;
      scp_cfg.seed = seed;
      LabelVector init = scp(sample.graph, scp_cfg);
      row.nmi_init = nmi(init, sample.labels);
      DcFitConfig cfg;
      cfg.seed = seed;
      DcFitResult fr = fit_dcsbm(sample.graph, k, init, cfg);
      row.nmi = nmi(fr.labels, sample.labels);
      row.exact = exact_recovery(fr.labels, sample.labels) ? 1 : 0;
      fill_fit_fields(row, fr.objective_trace, fr.converged, fr.runtime_ms);
      break;
    }
    case SweepSetting::bisbm: {
      const Index n = axis_index(point, "n");
      const int side = static_cast<int>(axis_value(point, "side"));
      if (side != 1 && side != 2) throw DataError("axis 'side' must be 1 or 2");
      BisbmSpec spec;
      spec.m = n;
      spec.n = n;
      spec.pi1 = {0.5, 0.5};
      spec.pi2 = {0.5, 0.5};
      spec.P = Matrix(2, 2, 0.1 * 1.2);
      spec.P(0, 0) = spec.P(1, 1) = 0.1 * 1.6;
      BisbmSample sample = sample_bisbm(spec, seed);
      ScpConfig scp_cfg;
      scp_cfg.k = 2;
      scp_cfg.seed = seed;
      LabelVector init_c1 = scp_on_product(sample.graph, true, scp_cfg);
      LabelVector init_c2 = scp_on_product(sample.graph, false, scp_cfg);
      FitConfig cfg;
      cfg.seed = seed;
      BisbmFitResult fr = fit_bisbm(sample.graph, 2, 2, init_c1, init_c2, cfg);
      const FitResult& fit_side = side == 1 ? fr.c1 : fr.c2;
      const LabelVector& truth = side == 1 ? sample.labels_rows : sample.labels_cols;
      const LabelVector& init = side == 1 ? init_c1 : init_c2;
      row.nmi_init = nmi(init, truth);
      row.nmi = nmi(fit_side.labels, truth);
      row.exact = exact_recovery(fit_side.labels, truth) ? 1 : 0;
      fill_fit_fields(row, fit_side.objective_trace, fit_side.converged, fit_side.runtime_ms);
      break;
    }
    case SweepSetting::consistency: {
      const Index n = axis_index(point, "n");
      const double gamma = axis_value(point, "gamma");
      // Balanced two-community regime: exactly n/2 nodes per class so the
      // exact-overlap perturbation is always feasible.
      LabelVector truth(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) truth[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
      const Matrix P =
          two_block_matrix(2, 50.0 / static_cast<double>(n), 5.0 / static_cast<double>(n));
      SparseGraph graph = sample_sbm_edges(truth, P, seed);
      LabelVector init = perturb_labels(truth, gamma, seed);
      row.nmi_init = nmi(init, truth);
      const auto t0 = std::chrono::steady_clock::now();
      LabelVector refined = refine_once(graph, init);
      const auto t1 = std::chrono::steady_clock::now();
      row.nmi = nmi(refined, truth);
      row.exact = exact_recovery(refined, truth) ? 1 : 0;
      row.converged = 1;
      row.outer_iters = 1;
      row.objective = 0.0;
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      break;
    }
  }
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.replicates < 1) throw DataError("run_sweep: replicates must be at least 1");
  if (spec.grid.empty()) throw DataError("run_sweep: grid must not be empty");
  for (const auto& axis : spec.grid) {
    if (axis.second.empty()) {
      throw DataError("run_sweep: axis '" + axis.first + "' has no values");
    }
  }

  SweepTable table;
  table.setting = setting_name(spec.setting);
  for (const auto& axis : spec.grid) table.axes.push_back(axis.first);

  // Cartesian product in axis order, first axis slowest.
  std::vector<std::vector<double>> points;
  std::vector<double> current(spec.grid.size(), 0.0);
  const auto expand = [&](auto&& self, std::size_t depth) -> void {
    if (depth == spec.grid.size()) {
      points.push_back(current);
      return;
    }
    for (double v : spec.grid[depth].second) {
      current[depth] = v;
      self(self, depth + 1);
    }
  };
  expand(expand, 0);

  table.rows.resize(points.size() * static_cast<std::size_t>(spec.replicates));
  const Index n_jobs = static_cast<Index>(table.rows.size());
  parallel_for_tasks(n_jobs, [&](Index job) {
    const std::size_t pt = static_cast<std::size_t>(job) / spec.replicates;
    const int rep = static_cast<int>(static_cast<std::size_t>(job) % spec.replicates);
    SweepRow& row = table.rows[static_cast<std::size_t>(job)];
    row.point = points[pt];
    row.replicate = rep;
    row.seed = spec.base_seed + static_cast<std::uint64_t>(rep);
    std::map<std::string, double> named;
    for (std::size_t a = 0; a < table.axes.size(); ++a) named[table.axes[a]] = row.point[a];
    try {
      run_one(spec.setting, named, row.seed, row);
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
  });
  return table;
}

SummaryTable summarize(const SweepTable& table) {
  SummaryTable out;
  out.setting = table.setting;
  out.axes = table.axes;

  // Group rows by grid point, preserving first-appearance order.
  std::vector<std::vector<double>> order;
  std::map<std::vector<double>, std::size_t> index;
  for (const SweepRow& row : table.rows) {
    if (index.emplace(row.point, order.size()).second) order.push_back(row.point);
  }
  out.rows.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.rows[i].point = order[i];

  for (const SweepRow& row : table.rows) {
    SummaryRow& s = out.rows[index.at(row.point)];
    s.replicates += 1;
    if (!row.error.empty()) {
      s.failures += 1;
      continue;
    }
    s.nmi_mean += row.nmi;
    s.nmi_sd += row.nmi * row.nmi;
    s.nmi_init_mean += row.nmi_init;
    s.convergence_rate += row.converged;
    s.exact_rate += row.exact;
    s.runtime_ms_mean += row.runtime_ms;
  }
  for (SummaryRow& s : out.rows) {
    const int n = s.replicates - s.failures;
    if (n <= 0) {
      s.nmi_mean = s.nmi_sd = s.nmi_init_mean = 0.0;
      s.convergence_rate = s.exact_rate = s.runtime_ms_mean = 0.0;
      continue;
    }
    const double mean = s.nmi_mean / n;
    double var = 0.0;
    if (n > 1) {
      var = (s.nmi_sd - static_cast<double>(n) * mean * mean) / (n - 1);
      var = std::max(var, 0.0);
    }
    s.nmi_mean = mean;
    s.nmi_sd = std::sqrt(var);
    s.nmi_init_mean /= n;
    s.convergence_rate /= n;
    s.exact_rate /= n;
    s.runtime_ms_mean /= n;
  }
  return out;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
  out << "setting";
  for (const std::string& axis : table.axes) out << ',' << axis;
  out << ",replicate,seed,nmi,nmi_init,objective,runtime_ms,converged,outer_iters,exact,error\n";
  for (const SweepRow& row : table.rows) {
    out << table.setting;
    for (double v : row.point) out << ',' << format_double(v);
    out << ',' << row.replicate << ',' << row.seed << ',' << format_double(row.nmi) << ','
        << format_double(row.nmi_init) << ',' << format_double(row.objective) << ','
        << format_double(row.runtime_ms) << ',' << row.converged << ',' << row.outer_iters << ','
        << row.exact << ',' << csv_escape(row.error) << '\n';
  }
}

void write_summary_csv(const SummaryTable& table, std::ostream& out) {
  out << "setting";
  for (const std::string& axis : table.axes) out << ',' << axis;
  out << ",replicates,failures,nmi_mean,nmi_sd,nmi_init_mean,convergence_rate,exact_rate,"
         "runtime_ms_mean\n";
  for (const SummaryRow& row : table.rows) {
    out << table.setting;
    for (double v : row.point) out << ',' << format_double(v);
    out << ',' << row.replicates << ',' << row.failures << ',' << format_double(row.nmi_mean)
        << ',' << format_double(row.nmi_sd) << ',' << format_double(row.nmi_init_mean) << ','
        << format_double(row.convergence_rate) << ',' << format_double(row.exact_rate) << ','
        << format_double(row.runtime_ms_mean) << '\n';
  }
}

}  // namespace blockfit
