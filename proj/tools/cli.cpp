#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "blockfit/bench.hpp"
#include "blockfit/bisbm.hpp"
#include "blockfit/dcsbm.hpp"
#include "blockfit/generators.hpp"
#include "blockfit/graph.hpp"
#include "blockfit/metrics.hpp"
#include "blockfit/parallel.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/result_io.hpp"
#include "blockfit/rng.hpp"
#include "blockfit/scp.hpp"

#ifndef BLOCKFIT_VERSION
#define BLOCKFIT_VERSION "dev"
#endif

namespace blockfit::cli {

namespace {

using nlohmann::json;

// Usage-class problems detected after flag parsing (bad flag combinations,
// malformed values); mapped to exit code 1 like CLI11's own parse errors.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + tok + "' as a number");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty value list");
  return out;
}

std::string strip(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat key=value config files. '#'/';' start comments, later entries override
// earlier ones, and explicit command-line flags override file entries. Each
// surviving entry is appended to the argument list as --key=value, so values
// go through the normal option machinery (and error reporting) of whichever
// subcommand was invoked.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config: expected a file path");
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  std::vector<std::string> order;
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = strip(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    const std::size_t eq = text.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw UsageError("--config: " + where + ": expected key=value");
    }
    const std::string key = strip(text.substr(0, eq));
    std::string value = strip(text.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
      throw UsageError("--config: " + where + ": invalid key '" + key + "'");
    }
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (entries.find(key) == entries.end()) order.push_back(key);
    entries[key] = value;
  }
  for (const std::string& key : order) {
    if (key == "config") continue;  // a config file cannot chain-load another
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) {
        given = true;
        break;
      }
    }
    if (!given) args.push_back(flag + "=" + entries[key]);
  }
  return args;
}

std::vector<double> balanced_pi(int k) {
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
}

Matrix planted_matrix(int k_rows, int k_cols, double within, double between) {
  Matrix p(k_rows, k_cols, between);
  for (int i = 0; i < std::min(k_rows, k_cols); ++i) p(i, i) = within;
  return p;
}

// Common run context shared by the subcommand handlers.
struct RunContext {
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config_path;
  std::chrono::steady_clock::time_point start;

  void begin() {
    if (!seed_given) {
      // No --seed: generate one and record it in every artifact.
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    set_thread_count(threads);
    start = std::chrono::steady_clock::now();
  }

  double wall_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void write_manifest(const std::string& path, const std::string& subcommand,
                    const json& config, const std::vector<std::string>& input_paths,
                    const RunContext& ctx) {
  json doc;
  doc["subcommand"] = subcommand;
  doc["config"] = config;
  doc["seed"] = ctx.seed;
  doc["threads"] = ctx.threads;
  doc["version"] = BLOCKFIT_VERSION;
  doc["wall_clock_ms"] = ctx.wall_ms();
  json inputs = json::object();
  for (const std::string& p : input_paths) {
    inputs[p] = json{{"path", p}, {"digest", file_digest(p)}};
  }
  doc["inputs"] = inputs;
  write_text_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  Index n = 0, rows = 0, cols = 0;
  int k = 2, k1 = 2, k2 = 2;
  std::string pi_csv, pi2_csv, omega_csv;
  double p_within = -1.0, p_between = -1.0;
  double beta = -1.0, lambda = -1.0;
  int theta_m = 4;
  std::string out_graph, out_labels, out_labels_cols;
};

Matrix resolve_square_p(const SimulateArgs& a, int k, const std::vector<double>& pi, Index n) {
  const bool have_plain = a.p_within >= 0.0 || a.p_between >= 0.0;
  const bool have_scaled = a.beta >= 0.0 || a.lambda >= 0.0;
  if (have_plain == have_scaled) {
    throw UsageError("give either --p-within/--p-between or --beta/--lambda");
  }
  if (have_plain) {
    if (a.p_within < 0.0 || a.p_between < 0.0) {
      throw UsageError("--p-within and --p-between must be given together");
    }
    return planted_matrix(k, k, a.p_within, a.p_between);
  }
  if (a.beta < 0.0 || a.lambda < 0.0) {
    throw UsageError("--beta and --lambda must be given together");
  }
  std::vector<double> omega =
      a.omega_csv.empty() ? std::vector<double>(static_cast<std::size_t>(k), 1.0)
                          : parse_double_list(a.omega_csv, "--omega");
  return build_edge_prob_matrix(k, a.beta, omega, a.lambda, pi, n);
}

void run_simulate(const SimulateArgs& a, RunContext& ctx) {
  ctx.begin();
  json config;
  config["model"] = a.model;

  if (a.model == "bisbm") {
    BisbmSpec spec;
    spec.m = a.rows;
    spec.n = a.cols;
    spec.pi1 = a.pi_csv.empty() ? balanced_pi(a.k1) : parse_double_list(a.pi_csv, "--pi");
    spec.pi2 = a.pi2_csv.empty() ? balanced_pi(a.k2) : parse_double_list(a.pi2_csv, "--pi2");
    if (a.p_within < 0.0 || a.p_between < 0.0) {
      throw UsageError("simulate bisbm needs --p-within and --p-between");
    }
    spec.P = planted_matrix(a.k1, a.k2, a.p_within, a.p_between);
    if (a.out_labels_cols.empty()) {
      throw UsageError("simulate bisbm needs --out-labels-cols");
    }
    BisbmSample sample = sample_bisbm(spec, ctx.seed);
    write_edge_list_file(sample.graph, a.out_graph);
    write_labels_file(a.out_labels, sample.labels_rows);
    write_labels_file(a.out_labels_cols, sample.labels_cols);
    config["rows"] = a.rows;
    config["cols"] = a.cols;
    config["k1"] = a.k1;
    config["k2"] = a.k2;
    config["pi1"] = spec.pi1;
    config["pi2"] = spec.pi2;
    config["p_within"] = a.p_within;
    config["p_between"] = a.p_between;
    config["out_graph"] = a.out_graph;
    config["out_labels"] = a.out_labels;
    config["out_labels_cols"] = a.out_labels_cols;
  } else {
    const std::vector<double> pi =
        a.pi_csv.empty() ? balanced_pi(a.k) : parse_double_list(a.pi_csv, "--pi");
    const Matrix p = resolve_square_p(a, a.k, pi, a.n);
    SbmSample sample;
    if (a.model == "sbm") {
      SbmSpec spec;
      spec.n = a.n;
      spec.pi = pi;
      spec.P = p;
      sample = sample_sbm(spec, ctx.seed);
    } else {
      DcsbmSpec spec;
      spec.n = a.n;
      spec.pi = pi;
      spec.P = p;
      spec.theta = sample_theta_two_point(a.n, a.theta_m, ctx.seed);
      sample = sample_dcsbm(spec, ctx.seed);
      config["theta_m"] = a.theta_m;
    }
    write_edge_list_file(sample.graph, a.out_graph);
    write_labels_file(a.out_labels, sample.labels);
    config["n"] = a.n;
    config["k"] = a.k;
    config["pi"] = pi;
    if (a.p_within >= 0.0) {
      config["p_within"] = a.p_within;
      config["p_between"] = a.p_between;
    } else {
      config["beta"] = a.beta;
      config["lambda"] = a.lambda;
    }
    config["out_graph"] = a.out_graph;
    config["out_labels"] = a.out_labels;
  }
  write_manifest(a.out_graph + ".manifest.json", "simulate " + a.model, config, {}, ctx);
}

// -------------------------------------------------------------------- init

struct InitArgs {
  std::string graph_path;
  std::string out_path;
  int k = 2;
  double reg_tau = 0.25;
  bool one_based = false;
  Index rows = 0, cols = 0;  // both nonzero -> bipartite input
  int side = 0;              // 1 = row-side labels, 2 = column-side labels
};

void run_init_scp(const InitArgs& a, RunContext& ctx) {
  ctx.begin();
  LoadOptions opts;
  opts.one_based = a.one_based;
  const bool bipartite = a.rows > 0 || a.cols > 0;
  if (bipartite) {
    if (a.rows <= 0 || a.cols <= 0) throw UsageError("--rows and --cols must be given together");
    if (a.side != 1 && a.side != 2) throw UsageError("bipartite input needs --side 1 or --side 2");
    opts.bipartite_dims = {a.rows, a.cols};
  }
  const SparseGraph g = load_edge_list_file(a.graph_path, opts);

  ScpConfig cfg;
  cfg.k = a.k;
  cfg.reg_tau = a.reg_tau;
  cfg.seed = ctx.seed;
  const LabelVector labels = bipartite ? scp_on_product(g, a.side == 1, cfg) : scp(g, cfg);
  write_labels_file(a.out_path, labels);

  json config{{"k", a.k},       {"reg_tau", a.reg_tau}, {"graph", a.graph_path},
              {"out", a.out_path}, {"one_based", a.one_based}};
  if (bipartite) {
    config["rows"] = a.rows;
    config["cols"] = a.cols;
    config["side"] = a.side;
  }
  write_manifest(a.out_path + ".manifest.json", "init scp", config, {a.graph_path}, ctx);
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string graph_path;
  std::string out_path;
  std::string init = "scp";  // "scp" or a labels-file path
  std::string init_c1, init_c2;
  int k = 2, k1 = 2, k2 = 2;
  Index rows = 0, cols = 0;
  double outer_tol = 1e-6, inner_tol = 1e-8;
  int outer_max = 60, inner_max = 100;
  int restarts = 0;
  int theta_sweeps = 1;
  bool one_based = false;
};

LabelVector resolve_square_init(const FitArgs& a, const SparseGraph& g, int k,
                                std::uint64_t seed) {
  if (a.init == "scp") {
    ScpConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    return scp(g, cfg);
  }
  LabelVector labels = load_labels_file(a.init);
  if (static_cast<Index>(labels.size()) != g.n_rows) {
    throw DataError("init labels: expected " + std::to_string(g.n_rows) + " entries, got " +
                    std::to_string(labels.size()));
  }
  return labels;
}

// Restart r > 0 perturbs the initialization: each node keeps its label with
// probability 0.8, otherwise is relabeled uniformly over the K classes.
LabelVector perturb_init_for_restart(const LabelVector& init, int k, std::uint64_t seed, int r) {
  SplitMix64 rng(SplitMix64::derive(seed, 40 + static_cast<std::uint64_t>(r)));
  LabelVector out = init;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.next_double() >= 0.8) {
      out[i] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
    }
  }
  return out;
}

void fill_common_fit_config(const FitArgs& a, FitConfig& cfg, std::uint64_t seed) {
  cfg.outer_tol = a.outer_tol;
  cfg.outer_max_iter = a.outer_max;
  cfg.inner_tol = a.inner_tol;
  cfg.inner_max_iter = a.inner_max;
  cfg.seed = seed;
}

json fit_config_json(const FitArgs& a, const std::string& model) {
  json config;
  config["model"] = model;
  config["graph"] = a.graph_path;
  config["out"] = a.out_path;
  config["init"] = a.init;
  config["outer_tol"] = a.outer_tol;
  config["outer_max"] = a.outer_max;
  config["inner_tol"] = a.inner_tol;
  config["inner_max"] = a.inner_max;
  config["restarts"] = a.restarts;
  config["one_based"] = a.one_based;
  return config;
}

void run_fit_sbm(const FitArgs& a, RunContext& ctx) {
  ctx.begin();
  if (a.k < 1) throw UsageError("--k must be at least 1");
  LoadOptions opts;
  opts.one_based = a.one_based;
  const SparseGraph g = load_edge_list_file(a.graph_path, opts);
  const LabelVector init = resolve_square_init(a, g, a.k, ctx.seed);

  FitConfig cfg;
  fill_common_fit_config(a, cfg, ctx.seed);
  FitResult best = fit(g, a.k, init, cfg);
  for (int r = 1; r <= a.restarts; ++r) {
    FitResult cand = fit(g, a.k, perturb_init_for_restart(init, a.k, ctx.seed, r), cfg);
    if (cand.objective_trace.back() > best.objective_trace.back()) best = std::move(cand);
  }

  write_text_file(a.out_path, fit_result_to_json(best, ctx.seed));
  json config = fit_config_json(a, "sbm");
  config["k"] = a.k;
  write_manifest(a.out_path + ".manifest.json", "fit sbm", config, {a.graph_path}, ctx);
}

void run_fit_dcsbm(const FitArgs& a, RunContext& ctx) {
  ctx.begin();
  if (a.k < 1) throw UsageError("--k must be at least 1");
  LoadOptions opts;
  opts.one_based = a.one_based;
  const SparseGraph g = load_edge_list_file(a.graph_path, opts);
  const LabelVector init = resolve_square_init(a, g, a.k, ctx.seed);

  DcFitConfig cfg;
  fill_common_fit_config(a, cfg, ctx.seed);
  cfg.theta_sweeps = a.theta_sweeps;
  DcFitResult best = fit_dcsbm(g, a.k, init, cfg);
  for (int r = 1; r <= a.restarts; ++r) {
    DcFitResult cand = fit_dcsbm(g, a.k, perturb_init_for_restart(init, a.k, ctx.seed, r), cfg);
    if (cand.objective_trace.back() > best.objective_trace.back()) best = std::move(cand);
  }

  write_text_file(a.out_path, dc_fit_result_to_json(best, ctx.seed));
  json config = fit_config_json(a, "dcsbm");
  config["k"] = a.k;
  config["theta_sweeps"] = a.theta_sweeps;
  write_manifest(a.out_path + ".manifest.json", "fit dcsbm", config, {a.graph_path}, ctx);
}

void run_fit_bisbm(const FitArgs& a, RunContext& ctx) {
  ctx.begin();
  if (a.k1 < 1 || a.k2 < 1) throw UsageError("--k1 and --k2 must be at least 1");
  if (a.rows <= 0 || a.cols <= 0) throw UsageError("fit bisbm needs --rows and --cols");
  LoadOptions opts;
  opts.one_based = a.one_based;
  opts.bipartite_dims = {a.rows, a.cols};
  const SparseGraph g = load_edge_list_file(a.graph_path, opts);

  LabelVector init_c1, init_c2;
  if (a.init_c1.empty() != a.init_c2.empty()) {
    throw UsageError("--init-c1 and --init-c2 must be given together");
  }
  if (!a.init_c1.empty()) {
    init_c1 = load_labels_file(a.init_c1);
    init_c2 = load_labels_file(a.init_c2);
  } else if (a.init == "scp") {
    ScpConfig cfg1;
    cfg1.k = a.k1;
    cfg1.seed = ctx.seed;
    init_c1 = scp_on_product(g, true, cfg1);
    ScpConfig cfg2;
    cfg2.k = a.k2;
    cfg2.seed = ctx.seed;
    init_c2 = scp_on_product(g, false, cfg2);
  } else {
    throw UsageError("fit bisbm takes --init scp or --init-c1/--init-c2 label files");
  }

  FitConfig cfg;
  fill_common_fit_config(a, cfg, ctx.seed);
  const BisbmFitResult result = fit_bisbm(g, a.k1, a.k2, init_c1, init_c2, cfg);

  write_text_file(a.out_path, bisbm_fit_result_to_json(result, ctx.seed));
  json config = fit_config_json(a, "bisbm");
  config["k1"] = a.k1;
  config["k2"] = a.k2;
  config["rows"] = a.rows;
  config["cols"] = a.cols;
  write_manifest(a.out_path + ".manifest.json", "fit bisbm", config, {a.graph_path}, ctx);
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string truth_path, pred_path;
  std::string metric = "nmi";
  std::string side = "c2";
  std::string nmi_variant = "arithmetic";
  std::string out_path;
};

void run_eval(const EvalArgs& a, RunContext& ctx) {
  ctx.begin();
  const LabelVector truth = load_labels_file(a.truth_path);
  const std::string label_key = a.side == "c1" ? "labels_c1" : "labels";
  const LabelVector pred = labels_from_result_text(read_text_file(a.pred_path), label_key);

  double value = 0.0;
  if (a.metric == "nmi") {
    const NmiVariant variant =
        a.nmi_variant == "sqrt" ? NmiVariant::sqrt_norm : NmiVariant::arithmetic;
    value = nmi(truth, pred, variant);
  } else if (a.metric == "acc") {
    value = 1.0 - misclassification_rate(truth, pred);
  } else if (a.metric == "exact") {
    value = exact_recovery(truth, pred) ? 1.0 : 0.0;
  } else {
    throw UsageError("--metric must be one of: nmi, acc, exact");
  }

  std::ostringstream os;
  os.precision(17);
  os << value << "\n";
  std::cout << os.str();
  if (!a.out_path.empty()) {
    json doc{{"metric", a.metric}, {"value", value}};
    write_text_file(a.out_path, doc.dump(2) + "\n");
    json config{{"truth", a.truth_path},
                {"pred", a.pred_path},
                {"metric", a.metric},
                {"side", a.side},
                {"out", a.out_path}};
    write_manifest(a.out_path + ".manifest.json", "eval", config,
                   {a.truth_path, a.pred_path}, ctx);
  }
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::string setting;
  std::vector<std::string> grid_overrides;
  int replicates = -1;  // -1 keeps the setting default
  std::string out_path;
  std::string summary_path;
};

void run_bench(const BenchArgs& a, RunContext& ctx) {
  ctx.begin();
  SweepSpec spec = default_sweep(parse_setting(a.setting));
  spec.base_seed = ctx.seed;
  if (a.replicates >= 1) spec.replicates = a.replicates;
  else if (a.replicates != -1) throw UsageError("--replicates must be at least 1");

  for (const std::string& override_text : a.grid_overrides) {
    const std::size_t eq = override_text.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--grid expects axis=v1,v2,...; got '" + override_text + "'");
    }
    const std::string axis = override_text.substr(0, eq);
    bool found = false;
    for (auto& grid_axis : spec.grid) {
      if (grid_axis.first == axis) {
        grid_axis.second = parse_double_list(override_text.substr(eq + 1), "--grid " + axis);
        found = true;
        break;
      }
    }
    if (!found) {
      throw UsageError("setting '" + a.setting + "' has no grid axis '" + axis + "'");
    }
  }

  const SweepTable table = run_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(table, csv);
  write_text_file(a.out_path, csv.str());
  if (!a.summary_path.empty()) {
    std::ostringstream sum;
    write_summary_csv(summarize(table), sum);
    write_text_file(a.summary_path, sum.str());
  }

  json grid = json::object();
  for (const auto& axis : spec.grid) grid[axis.first] = axis.second;
  json config{{"setting", a.setting},
              {"grid", grid},
              {"replicates", spec.replicates},
              {"base_seed", spec.base_seed},
              {"out", a.out_path}};
  if (!a.summary_path.empty()) config["summary"] = a.summary_path;
  write_manifest(a.out_path + ".manifest.json", "bench " + a.setting, config, {}, ctx);
}

// ---------------------------------------------------------------- wiring

void add_seed_thread_options(CLI::App* sub, RunContext& ctx) {
  sub->add_option("--seed", ctx.seed, "Random seed (generated and recorded when omitted)");
  sub->add_option("--threads", ctx.threads, "Worker threads (1 = deterministic reference mode)")
      ->envname("BLOCKFIT_THREADS")
      ->check(CLI::PositiveNumber);
  sub->add_option("--config", ctx.config_path,
                  "Flat key=value config file (explicit flags win over file entries)");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Community detection for block models: simulate, initialize, fit, evaluate, "
               "benchmark"};
  app.set_version_flag("--version", BLOCKFIT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  RunContext ctx;

  // simulate
  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Sample a graph from a block model");
  simulate->require_subcommand(1);
  for (const char* model : {"sbm", "dcsbm", "bisbm"}) {
    CLI::App* sub = simulate->add_subcommand(model, std::string("Sample a ") + model + " graph");
    if (std::string(model) == "bisbm") {
      sub->add_option("--rows", sim.rows, "Row-side node count")->required();
      sub->add_option("--cols", sim.cols, "Column-side node count")->required();
      sub->add_option("--k1", sim.k1, "Row-side classes");
      sub->add_option("--k2", sim.k2, "Column-side classes");
      sub->add_option("--pi", sim.pi_csv, "Row-side class proportions, comma separated");
      sub->add_option("--pi2", sim.pi2_csv, "Column-side class proportions");
      sub->add_option("--out-labels-cols", sim.out_labels_cols, "Column-side truth labels file");
    } else {
      sub->add_option("--n", sim.n, "Node count")->required();
      sub->add_option("--k", sim.k, "Number of classes");
      sub->add_option("--pi", sim.pi_csv, "Class proportions, comma separated");
      sub->add_option("--beta", sim.beta, "Out-in ratio (with --lambda)");
      sub->add_option("--lambda", sim.lambda, "Expected average degree (with --beta)");
      sub->add_option("--omega", sim.omega_csv, "Relative within-class weights (with --beta)");
    }
    if (std::string(model) == "dcsbm") {
      sub->add_option("--theta-m", sim.theta_m, "Two-point degree-weight ratio m")
          ->check(CLI::PositiveNumber);
    }
    sub->add_option("--p-within", sim.p_within, "Within-class edge probability");
    sub->add_option("--p-between", sim.p_between, "Between-class edge probability");
    sub->add_option("--out-graph", sim.out_graph, "Edge-list output path")->required();
    sub->add_option("--out-labels", sim.out_labels, "Truth labels output path")->required();
    add_seed_thread_options(sub, ctx);
    sub->callback([&, model, sub] {
      sim.model = model;
      ctx.seed_given = sub->count("--seed") > 0;
      run_simulate(sim, ctx);
    });
  }

  // init scp
  InitArgs init_args;
  CLI::App* init = app.add_subcommand("init", "Compute an initial labeling");
  init->require_subcommand(1);
  CLI::App* init_scp = init->add_subcommand("scp", "Regularized spectral clustering");
  init_scp->add_option("graph", init_args.graph_path, "Edge-list file")->required();
  init_scp->add_option("--k", init_args.k, "Number of clusters")->check(CLI::PositiveNumber);
  init_scp->add_option("--reg-tau", init_args.reg_tau, "Regularization weight");
  init_scp->add_option("--out", init_args.out_path, "Labels output path")->required();
  init_scp->add_flag("--one-based", init_args.one_based, "Edge list uses 1-based node ids");
  init_scp->add_option("--rows", init_args.rows, "Bipartite row count");
  init_scp->add_option("--cols", init_args.cols, "Bipartite column count");
  init_scp->add_option("--side", init_args.side, "Bipartite side to cluster (1 rows, 2 cols)");
  add_seed_thread_options(init_scp, ctx);
  init_scp->callback([&] {
    ctx.seed_given = init_scp->count("--seed") > 0;
    run_init_scp(init_args, ctx);
  });

  // fit
  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a block model");
  fit_cmd->require_subcommand(1);
  for (const char* model : {"sbm", "dcsbm", "bisbm"}) {
    CLI::App* sub = fit_cmd->add_subcommand(model, std::string("Fit the ") + model + " model");
    sub->add_option("graph", fit_args.graph_path, "Edge-list file")->required();
    sub->add_option("--out", fit_args.out_path, "Result JSON path")->required();
    sub->add_option("--outer-tol", fit_args.outer_tol, "Outer relative-change tolerance");
    sub->add_option("--outer-max", fit_args.outer_max, "Outer iteration cap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--inner-tol", fit_args.inner_tol, "Inner relative-change tolerance");
    sub->add_option("--inner-max", fit_args.inner_max, "Inner iteration cap")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--one-based", fit_args.one_based, "Edge list uses 1-based node ids");
    if (std::string(model) == "bisbm") {
      sub->add_option("--k1", fit_args.k1, "Row-side classes")->required();
      sub->add_option("--k2", fit_args.k2, "Column-side classes")->required();
      sub->add_option("--rows", fit_args.rows, "Row-side node count")->required();
      sub->add_option("--cols", fit_args.cols, "Column-side node count")->required();
      sub->add_option("--init", fit_args.init, "'scp' (default)");
      sub->add_option("--init-c1", fit_args.init_c1, "Row-side init labels file");
      sub->add_option("--init-c2", fit_args.init_c2, "Column-side init labels file");
    } else {
      sub->add_option("--k", fit_args.k, "Number of communities")->required();
      sub->add_option("--init", fit_args.init, "'scp' or an init labels file");
      sub->add_option("--restarts", fit_args.restarts,
                      "Extra runs from perturbed inits; best objective wins")
          ->check(CLI::NonNegativeNumber);
    }
    if (std::string(model) == "dcsbm") {
      sub->add_option("--theta-sweeps", fit_args.theta_sweeps,
                      "Gauss-Seidel passes per CM step")
          ->check(CLI::PositiveNumber);
    }
    add_seed_thread_options(sub, ctx);
    sub->callback([&, model, sub] {
      ctx.seed_given = sub->count("--seed") > 0;
      const std::string m(model);
      if (m == "sbm") run_fit_sbm(fit_args, ctx);
      else if (m == "dcsbm") run_fit_dcsbm(fit_args, ctx);
      else run_fit_bisbm(fit_args, ctx);
    });
  }

  // eval
  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare predicted labels to ground truth");
  eval_cmd->add_option("--truth", eval_args.truth_path, "Ground-truth labels file")->required();
  eval_cmd->add_option("--pred", eval_args.pred_path, "Result JSON or labels file")->required();
  eval_cmd->add_option("--metric", eval_args.metric, "nmi | acc | exact");
  eval_cmd->add_option("--side", eval_args.side, "bisbm side to evaluate: c2 (default) or c1");
  eval_cmd->add_option("--nmi-variant", eval_args.nmi_variant, "arithmetic (default) or sqrt");
  eval_cmd->add_option("--out", eval_args.out_path, "Optional metric JSON output");
  add_seed_thread_options(eval_cmd, ctx);
  eval_cmd->callback([&] {
    ctx.seed_given = eval_cmd->count("--seed") > 0;
    run_eval(eval_args, ctx);
  });

  // bench
  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a simulation sweep");
  bench_cmd->add_option("setting", bench_args.setting,
                        "s1_convergence | s2_small_dense | s3_sparse | dcsbm | bisbm | "
                        "consistency")
      ->required();
  bench_cmd->add_option("--grid", bench_args.grid_overrides,
                        "Axis override, axis=v1,v2,... (repeatable)");
  bench_cmd->add_option("--replicates", bench_args.replicates, "Replicates per grid point");
  bench_cmd->add_option("--out", bench_args.out_path, "Sweep CSV output path")->required();
  bench_cmd->add_option("--summary", bench_args.summary_path, "Aggregated CSV output path");
  add_seed_thread_options(bench_cmd, ctx);
  bench_cmd->callback([&] {
    ctx.seed_given = bench_cmd->count("--seed") > 0;
    run_bench(bench_args, ctx);
  });

  try {
    const std::vector<std::string> expanded = apply_config_file(args);
    std::vector<const char*> argv;
    argv.reserve(expanded.size() + 1);
    argv.push_back("blockfit");
    for (const std::string& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E_USAGE: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "E_USAGE: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "E_DATA: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "E_NUM: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "E_NUM: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace blockfit::cli
