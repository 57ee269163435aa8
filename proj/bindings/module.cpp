#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "blockfit/bench.hpp"
#include "blockfit/bisbm.hpp"
#include "blockfit/dcsbm.hpp"
#include "blockfit/generators.hpp"
#include "blockfit/graph.hpp"
#include "blockfit/metrics.hpp"
#include "blockfit/parallel.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/scp.hpp"
#include "blockfit/types.hpp"

#ifndef BLOCKFIT_VERSION
#define BLOCKFIT_VERSION "dev"
#endif

namespace py = pybind11;
using namespace blockfit;

namespace {

std::vector<std::vector<double>> matrix_to_lists(const Matrix& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    out[static_cast<std::size_t>(i)].assign(m.row(i), m.row(i) + m.cols());
  }
  return out;
}

Matrix lists_to_matrix(const std::vector<std::vector<double>>& rows, const char* what) {
  if (rows.empty()) throw DataError(std::string(what) + ": matrix must not be empty");
  const std::size_t cols = rows.front().size();
  if (cols == 0) throw DataError(std::string(what) + ": matrix must not be empty");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DataError(std::string(what) + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

BlockParams make_block_params(const std::vector<double>& pi,
                              const std::vector<std::vector<double>>& p) {
  BlockParams params;
  params.pi = pi;
  params.P = lists_to_matrix(p, "P");
  return params;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Community detection for stochastic block models";
  m.attr("__version__") = BLOCKFIT_VERSION;

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("set_thread_count", &set_thread_count, py::arg("n"),
        "Worker threads used by the fitters (1 = fully deterministic reference mode)");
  m.def("thread_count", &thread_count);

  py::class_<SparseGraph>(m, "SparseGraph")
      .def_readonly("n_rows", &SparseGraph::n_rows)
      .def_readonly("n_cols", &SparseGraph::n_cols)
      .def_readonly("bipartite", &SparseGraph::bipartite)
      .def_readonly("edge_count", &SparseGraph::edge_count)
      .def("degree", &SparseGraph::degree, py::arg("i"))
      .def("has_edge", &SparseGraph::has_edge, py::arg("i"), py::arg("j"))
      .def("validate", &SparseGraph::validate)
      .def("__repr__", [](const SparseGraph& g) {
        return "<SparseGraph " + std::to_string(g.n_rows) + "x" + std::to_string(g.n_cols) +
               (g.bipartite ? " bipartite, " : ", ") + std::to_string(g.edge_count) +
               " stored entries>";
      });

  m.def(
      "graph_from_edges",
      [](Index n_rows, Index n_cols, bool bipartite,
         std::vector<std::pair<Index, Index>> edges) {
        return graph_from_edges(n_rows, n_cols, bipartite, std::move(edges));
      },
      py::arg("n_rows"), py::arg("n_cols"), py::arg("bipartite"), py::arg("edges"));
  m.def(
      "load_edge_list",
      [](const std::string& path, bool one_based,
         std::optional<std::pair<Index, Index>> bipartite_dims) {
        LoadOptions opts;
        opts.one_based = one_based;
        opts.bipartite_dims = bipartite_dims;
        return load_edge_list_file(path, opts);
      },
      py::arg("path"), py::arg("one_based") = false, py::arg("bipartite_dims") = std::nullopt);
  m.def("write_edge_list", &write_edge_list_file, py::arg("graph"), py::arg("path"));
  m.def("degrees", &degrees, py::arg("graph"));
  m.def(
      "largest_connected_component",
      [](const SparseGraph& g) {
        ComponentResult r = largest_connected_component(g);
        return py::make_tuple(r.graph, r.old_to_new, r.new_to_old);
      },
      py::arg("graph"), "Returns (subgraph, old_to_new, new_to_old)");
  m.def("transpose", &transpose, py::arg("graph"));

  // Generators.
  m.def(
      "build_edge_prob_matrix",
      [](int k, double beta, const std::vector<double>& omega, double lambda,
         const std::vector<double>& pi, Index n) {
        return matrix_to_lists(build_edge_prob_matrix(k, beta, omega, lambda, pi, n));
      },
      py::arg("k"), py::arg("beta"), py::arg("omega"), py::arg("lambda_"), py::arg("pi"),
      py::arg("n"));
  m.def(
      "sample_sbm",
      [](Index n, const std::vector<double>& pi, const std::vector<std::vector<double>>& p,
         std::uint64_t seed) {
        SbmSpec spec;
        spec.n = n;
        spec.pi = pi;
        spec.P = lists_to_matrix(p, "P");
        SbmSample s = sample_sbm(spec, seed);
        return py::make_tuple(s.graph, s.labels);
      },
      py::arg("n"), py::arg("pi"), py::arg("P"), py::arg("seed"));
  m.def(
      "sample_dcsbm",
      [](Index n, const std::vector<double>& pi, const std::vector<std::vector<double>>& p,
         const std::vector<double>& theta, std::uint64_t seed) {
        DcsbmSpec spec;
        spec.n = n;
        spec.pi = pi;
        spec.P = lists_to_matrix(p, "P");
        spec.theta = theta;
        SbmSample s = sample_dcsbm(spec, seed);
        return py::make_tuple(s.graph, s.labels);
      },
      py::arg("n"), py::arg("pi"), py::arg("P"), py::arg("theta"), py::arg("seed"));
  m.def("sample_theta_two_point", &sample_theta_two_point, py::arg("n"), py::arg("m"),
        py::arg("seed"));
  m.def(
      "sample_bisbm",
      [](Index m_rows, Index n_cols, const std::vector<double>& pi1,
         const std::vector<double>& pi2, const std::vector<std::vector<double>>& p,
         std::uint64_t seed) {
        BisbmSpec spec;
        spec.m = m_rows;
        spec.n = n_cols;
        spec.pi1 = pi1;
        spec.pi2 = pi2;
        spec.P = lists_to_matrix(p, "P");
        BisbmSample s = sample_bisbm(spec, seed);
        return py::make_tuple(s.graph, s.labels_rows, s.labels_cols);
      },
      py::arg("m"), py::arg("n"), py::arg("pi1"), py::arg("pi2"), py::arg("P"), py::arg("seed"));
  m.def("perturb_labels",
        py::overload_cast<const LabelVector&, double, std::uint64_t>(&perturb_labels),
        py::arg("truth"), py::arg("gamma"), py::arg("seed"));
  m.def("perturb_labels_to_nmi", &perturb_labels_to_nmi, py::arg("truth"), py::arg("target_nmi"),
        py::arg("seed"));

  // Spectral initialization.
  py::class_<ScpConfig>(m, "ScpConfig")
      .def(py::init<>())
      .def_readwrite("k", &ScpConfig::k)
      .def_readwrite("reg_tau", &ScpConfig::reg_tau)
      .def_readwrite("eig_tol", &ScpConfig::eig_tol)
      .def_readwrite("eig_max_iter", &ScpConfig::eig_max_iter)
      .def_readwrite("kmeans_restarts", &ScpConfig::kmeans_restarts)
      .def_readwrite("kmeans_max_iter", &ScpConfig::kmeans_max_iter)
      .def_readwrite("seed", &ScpConfig::seed);
  m.def(
      "scp",
      [](const SparseGraph& g, int k, std::uint64_t seed, std::optional<ScpConfig> config) {
        ScpConfig cfg = config.value_or(ScpConfig{});
        if (!config.has_value()) {
          cfg.k = k;
          cfg.seed = seed;
        }
        return scp(g, cfg);
      },
      py::arg("graph"), py::arg("k") = 2, py::arg("seed") = 0, py::arg("config") = std::nullopt);
  m.def(
      "scp_on_product",
      [](const SparseGraph& g, bool rows_side, int k, std::uint64_t seed,
         std::optional<ScpConfig> config) {
        ScpConfig cfg = config.value_or(ScpConfig{});
        if (!config.has_value()) {
          cfg.k = k;
          cfg.seed = seed;
        }
        return scp_on_product(g, rows_side, cfg);
      },
      py::arg("graph"), py::arg("rows_side"), py::arg("k") = 2, py::arg("seed") = 0,
      py::arg("config") = std::nullopt);

  // Fitters.
  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("inner_tol", &FitConfig::inner_tol)
      .def_readwrite("inner_max_iter", &FitConfig::inner_max_iter)
      .def_readwrite("outer_tol", &FitConfig::outer_tol)
      .def_readwrite("outer_max_iter", &FitConfig::outer_max_iter)
      .def_readwrite("eps_p", &FitConfig::eps_p)
      .def_readwrite("revive_empty", &FitConfig::revive_empty)
      .def_readwrite("seed", &FitConfig::seed);
  py::class_<DcFitConfig, FitConfig>(m, "DcFitConfig")
      .def(py::init<>())
      .def_readwrite("eps_lambda", &DcFitConfig::eps_lambda)
      .def_readwrite("eps_theta", &DcFitConfig::eps_theta)
      .def_readwrite("theta_sweeps", &DcFitConfig::theta_sweeps);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("labels", &FitResult::labels)
      .def_property_readonly("pi", [](const FitResult& r) { return r.params.pi; })
      .def_property_readonly("P", [](const FitResult& r) { return matrix_to_lists(r.params.P); })
      .def_readonly("objective_trace", &FitResult::objective_trace)
      .def_readonly("inner_iteration_counts", &FitResult::inner_iteration_counts)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("runtime_ms", &FitResult::runtime_ms);
  py::class_<DcFitResult>(m, "DcFitResult")
      .def_readonly("labels", &DcFitResult::labels)
      .def_property_readonly("pi", [](const DcFitResult& r) { return r.params.pi; })
      .def_property_readonly("Lambda",
                             [](const DcFitResult& r) { return matrix_to_lists(r.params.Lambda); })
      .def_property_readonly("theta", [](const DcFitResult& r) { return r.params.theta; })
      .def_readonly("objective_trace", &DcFitResult::objective_trace)
      .def_readonly("inner_iteration_counts", &DcFitResult::inner_iteration_counts)
      .def_readonly("converged", &DcFitResult::converged)
      .def_readonly("runtime_ms", &DcFitResult::runtime_ms);
  py::class_<BisbmFitResult>(m, "BisbmFitResult")
      .def_readonly("c2", &BisbmFitResult::c2)
      .def_readonly("c1", &BisbmFitResult::c1);

  m.def("fit", &fit, py::arg("graph"), py::arg("k"), py::arg("init_labels"),
        py::arg("config") = FitConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("fit_dcsbm", &fit_dcsbm, py::arg("graph"), py::arg("k"), py::arg("init_labels"),
        py::arg("config") = DcFitConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("fit_bisbm", &fit_bisbm, py::arg("graph"), py::arg("k1"), py::arg("k2"),
        py::arg("init_c1"), py::arg("init_c2"), py::arg("config") = FitConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "refine_once",
      [](const SparseGraph& g, const LabelVector& e0,
         std::optional<std::pair<std::vector<double>, std::vector<std::vector<double>>>> hint) {
        std::optional<BlockParams> params;
        if (hint.has_value()) params = make_block_params(hint->first, hint->second);
        return refine_once(g, e0, params);
      },
      py::arg("graph"), py::arg("e0"), py::arg("params_hint") = std::nullopt,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "log_pseudo_likelihood",
      [](const SparseGraph& g, const std::vector<double>& pi,
         const std::vector<std::vector<double>>& p, const LabelVector& e) {
        return log_pseudo_likelihood(g, make_block_params(pi, p), e);
      },
      py::arg("graph"), py::arg("pi"), py::arg("P"), py::arg("e"));
  m.def(
      "e_step",
      [](const SparseGraph& g, const std::vector<double>& pi,
         const std::vector<std::vector<double>>& p, const LabelVector& e) {
        return matrix_to_lists(e_step(g, make_block_params(pi, p), e).tau);
      },
      py::arg("graph"), py::arg("pi"), py::arg("P"), py::arg("e"));

  // Metrics.
  m.def(
      "nmi",
      [](const LabelVector& a, const LabelVector& b, const std::string& variant) {
        return nmi(a, b, variant == "sqrt" ? NmiVariant::sqrt_norm : NmiVariant::arithmetic);
      },
      py::arg("a"), py::arg("b"), py::arg("variant") = "arithmetic");
  m.def("misclassification_rate", &misclassification_rate, py::arg("a"), py::arg("b"));
  m.def("exact_recovery", &exact_recovery, py::arg("a"), py::arg("b"));
}
