#include "blockfit/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockfit {

bool SparseGraph::has_edge(Index i, Index j) const {
  return std::binary_search(row_begin(i), row_end(i), j);
}

void SparseGraph::validate() const {
  if (static_cast<Index>(row_offsets.size()) != n_rows + 1)
    throw DataError("graph: row_offsets length mismatch");
  if (row_offsets.front() != 0 || row_offsets.back() != static_cast<Index>(col_indices.size()))
    throw DataError("graph: row_offsets endpoints mismatch");
  if (edge_count != static_cast<Index>(col_indices.size()))
    throw DataError("graph: edge_count mismatch");
  for (Index i = 0; i < n_rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) throw DataError("graph: offsets not monotone");
    for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      const Index j = col_indices[p];
      if (j < 0 || j >= n_cols) throw DataError("graph: column index out of range");
      if (p > row_offsets[i] && col_indices[p - 1] >= j)
        throw DataError("graph: columns not strictly increasing in a row");
      if (!bipartite) {
        if (j == i) throw DataError("graph: diagonal entry present");
        if (!has_edge(j, i)) throw DataError("graph: adjacency not symmetric");
      }
    }
  }
}

SparseGraph graph_from_edges(Index n_rows, Index n_cols, bool bipartite,
                             std::vector<std::pair<Index, Index>> edges) {
  if (n_rows < 0 || n_cols < 0) throw DataError("graph: negative dimension");
  if (!bipartite && n_rows != n_cols)
    throw DataError("graph: square graph requires n_rows == n_cols");
  for (auto [i, j] : edges) {
    if (i < 0 || i >= n_rows || j < 0 || j >= n_cols)
      throw DataError("graph: edge endpoint out of range");
  }
  if (!bipartite) {
    std::vector<std::pair<Index, Index>> sym;
    sym.reserve(edges.size() * 2);
    for (auto [i, j] : edges) {
      if (i == j) continue;  // self-loops dropped
      sym.emplace_back(i, j);
      sym.emplace_back(j, i);
    }
    edges.swap(sym);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SparseGraph g;
  g.n_rows = n_rows;
  g.n_cols = n_cols;
  g.bipartite = bipartite;
  g.edge_count = static_cast<Index>(edges.size());
  g.row_offsets.assign(n_rows + 1, 0);
  for (auto& e : edges) g.row_offsets[e.first + 1]++;
  for (Index i = 0; i < n_rows; ++i) g.row_offsets[i + 1] += g.row_offsets[i];
  g.col_indices.resize(edges.size());
  for (size_t p = 0; p < edges.size(); ++p) g.col_indices[p] = edges[p].second;
  return g;
}

namespace {

Index parse_index(const char* first, const char* last, int line_no) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DataError("edge list: malformed token at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

SparseGraph load_edge_list(std::istream& in, const LoadOptions& opts) {
  std::vector<std::pair<Index, Index>> edges;
  Index max_idx = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    std::string ta, tb, extra;
    if (!(ls >> ta >> tb) || (ls >> extra)) {
      throw DataError("edge list: expected two integer tokens at line " +
                      std::to_string(line_no));
    }
    Index a = parse_index(ta.data(), ta.data() + ta.size(), line_no);
    Index b = parse_index(tb.data(), tb.data() + tb.size(), line_no);
    if (opts.one_based) {
      if (a < 1 || b < 1)
        throw DataError("edge list: index below 1 with one_based at line " +
                        std::to_string(line_no));
      --a;
      --b;
    }
    if (a < 0 || b < 0)
      throw DataError("edge list: negative index at line " + std::to_string(line_no));
    if (opts.bipartite_dims) {
      if (a >= opts.bipartite_dims->first || b >= opts.bipartite_dims->second)
        throw DataError("edge list: index out of declared bounds at line " +
                        std::to_string(line_no));
    }
    max_idx = std::max({max_idx, a, b});
    edges.emplace_back(a, b);
  }
  if (opts.bipartite_dims) {
    return graph_from_edges(opts.bipartite_dims->first, opts.bipartite_dims->second,
                            /*bipartite=*/true, std::move(edges));
  }
  const Index n = max_idx + 1;
  return graph_from_edges(n, n, /*bipartite=*/false, std::move(edges));
}

SparseGraph load_edge_list_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list file: " + path);
  return load_edge_list(in, opts);
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
  for (Index i = 0; i < g.n_rows; ++i) {
    for (const Index* p = g.row_begin(i); p != g.row_end(i); ++p) {
      if (!g.bipartite && *p < i) continue;  // each undirected edge once
      out << i << ' ' << *p << '\n';
    }
  }
}

void write_edge_list_file(const SparseGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  write_edge_list(g, out);
}

std::vector<Index> degrees(const SparseGraph& g) {
  std::vector<Index> d(g.n_rows);
  for (Index i = 0; i < g.n_rows; ++i) d[i] = g.degree(i);
  return d;
}

ComponentResult largest_connected_component(const SparseGraph& g) {
  if (g.bipartite) throw DataError("largest_connected_component: square graphs only");
  if (g.n_rows == 0) throw DataError("largest_connected_component: empty graph");
  std::vector<Index> comp(g.n_rows, -1);
  Index best_root = -1, best_size = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < g.n_rows; ++s) {
    if (comp[s] >= 0) continue;
    Index size = 0;
    stack.push_back(s);
    comp[s] = s;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      ++size;
      for (const Index* p = g.row_begin(v); p != g.row_end(v); ++p) {
        if (comp[*p] < 0) {
          comp[*p] = s;
          stack.push_back(*p);
        }
      }
    }
    // strict '>' keeps the earliest (smallest-min-index) component on ties
    if (size > best_size) {
      best_size = size;
      best_root = s;
    }
  }

  ComponentResult res;
  res.old_to_new.assign(g.n_rows, -1);
  res.new_to_old.reserve(best_size);
  for (Index v = 0; v < g.n_rows; ++v) {
    if (comp[v] == best_root) {
      res.old_to_new[v] = static_cast<Index>(res.new_to_old.size());
      res.new_to_old.push_back(v);
    }
  }
  SparseGraph& sub = res.graph;
  sub.n_rows = sub.n_cols = best_size;
  sub.bipartite = false;
  sub.row_offsets.assign(best_size + 1, 0);
  for (Index v : res.new_to_old) {
    sub.row_offsets[res.old_to_new[v] + 1] = g.degree(v);
  }
  for (Index i = 0; i < best_size; ++i) sub.row_offsets[i + 1] += sub.row_offsets[i];
  sub.col_indices.resize(sub.row_offsets[best_size]);
  for (Index v : res.new_to_old) {
    Index w = sub.row_offsets[res.old_to_new[v]];
    for (const Index* p = g.row_begin(v); p != g.row_end(v); ++p) {
      sub.col_indices[w++] = res.old_to_new[*p];  // neighbors stay sorted
    }
  }
  sub.edge_count = static_cast<Index>(sub.col_indices.size());
  return res;
}

SparseGraph transpose(const SparseGraph& g) {
  SparseGraph t;
  t.n_rows = g.n_cols;
  t.n_cols = g.n_rows;
  t.bipartite = g.bipartite;
  t.edge_count = g.edge_count;
  t.row_offsets.assign(t.n_rows + 1, 0);
  for (Index j : g.col_indices) t.row_offsets[j + 1]++;
  for (Index i = 0; i < t.n_rows; ++i) t.row_offsets[i + 1] += t.row_offsets[i];
  t.col_indices.resize(g.col_indices.size());
  std::vector<Index> fill(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (Index i = 0; i < g.n_rows; ++i) {
    for (const Index* p = g.row_begin(i); p != g.row_end(i); ++p) {
      t.col_indices[fill[*p]++] = i;  // ascending i keeps rows sorted
    }
  }
  return t;
}

}  // namespace blockfit
