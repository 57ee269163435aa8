#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockfit/types.hpp"

namespace blockfit {

// Compressed-sparse-row adjacency. Square graphs are undirected and store
// both (i,j) and (j,i) so row iteration is O(d_i); bipartite graphs store the
// m-by-n bi-adjacency rows. Immutable after construction; safe to share
// across threads.
struct SparseGraph {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Index> row_offsets;  // length n_rows + 1
  std::vector<Index> col_indices;  // sorted strictly increasing within a row
  bool bipartite = false;
  Index edge_count = 0;  // number of stored entries

  Index degree(Index i) const { return row_offsets[i + 1] - row_offsets[i]; }
  const Index* row_begin(Index i) const { return col_indices.data() + row_offsets[i]; }
  const Index* row_end(Index i) const { return col_indices.data() + row_offsets[i + 1]; }
  bool has_edge(Index i, Index j) const;

  // Structural invariants: offsets monotone, columns sorted/strict/in-range,
  // and (for square graphs) symmetry with an empty diagonal. Throws DataError.
  void validate() const;

  bool operator==(const SparseGraph& o) const = default;
};

struct LoadOptions {
  bool one_based = false;
  std::optional<std::pair<Index, Index>> bipartite_dims;
};

// Builds a graph from (i,j) pairs: square inputs are symmetrized, duplicate
// pairs collapse, self-loops are dropped; bipartite inputs keep rows as-is.
SparseGraph graph_from_edges(Index n_rows, Index n_cols, bool bipartite,
                             std::vector<std::pair<Index, Index>> edges);

// Edge-list text: two integer tokens per non-comment line ('#' starts a
// comment). Square node count is max index + 1 unless bipartite dims given.
SparseGraph load_edge_list(std::istream& in, const LoadOptions& opts = {});
SparseGraph load_edge_list_file(const std::string& path, const LoadOptions& opts = {});

// Canonical form: each undirected edge once as "i j" with i < j (bipartite:
// every stored row entry), ascending. load(write(g)) == g.
void write_edge_list(const SparseGraph& g, std::ostream& out);
void write_edge_list_file(const SparseGraph& g, const std::string& path);

std::vector<Index> degrees(const SparseGraph& g);

struct ComponentResult {
  SparseGraph graph;
  std::vector<Index> old_to_new;  // -1 for nodes outside the component
  std::vector<Index> new_to_old;
};

// Induced subgraph on the largest connected component; size ties go to the
// component containing the smallest node index. Square graphs only.
ComponentResult largest_connected_component(const SparseGraph& g);

// Bipartite m-by-n rows become n-by-m rows (the transposed bi-adjacency).
SparseGraph transpose(const SparseGraph& g);

}  // namespace blockfit
