#pragma once

#include <cstdint>
#include <functional>

#include "blockfit/types.hpp"

namespace blockfit {

// Worker-pool width used by parallel_for. 1 (the default) runs everything
// inline on the calling thread.
void set_thread_count(int n);
int thread_count();

// Runs fn(begin, end, chunk_index) over [0, n) split into fixed-size chunks.
// The chunk grid depends only on n (never on the thread count), and any
// reduction that merges per-chunk partials in chunk order is therefore
// bit-identical for every --threads setting.
void parallel_for(Index n, const std::function<void(Index, Index, Index)>& fn);

// Number of chunks parallel_for will use for a range of length n; callers
// size their partial-accumulator arrays with this.
Index parallel_chunk_count(Index n);

// Runs fn(i) for i in [0, n), one task per index, across the worker pool.
// Used for coarse independent jobs (benchmark replicates); each task must
// write only to its own output slot.
void parallel_for_tasks(Index n, const std::function<void(Index)>& fn);

}  // namespace blockfit
