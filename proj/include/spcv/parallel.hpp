#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace spcv {

/// Number of worker threads used by internal data-parallel loops. 1 disables
/// threading entirely. Results never depend on this value: work is split into
/// fixed-size blocks and reductions combine block results in index order.
void set_worker_threads(int n);
int worker_threads();

/// Runs fn(begin, end) over [0, n) split into blocks of at most block_size
/// items. Blocks may execute concurrently; the partition itself is fixed, so
/// per-block outputs are identical regardless of thread count.
void parallel_blocks(int n, int block_size, const std::function<void(int, int)>& fn);

/// Deterministic parallel sum: fn(begin, end) returns a block's partial sum;
/// partials are added in block order.
double parallel_sum_blocks(int n, int block_size, const std::function<double(int, int)>& fn);

}  // namespace spcv
