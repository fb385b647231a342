#pragma once

#include <cstddef>
#include <functional>

namespace spinchain {

/// Worker count: SPINCHAIN_THREADS if set and positive, otherwise the
/// hardware concurrency.
[[nodiscard]] int thread_count();

/// Splits [0, n) into contiguous blocks and runs body(begin, end) on a
/// worker per block. Nested calls from inside a worker run inline on the
/// calling thread. Blocks never overlap, so bodies that write only to
/// their own index range are race-free.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body);

/// Same as parallel_for but with an explicit block count; block b covers
/// [b*n/blocks, (b+1)*n/blocks). Useful when the caller keeps per-block
/// partial results and reduces them in block order.
void parallel_blocks(std::size_t n, std::size_t blocks,
                     const std::function<void(std::size_t block, std::size_t begin, std::size_t end)> &body);

} // namespace spinchain
