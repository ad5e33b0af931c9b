#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace vdp {

/// Block size for cross-trajectory reductions. Partial sums are formed per
/// block and combined in block order, so the floating-point result does not
/// depend on the number of workers.
inline constexpr std::size_t kReductionBlock = 2048;

/// Runs `fn(i)` for every i in [0, n) on up to `workers` threads.
/// `fn` must only touch state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  const auto count = static_cast<long long>(n);
#if defined(_OPENMP)
  if (workers > 1 && n > 1) {
#pragma omp parallel for num_threads(static_cast<int>(workers)) schedule(static)
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

/// Deterministic blocked reduction: `block_fn(begin, end)` returns a partial
/// accumulator for [begin, end); partials are combined left to right with `+=`.
template <typename Acc, typename BlockFn>
Acc ordered_reduce(std::size_t n, unsigned workers, Acc zero, BlockFn&& block_fn) {
  const std::size_t n_blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Acc> partial(n_blocks, zero);
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    partial[b] = block_fn(begin, std::min(n, begin + kReductionBlock));
  });
  Acc total = zero;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace vdp
