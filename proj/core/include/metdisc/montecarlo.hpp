#pragma once

#include "metdisc/parallel.hpp"
#include "metdisc/rng.hpp"
#include "metdisc/stats.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace metdisc {

inline constexpr std::size_t kMonteCarloBlock = 4096;

// Mean of sample(rng) over n i.i.d. draws. Draws are grouped in fixed blocks,
// each with its own substream, and block statistics are merged in order, so
// the estimate depends only on (seed, stream, n).
template <class Sample>
MeanEstimate mc_mean(std::size_t n, std::uint64_t seed, std::uint64_t stream, const Sample& sample) {
  const std::size_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<RunningStats> stats(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(seed, stream, b);
    const std::size_t count = std::min(kMonteCarloBlock, n - b * kMonteCarloBlock);
    for (std::size_t i = 0; i < count; ++i) stats[b].add(sample(rng));
  });
  RunningStats all;
  for (const auto& s : stats) all.merge(s);
  return MeanEstimate{all.mean(), all.std_error(), all.count(), Method::monte_carlo};
}

}  // namespace metdisc
