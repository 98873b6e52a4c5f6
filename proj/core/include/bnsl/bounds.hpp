#pragma once

#include <cstdint>

#include "bnsl/dataset.hpp"
#include "bnsl/network.hpp"
#include "bnsl/scorer.hpp"

namespace bnsl {

struct GreedyOptions {
  int beam = 5;
  int max_iters = 1000;
  std::uint64_t seed = 0;
};

struct GreedyTrace {
  int iterations = 0;
  /// Best score after each accepted iteration, starting with the empty graph.
  std::vector<double> accepted;
};

/// Beam local search over DAGs with single-edge add, delete and reverse
/// moves, parent sets limited to cache.max_parents(). The result is a
/// realizable network, so its score is an upper bound on the optimum.
Network greedy_upper_bound(const ScoreCache& cache, const Dataset& data,
                           const GreedyOptions& options = {}, GreedyTrace* trace = nullptr);

}  // namespace bnsl
