#pragma once

#include "bnsl/dataset.hpp"
#include "bnsl/network.hpp"

namespace bnsl {

struct OracleResult {
  double score = 0.0;
  Network network;
};

/// In-memory dynamic programming over all 2^n subsets: adds optimal leaves
/// to optimal subnetworks. Parent sets are limited to max_parents(N) and
/// scored by mdl_score_direct. Refuses n > max_variables.
OracleResult dp_optimal(const Dataset& data, int max_variables = 15);

/// Scores every labeled DAG with unrestricted parent sets. n <= 4 only.
OracleResult exhaustive_optimal(const Dataset& data);

}  // namespace bnsl
