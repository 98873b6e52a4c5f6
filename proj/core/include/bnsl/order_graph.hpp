#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bnsl/bounds.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/network.hpp"
#include "bnsl/parent_graph.hpp"
#include "bnsl/scorer.hpp"
#include "bnsl/storage.hpp"
#include "bnsl/varset.hpp"

namespace bnsl {

/// One order-graph node on disk: the subset and f = g + h.
struct OrderEntry {
  VarSet set;
  double f = 0.0;
};

/// The part of an order node kept for reconstruction.
struct ReconRecord {
  VarSet set;
  int leaf = 0;
  VarSet leaf_parents;
};

/// A generated order node while its layer is being deduplicated.
struct OrderNode {
  VarSet set;
  double f = 0.0;
  int leaf = 0;
  VarSet leaf_parents;
};

/// Lowest f wins; equal f falls back to the lower leaf index, which fixes
/// the predecessor and hence the parent set.
struct OrderReduce {
  OrderNode operator()(const OrderNode& a, const OrderNode& b) const {
    if (a.f != b.f) return a.f < b.f ? a : b;
    return a.leaf <= b.leaf ? a : b;
  }
};

/// h(U): the sum of lb[X] over X outside U.
double heuristic(VarSet u, const LowerBoundTable& lb);

struct LayerStats {
  int layer = 0;
  std::uint64_t generated = 0;
  std::uint64_t pruned = 0;
  std::uint64_t surviving = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t disk_bytes = 0;
  std::size_t runs_spilled = 0;
};

struct SearchStats {
  std::vector<LayerStats> layers;
  double upper = 0.0;
  double seconds = 0.0;
  double scoring_seconds = 0.0;
  std::uint64_t parent_entries = 0;
  std::uint64_t scores_deferred = 0;
  std::uint64_t peak_disk_bytes = 0;
};

/// Stats CSV: layer,generated,pruned,surviving,disk_bytes
void write_stats_csv(std::ostream& out, const SearchStats& stats);

struct OrderExpansion {
  PresenceMap present;  // layer l + 1
  LayerStats stats;
};

/// Expands order layer l into layer l+1 by a streaming join with each
/// variable's parent-graph layer l. Writes order/layer{l+1}.bin and
/// recon/layer{l+1}.bin, deletes order/layer{l}.bin. When
/// `strict_queues` is set every parent queue must hold exactly the order
/// layer's subsets; otherwise queues may hold extra subsets, which are
/// skipped. Throws CorruptionError on desynchronized queues and
/// std::logic_error if an edge cost falls below lb (inconsistent h).
OrderExpansion expand_order_layer(int l, int n, const LowerBoundTable& lb, double upper,
                                  const storage::WorkDir& work, std::size_t max_size,
                                  bool strict_queues, std::size_t fan_in = 64);

/// Rebuilds the network by walking back from the goal through the recon files.
Network reconstruct(const storage::WorkDir& work, int n);

struct LearnOptions {
  /// Empty: a fresh directory under the system temp dir, removed afterwards.
  std::filesystem::path workdir;
  bool keep_workdir = false;
  std::size_t max_ram_nodes = std::size_t{1} << 20;
  /// Overrides the greedy bound; +infinity disables pruning.
  std::optional<double> upper;
  /// When false, parent graphs ignore order-graph pruning.
  bool parent_pruning = true;
  GreedyOptions greedy;
  ScoringOptions scoring;
  std::size_t fan_in = 64;
  /// Called after order layer l and the parent graphs built from it are done.
  std::function<void(int layer, const storage::WorkDir&)> on_layer_done;
};

struct LearnResult {
  Network network;
  double score = 0.0;
  SearchStats stats;
};

/// Score, bound, search layer by layer, then reconstruct.
LearnResult learn(const Dataset& data, const LearnOptions& options = {});

}  // namespace bnsl

template <>
struct bnsl::storage::RecordCodec<bnsl::OrderEntry> {
  static constexpr std::size_t kWidth = 16;
  static void encode(const OrderEntry& e, std::byte* p) {
    put_u64(p, e.set.bits());
    put_f64(p + 8, e.f);
  }
  static OrderEntry decode(const std::byte* p) { return {VarSet{get_u64(p)}, get_f64(p + 8)}; }
  static std::uint64_t key(const OrderEntry& e) { return e.set.bits(); }
};

template <>
struct bnsl::storage::RecordCodec<bnsl::ReconRecord> {
  static constexpr std::size_t kWidth = 17;
  static void encode(const ReconRecord& r, std::byte* p) {
    put_u64(p, r.set.bits());
    p[8] = static_cast<std::byte>(r.leaf);
    put_u64(p + 9, r.leaf_parents.bits());
  }
  static ReconRecord decode(const std::byte* p) {
    return {VarSet{get_u64(p)}, std::to_integer<int>(p[8]), VarSet{get_u64(p + 9)}};
  }
  static std::uint64_t key(const ReconRecord& r) { return r.set.bits(); }
};

template <>
struct bnsl::storage::RecordCodec<bnsl::OrderNode> {
  static constexpr std::size_t kWidth = 25;
  static void encode(const OrderNode& r, std::byte* p) {
    put_u64(p, r.set.bits());
    put_f64(p + 8, r.f);
    p[16] = static_cast<std::byte>(r.leaf);
    put_u64(p + 17, r.leaf_parents.bits());
  }
  static OrderNode decode(const std::byte* p) {
    return {VarSet{get_u64(p)}, get_f64(p + 8), std::to_integer<int>(p[16]), VarSet{get_u64(p + 17)}};
  }
  static std::uint64_t key(const OrderNode& r) { return r.set.bits(); }
};
