#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bnsl/scorer.hpp"
#include "bnsl/storage.hpp"
#include "bnsl/varset.hpp"

namespace bnsl {

/// BestMDL(X, U): the best score for X using parents drawn from U, and the
/// subset attaining it.
struct ParentEntry {
  VarSet candidates;
  double best_score = 0.0;
  VarSet best_parents;
};

/// Lower score wins; on equal scores the smaller parent set, then the
/// smaller mask. Total, so merges do not depend on run boundaries.
inline bool parent_choice_less(double score_a, VarSet parents_a, double score_b, VarSet parents_b) {
  if (score_a != score_b) return score_a < score_b;
  if (parents_a.size() != parents_b.size()) return parents_a.size() < parents_b.size();
  return parents_a.bits() < parents_b.bits();
}

struct ParentReduce {
  ParentEntry operator()(const ParentEntry& a, const ParentEntry& b) const {
    return parent_choice_less(b.best_score, b.best_parents, a.best_score, a.best_parents) ? b : a;
  }
};

/// Bit per subset of one layer, indexed by colex rank: set when the order
/// graph generated that subset without pruning it.
class PresenceMap {
 public:
  PresenceMap() = default;
  PresenceMap(int n, int layer);

  /// Every subset of the layer present.
  static PresenceMap all(int n, int layer);

  int layer() const { return layer_; }
  bool covers_all() const { return all_; }
  void set(VarSet s);
  bool test(VarSet s) const;
  std::uint64_t count() const;

 private:
  int n_ = 0;
  int layer_ = 0;
  bool all_ = false;
  std::vector<std::uint64_t> words_;
};

struct ParentLayerStats {
  std::uint64_t entries = 0;          // entries written to the next layer
  std::uint64_t scores_consumed = 0;  // score records turned into candidates
  std::uint64_t scores_deferred = 0;  // consumed away from their canonical predecessor
  std::uint64_t scores_skipped = 0;   // records for subsets absent from the next layer
  std::size_t runs_spilled = 0;
};

/// Writes parents/X{x}/layer0.bin with the single entry ({}, MDL(X|{}), {}).
void init_parent_layer0(int x, const ScoreCache& cache, const storage::WorkDir& work);

/// Expands X's parent graph from layer l to l+1, keeping only subsets set in
/// `present` (which covers layer l+1). Reads scores/X{x}/layer{l+1}.bin front
/// to back exactly once; deletes the consumed parent layer and score file.
/// Throws CorruptionError when the score stream is out of order or lacks a
/// required record.
ParentLayerStats expand_parent_layer(int x, int l, const ScoreCache& cache, const PresenceMap& present,
                                     const storage::WorkDir& work, std::size_t max_size,
                                     std::size_t fan_in = 64);

}  // namespace bnsl

template <>
struct bnsl::storage::RecordCodec<bnsl::ParentEntry> {
  static constexpr std::size_t kWidth = 24;
  static void encode(const ParentEntry& e, std::byte* p) {
    put_u64(p, e.candidates.bits());
    put_f64(p + 8, e.best_score);
    put_u64(p + 16, e.best_parents.bits());
  }
  static ParentEntry decode(const std::byte* p) {
    return {VarSet{get_u64(p)}, get_f64(p + 8), VarSet{get_u64(p + 16)}};
  }
  static std::uint64_t key(const ParentEntry& e) { return e.candidates.bits(); }
};
