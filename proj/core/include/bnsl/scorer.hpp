#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/storage.hpp"
#include "bnsl/varset.hpp"

namespace bnsl {

/// One cached local score. The variable is implied by the file holding it.
struct ScoreRecord {
  VarSet parents;
  double score = 0.0;
};

/// Largest parent-set size that can be optimal under MDL:
/// floor(log2(2N / log2 N)), at least 1. Throws for N < 2.
int max_parents(std::size_t records);

/// (log2 N) / 2, the weight of the parameter count in MDL.
double penalty_weight(std::size_t records);

/// Parameter count (r_X - 1) * prod r_l.
double parameter_count(const Dataset& data, int x, VarSet parents);

/// MDL(X | U) by explicit counting: H(X|U) + (log2 N / 2) K(X|U), in bits.
double mdl_score_direct(const Dataset& data, int x, VarSet parents);

/// Natural-log variant of mdl_score_direct; every term is scaled by ln 2.
double mdl_score_direct_nats(const Dataset& data, int x, VarSet parents);

struct LowerBoundTable {
  std::vector<double> lb;

  double operator[](int x) const { return lb[static_cast<std::size_t>(x)]; }
  double sum() const;
};

struct ScoringOptions {
  /// Accumulator entries held in RAM before partial sums are spilled.
  std::size_t accumulator_budget = std::size_t{1} << 23;
  std::size_t fan_in = 64;
};

/// Handle to a score cache on disk: scores/X{i}/layer{l}.bin plus meta.json.
class ScoreCache {
 public:
  ScoreCache(const storage::WorkDir& work, int num_variables, std::size_t records, int max_parents)
      : work_(&work), n_(num_variables), records_(records), max_parents_(max_parents) {}

  int num_variables() const { return n_; }
  std::size_t num_records() const { return records_; }
  int max_parents() const { return max_parents_; }

  /// Highest layer with a score file: min(max_parents, n - 1).
  int max_layer() const { return max_parents_ < n_ - 1 ? max_parents_ : n_ - 1; }

  const storage::WorkDir& work() const { return *work_; }
  std::filesystem::path file(int x, int layer) const { return work_->scores_file(x, layer); }

  /// All records for x, in file order, layer by layer.
  std::vector<ScoreRecord> load(int x) const;

 private:
  const storage::WorkDir* work_;
  int n_;
  std::size_t records_;
  int max_parents_;
};

struct ScoringResult {
  ScoreCache cache;
  LowerBoundTable lb;
  std::uint64_t ad_nodes = 0;
  std::size_t spilled_runs = 0;
};

/// One depth-limited AD-tree sweep computing MDL(X|U) for every X and every
/// U not containing X with |U| <= max_parents(N); writes the cache files in
/// need order and returns the per-variable best scores.
ScoringResult compute_scores(const Dataset& data, const storage::WorkDir& work,
                             const ScoringOptions& options = {});

LowerBoundTable best_scores(const ScoreCache& cache);

/// Need-order key of a parent set: its canonical predecessor (the set
/// without its largest element), then the element added.
struct NeedKey {
  std::uint64_t predecessor = 0;
  int added = -1;
  friend constexpr auto operator<=>(const NeedKey&, const NeedKey&) = default;
};

NeedKey need_key(VarSet parents);

/// Partitions one variable's records by |U| and writes scores/X{x}/layer{l}.bin
/// sorted by need_key. Layers 0..max_layer are always created.
void sort_scores_by_need(int x, std::vector<ScoreRecord> records, const storage::WorkDir& work,
                         int max_layer);

}  // namespace bnsl

template <>
struct bnsl::storage::RecordCodec<bnsl::ScoreRecord> {
  static constexpr std::size_t kWidth = 16;
  static void encode(const ScoreRecord& r, std::byte* p) {
    put_u64(p, r.parents.bits());
    put_f64(p + 8, r.score);
  }
  static ScoreRecord decode(const std::byte* p) { return {VarSet{get_u64(p)}, get_f64(p + 8)}; }
  static std::uint64_t key(const ScoreRecord& r) { return r.parents.bits(); }
};
