#include "bnsl/parent_graph.hpp"

#include <optional>

#include "bnsl/error.hpp"

namespace bnsl {

PresenceMap::PresenceMap(int n, int layer)
    : n_(n), layer_(layer), words_((layer_size(n, layer) + 63) / 64, 0) {}

PresenceMap PresenceMap::all(int n, int layer) {
  PresenceMap m;
  m.n_ = n;
  m.layer_ = layer;
  m.all_ = true;
  return m;
}

void PresenceMap::set(VarSet s) {
  if (all_) return;
  const auto r = colex_rank(s).value;
  words_[r / 64] |= std::uint64_t{1} << (r % 64);
}

bool PresenceMap::test(VarSet s) const {
  if (all_) return true;
  const auto r = colex_rank(s).value;
  return (words_[r / 64] >> (r % 64)) & 1u;
}

std::uint64_t PresenceMap::count() const {
  if (all_) return layer_size(n_, layer_);
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

void init_parent_layer0(int x, const ScoreCache& cache, const storage::WorkDir& work) {
  storage::RecordReader<ScoreRecord> in(cache.file(x, 0));
  if (!in.has_value() || !in.peek().parents.empty()) {
    throw CorruptionError("score cache lacks MDL(X" + std::to_string(x) + "|{})");
  }
  const ScoreRecord root = in.pop();
  std::filesystem::create_directories(work.parents_file(x, 0).parent_path());
  storage::RecordWriter<ParentEntry> w(work.parents_file(x, 0));
  w.write({VarSet{}, root.score, VarSet{}});
  w.commit();
  storage::remove_file(cache.file(x, 0));
}

namespace {

// Sequential view of one score file in need order.
class ScoreStream {
 public:
  ScoreStream(const std::filesystem::path& path, bool exists) {
    if (exists) in_.emplace(path);
  }

  bool has_value() const { return in_ && in_->has_value(); }
  NeedKey head_key() const { return need_key(in_->peek().parents); }

  ScoreRecord pop() {
    const NeedKey k = head_key();
    if (have_last_ && !(last_ < k)) {
      throw CorruptionError(in_->path().string() + ": score records out of need order");
    }
    last_ = k;
    have_last_ = true;
    return in_->pop();
  }

  const std::filesystem::path* path() const { return in_ ? &in_->path() : nullptr; }

 private:
  std::optional<storage::RecordReader<ScoreRecord>> in_;
  NeedKey last_{};
  bool have_last_ = false;
};

}  // namespace

ParentLayerStats expand_parent_layer(int x, int l, const ScoreCache& cache, const PresenceMap& present,
                                     const storage::WorkDir& work, std::size_t max_size,
                                     std::size_t fan_in) {
  const int n = cache.num_variables();
  const int next_layer = l + 1;
  if (present.layer() != next_layer) throw Error("presence map does not cover the next layer");
  const bool scored = next_layer <= cache.max_layer();
  ParentLayerStats stats;

  storage::DedupTable<ParentEntry, ParentReduce> table(work, max_size, ParentReduce{}, fan_in);
  ScoreStream scores(cache.file(x, next_layer), scored);

  auto check_record = [&](const ScoreRecord& r) {
    if (r.parents.contains(x) || r.parents.size() != next_layer) {
      throw CorruptionError(cache.file(x, next_layer).string() + ": record " + r.parents.to_string() +
                            " does not belong to this file");
    }
  };
  // Records whose canonical predecessor is absent from this layer are
  // still needed when their own subset survived; they are taken here, as
  // the stream passes them, so the file is read once front to back.
  auto take_passed = [&](NeedKey until) {
    while (scores.has_value() && scores.head_key() < until) {
      const ScoreRecord r = scores.pop();
      check_record(r);
      if (present.test(r.parents)) {
        table.insert({r.parents, r.score, r.parents});
        ++stats.scores_consumed;
        ++stats.scores_deferred;
      } else {
        ++stats.scores_skipped;
      }
    }
  };

  const VarSet universe = VarSet::full(n).without(x);
  {
    storage::RecordReader<ParentEntry> current(work.parents_file(x, l));
    std::optional<VarSet> prev;
    while (current.has_value()) {
      const ParentEntry e = current.pop();
      const VarSet u = e.candidates;
      if (u.contains(x) || u.size() != l || (prev && !(*prev < u))) {
        throw CorruptionError(work.parents_file(x, l).string() + ": entry " + u.to_string() +
                              " out of place");
      }
      prev = u;
      (universe - u).for_each([&](int added) {
        const VarSet s = u.with(added);
        const bool canonical = u.empty() || added > u.max();
        if (scored && canonical) take_passed(NeedKey{u.bits(), added});
        if (!present.test(s)) return;
        if (scored && canonical) {
          if (!scores.has_value() || scores.head_key() != NeedKey{u.bits(), added}) {
            throw CorruptionError(cache.file(x, next_layer).string() + ": missing score for " +
                                  s.to_string());
          }
          const ScoreRecord r = scores.pop();
          check_record(r);
          table.insert({s, r.score, s});
          ++stats.scores_consumed;
        }
        table.insert({s, e.best_score, e.best_parents});
      });
    }
  }
  if (scored) {
    take_passed(NeedKey{~std::uint64_t{0}, kMaxVariables + 1});
  }

  {
    std::filesystem::create_directories(work.parents_file(x, next_layer).parent_path());
    storage::RecordWriter<ParentEntry> w(work.parents_file(x, next_layer));
    table.drain([&](const ParentEntry& e) { w.write(e); });
    w.commit();
    stats.entries = w.count();
  }
  stats.runs_spilled = table.runs_spilled();
  storage::remove_file(work.parents_file(x, l));
  if (scored) storage::remove_file(cache.file(x, next_layer));
  return stats;
}

}  // namespace bnsl
