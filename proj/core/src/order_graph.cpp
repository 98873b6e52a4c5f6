#include "bnsl/order_graph.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <stdexcept>

#include "bnsl/error.hpp"

namespace bnsl {

namespace fs = std::filesystem;

double heuristic(VarSet u, const LowerBoundTable& lb) {
  double h = 0.0;
  const int n = static_cast<int>(lb.lb.size());
  (VarSet::full(n) - u).for_each([&](int x) { h += lb[x]; });
  return h;
}

void write_stats_csv(std::ostream& out, const SearchStats& stats) {
  out << "layer,generated,pruned,surviving,disk_bytes\n";
  for (const auto& s : stats.layers) {
    out << s.layer << ',' << s.generated << ',' << s.pruned << ',' << s.surviving << ','
        << s.disk_bytes << '\n';
  }
}

OrderExpansion expand_order_layer(int l, int n, const LowerBoundTable& lb, double upper,
                                  const storage::WorkDir& work, std::size_t max_size,
                                  bool strict_queues, std::size_t fan_in) {
  OrderExpansion out{PresenceMap(n, l + 1), {}};
  out.stats.layer = l + 1;

  std::vector<std::unique_ptr<storage::RecordReader<ParentEntry>>> queues;
  queues.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    queues.push_back(std::make_unique<storage::RecordReader<ParentEntry>>(work.parents_file(x, l)));
  }

  storage::DedupTable<OrderNode, OrderReduce> table(work, max_size, OrderReduce{}, fan_in);
  const VarSet all = VarSet::full(n);
  {
    storage::RecordReader<OrderEntry> entries(work.order_file(l));
    std::optional<VarSet> prev;
    while (entries.has_value()) {
      const OrderEntry e = entries.pop();
      const VarSet u = e.set;
      if (u.size() != l || !u.is_subset_of(all) || (prev && !(*prev < u))) {
        throw CorruptionError(work.order_file(l).string() + ": entry " + u.to_string() + " out of place");
      }
      prev = u;
      (all - u).for_each([&](int x) {
        auto& q = *queues[static_cast<std::size_t>(x)];
        while (q.has_value() && q.peek().candidates < u) {
          if (strict_queues) {
            throw CorruptionError("parent queue for X" + std::to_string(x) + " holds " +
                                  q.peek().candidates.to_string() + " absent from the order layer");
          }
          q.pop();
        }
        if (!q.has_value() || q.peek().candidates != u) {
          throw CorruptionError("parent queue for X" + std::to_string(x) + " desynchronized at " +
                                u.to_string());
        }
        const ParentEntry pe = q.pop();
        const double gap = pe.best_score - lb[x];
        if (gap < 0.0) {
          throw std::logic_error("BestMDL(X" + std::to_string(x) + ", " + u.to_string() +
                                 ") is below lb; heuristic would be inconsistent");
        }
        ++out.stats.generated;
        const double s = e.f + gap;
        if (s > upper) {
          ++out.stats.pruned;
          return;
        }
        const VarSet next = u.with(x);
        out.present.set(next);
        table.insert(OrderNode{next, s, x, pe.best_parents});
      });
    }
  }
  if (strict_queues) {
    for (int x = 0; x < n; ++x) {
      if (queues[static_cast<std::size_t>(x)]->has_value()) {
        throw CorruptionError("parent queue for X" + std::to_string(x) + " has entries past the order layer");
      }
    }
  }
  queues.clear();

  {
    storage::RecordWriter<OrderEntry> order(work.order_file(l + 1));
    storage::RecordWriter<ReconRecord> recon(work.recon_file(l + 1));
    table.drain([&](const OrderNode& node) {
      order.write({node.set, node.f});
      recon.write({node.set, node.leaf, node.leaf_parents});
    });
    order.commit();
    recon.commit();
    out.stats.surviving = order.count();
  }
  out.stats.duplicates = out.stats.generated - out.stats.pruned - out.stats.surviving;
  out.stats.runs_spilled = table.runs_spilled();
  storage::remove_file(work.order_file(l));
  return out;
}

namespace {

std::optional<ReconRecord> find_recon(const fs::path& path, VarSet target) {
  using Codec = storage::RecordCodec<ReconRecord>;
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec) throw CorruptionError("missing reconstruction file " + path.string());
  if (bytes % Codec::kWidth != 0) {
    throw CorruptionError(path.string() + ": size is not a multiple of the record width");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t lo = 0;
  std::uint64_t hi = bytes / Codec::kWidth;
  std::byte buf[Codec::kWidth];
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    in.seekg(static_cast<std::streamoff>(mid * Codec::kWidth));
    in.read(reinterpret_cast<char*>(buf), Codec::kWidth);
    if (!in) throw IoError("short read on " + path.string());
    const ReconRecord r = Codec::decode(buf);
    if (r.set == target) return r;
    if (r.set < target) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return std::nullopt;
}

}  // namespace

Network reconstruct(const storage::WorkDir& work, int n) {
  Network net(n);
  VarSet current = VarSet::full(n);
  for (int layer = n; layer >= 1; --layer) {
    const auto rec = find_recon(work.recon_file(layer), current);
    if (!rec) {
      throw CorruptionError("no reconstruction record for " + current.to_string() + " in layer " +
                            std::to_string(layer));
    }
    if (rec->leaf < 0 || rec->leaf >= n || !current.contains(rec->leaf) ||
        !rec->leaf_parents.is_subset_of(current.without(rec->leaf))) {
      throw CorruptionError("reconstruction record for " + current.to_string() + " is inconsistent");
    }
    net.parents[static_cast<std::size_t>(rec->leaf)] = rec->leaf_parents;
    current = current.without(rec->leaf);
  }
  return net;
}

namespace {

fs::path fresh_temp_dir() {
  std::random_device rd;
  std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto p = fs::temp_directory_path() / ("bnsl-" + std::to_string(gen() % 100000000000ULL));
    if (fs::create_directory(p)) return p;
  }
  throw IoError("cannot create a temporary work directory");
}

const char* const kSubdirs[] = {"scores", "parents", "order", "recon", "tmp"};

// Owns the search files for one run; removes them unless asked to keep.
class WorkArea {
 public:
  explicit WorkArea(const LearnOptions& options) : keep_(options.keep_workdir) {
    if (options.workdir.empty()) {
      root_ = fresh_temp_dir();
      owns_root_ = true;
    } else {
      root_ = options.workdir;
      for (const char* sub : kSubdirs) fs::remove_all(root_ / sub);
    }
    work_ = std::make_unique<storage::WorkDir>(root_);
  }

  WorkArea(const WorkArea&) = delete;
  WorkArea& operator=(const WorkArea&) = delete;

  ~WorkArea() {
    if (keep_) return;
    std::error_code ec;
    if (owns_root_) {
      fs::remove_all(root_, ec);
    } else {
      for (const char* sub : kSubdirs) fs::remove_all(root_ / sub, ec);
    }
  }

  const storage::WorkDir& work() const { return *work_; }

 private:
  fs::path root_;
  bool owns_root_ = false;
  bool keep_;
  std::unique_ptr<storage::WorkDir> work_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

LearnResult learn(const Dataset& data, const LearnOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = data.num_variables();
  WorkArea area(options);
  const auto& work = area.work();

  LearnResult result;
  auto& stats = result.stats;

  ScoringResult scoring = compute_scores(data, work, options.scoring);
  const ScoreCache& cache = scoring.cache;
  const LowerBoundTable& lb = scoring.lb;
  stats.scoring_seconds = seconds_since(t0);

  const double upper = options.upper ? *options.upper
                                     : greedy_upper_bound(cache, data, options.greedy).score;
  stats.upper = upper;
  // The bound and the goal cost are sums of the same local scores taken in
  // different orders; the slack keeps rounding from pruning an optimal path.
  const double upper_cut = std::isfinite(upper) ? upper + 1e-9 * std::max(1.0, std::abs(upper)) : upper;

  for (int x = 0; x < n; ++x) init_parent_layer0(x, cache, work);
  {
    storage::RecordWriter<OrderEntry> w(work.order_file(0));
    w.write({VarSet{}, lb.sum()});
    w.commit();
  }
  auto note_disk = [&](LayerStats& s) {
    const auto bytes = work.disk_bytes();
    s.disk_bytes = std::max(s.disk_bytes, bytes);
    stats.peak_disk_bytes = std::max(stats.peak_disk_bytes, bytes);
  };
  {
    LayerStats first{0, 1, 0, 1, 0, 0, 0};
    note_disk(first);
    stats.layers.push_back(first);
  }

  for (int l = 0; l < n; ++l) {
    OrderExpansion step = expand_order_layer(l, n, lb, upper_cut, work, options.max_ram_nodes,
                                             options.parent_pruning, options.fan_in);
    note_disk(step.stats);
    if (step.stats.surviving == 0) {
      throw Error("every path was pruned at layer " + std::to_string(l + 1) +
                  "; the upper bound is below the optimum");
    }
    if (l + 1 < n) {
      const PresenceMap present = options.parent_pruning ? step.present : PresenceMap::all(n, l + 1);
      for (int x = 0; x < n; ++x) {
        const auto ps = expand_parent_layer(x, l, cache, present, work, options.max_ram_nodes, options.fan_in);
        stats.parent_entries += ps.entries;
        stats.scores_deferred += ps.scores_deferred;
        step.stats.runs_spilled += ps.runs_spilled;
      }
      note_disk(step.stats);
    } else {
      for (int x = 0; x < n; ++x) storage::remove_file(work.parents_file(x, l));
    }
    stats.layers.push_back(step.stats);
    if (options.on_layer_done) options.on_layer_done(l, work);
  }

  const auto goal = storage::read_all<OrderEntry>(work.order_file(n));
  if (goal.size() != 1 || goal.front().set != VarSet::full(n)) {
    throw CorruptionError("goal layer does not hold exactly the full variable set");
  }
  result.score = goal.front().f;
  result.network = reconstruct(work, n);
  result.network.score = result.score;
  stats.seconds = seconds_since(t0);
  return result;
}

}  // namespace bnsl
