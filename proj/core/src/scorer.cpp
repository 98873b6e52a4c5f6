#include "bnsl/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

double xlog2x(double c) { return c > 1.0 ? c * std::log2(c) : 0.0; }

// Next mask with the same popcount (Gosper); 0 once the n-bit space is exhausted.
std::uint64_t next_combination(std::uint64_t v, int n) {
  const std::uint64_t t = v | (v - 1);
  const std::uint64_t w = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
  if (n < 64 && (w >> n) != 0) return 0;
  return w;
}

template <typename F>
void for_each_subset_of_size(int n, int k, F&& f) {
  if (k == 0) {
    f(VarSet{});
    return;
  }
  if (k > n) return;
  for (std::uint64_t m = (std::uint64_t{1} << k) - 1; m != 0; m = next_combination(m, n)) f(VarSet{m});
}

struct Entropy {
  double bits = 0.0;  // -sum N_xu log2(N_xu / N_u)
  double nats = 0.0;
};

Entropy conditional_entropy(const Dataset& data, int x, VarSet parents) {
  const std::size_t N = data.num_records();
  const auto pa = parents.elements();
  std::vector<std::uint32_t> rows(N);
  std::iota(rows.begin(), rows.end(), 0u);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    for (int p : pa) {
      if (data.value(a, p) != data.value(b, p)) return data.value(a, p) < data.value(b, p);
    }
    return false;
  };
  std::sort(rows.begin(), rows.end(), less);

  Entropy h;
  std::vector<double> counts(static_cast<std::size_t>(data.arity(x)));
  std::size_t begin = 0;
  while (begin < N) {
    std::size_t end = begin + 1;
    while (end < N && !less(rows[begin], rows[end])) ++end;
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = begin; i < end; ++i) counts[data.value(rows[i], x)] += 1.0;
    const double nu = static_cast<double>(end - begin);
    for (double c : counts) {
      if (c == 0.0) continue;
      h.bits -= c * std::log2(c / nu);
      h.nats -= c * std::log(c / nu);
    }
    begin = end;
  }
  return h;
}

// Depth-first AD-tree traversal. Record-index partitions are carried down
// the recursion instead of materializing the tree.
class AdSweep {
 public:
  AdSweep(const Dataset& data, int max_parents, const storage::WorkDir& work,
          const ScoringOptions& options)
      : data_(data), n_(data.num_variables()), max_parents_(max_parents),
        depth_cap_(std::min(max_parents + 1, data.num_variables())), work_(work),
        options_(options), acc_(static_cast<std::size_t>(n_)), runs_(static_cast<std::size_t>(n_)) {
    const std::size_t N = data.num_records();
    scratch_.assign(static_cast<std::size_t>(depth_cap_) + 1, std::vector<std::uint32_t>(N));
    for (int v = 0; v < n_; ++v) {
      max_arity_ = std::max(max_arity_, data.arity(v));
    }
    offsets_.assign(static_cast<std::size_t>(depth_cap_) + 1,
                    std::vector<std::size_t>(static_cast<std::size_t>(max_arity_) + 1));
  }

  void run() {
    const std::size_t N = data_.num_records();
    auto& root = scratch_[0];
    std::iota(root.begin(), root.end(), 0u);
    update(VarSet{}, N);
    expand(-1, VarSet{}, root.data(), N, 0);
  }

  std::uint64_t nodes() const { return nodes_; }
  std::size_t spilled() const { return spilled_; }

  /// Partial entropy sums for x, keyed by parent mask.
  std::unordered_map<std::uint64_t, double> finish(int x) {
    auto& table = acc_[static_cast<std::size_t>(x)];
    auto& runs = runs_[static_cast<std::size_t>(x)];
    std::unordered_map<std::uint64_t, double> out;
    if (runs.empty()) {
      out.reserve(table.size());
      for (const auto& [k, r] : table) out.emplace(k, r.score);
      table.clear();
      return out;
    }
    if (!table.empty()) runs.push_back(storage::spill_run(table, work_.temp_file()));
    auto sum = [](const ScoreRecord& a, const ScoreRecord& b) {
      return ScoreRecord{a.parents, a.score + b.score};
    };
    storage::merge_runs<ScoreRecord>(
        std::move(runs), sum, [&](const ScoreRecord& r) { out.emplace(r.parents.bits(), r.score); },
        work_, options_.fan_in);
    runs.clear();
    return out;
  }

 private:
  void add(int x, VarSet u, double delta) {
    auto& table = acc_[static_cast<std::size_t>(x)];
    auto [it, fresh] = table.try_emplace(u.bits(), ScoreRecord{u, 0.0});
    it->second.score += delta;
    if (fresh && ++resident_ > options_.accumulator_budget) spill_all();
  }

  void spill_all() {
    for (int x = 0; x < n_; ++x) {
      auto& table = acc_[static_cast<std::size_t>(x)];
      if (table.empty()) continue;
      runs_[static_cast<std::size_t>(x)].push_back(storage::spill_run(table, work_.temp_file()));
      ++spilled_;
    }
    resident_ = 0;
  }

  // An AD node with instantiated set w and count consistent records: the
  // count is a parent-marginal count for every X outside w and a joint
  // count for every X inside w with parents w \ {X}.
  void update(VarSet w, std::size_t count) {
    ++nodes_;
    const double t = xlog2x(static_cast<double>(count));
    if (t == 0.0) return;
    const int size = w.size();
    for (int x = 0; x < n_; ++x) {
      if (w.contains(x)) {
        add(x, w.without(x), -t);
      } else if (size <= max_parents_) {
        add(x, w, t);
      }
    }
  }

  void expand(int after, VarSet w, const std::uint32_t* rows, std::size_t count, int depth) {
    auto& out = scratch_[static_cast<std::size_t>(depth) + 1];
    auto& off = offsets_[static_cast<std::size_t>(depth)];
    for (int j = after + 1; j < n_; ++j) {
      const auto col = data_.column(j);
      const int r = data_.arity(j);
      std::fill(off.begin(), off.begin() + r + 1, 0);
      for (std::size_t i = 0; i < count; ++i) ++off[col[rows[i]] + 1u];
      for (int v = 0; v < r; ++v) off[static_cast<std::size_t>(v) + 1] += off[static_cast<std::size_t>(v)];
      std::vector<std::size_t> cursor(off.begin(), off.begin() + r);
      for (std::size_t i = 0; i < count; ++i) out[cursor[col[rows[i]]]++] = rows[i];

      const VarSet next = w.with(j);
      for (int v = 0; v < r; ++v) {
        const std::size_t b = off[static_cast<std::size_t>(v)];
        const std::size_t c = off[static_cast<std::size_t>(v) + 1] - b;
        if (c == 0) continue;
        update(next, c);
        // A single consistent record contributes 1 log 1 = 0 to every
        // descendant, so its subtree is skipped.
        if (c > 1 && depth + 1 < depth_cap_) expand(j, next, out.data() + b, c, depth + 1);
      }
    }
  }

  const Dataset& data_;
  int n_;
  int max_parents_;
  int depth_cap_;
  int max_arity_ = 1;
  const storage::WorkDir& work_;
  ScoringOptions options_;
  std::vector<std::unordered_map<std::uint64_t, ScoreRecord>> acc_;
  std::vector<std::vector<storage::SortedRun>> runs_;
  std::vector<std::vector<std::uint32_t>> scratch_;
  std::vector<std::vector<std::size_t>> offsets_;
  std::size_t resident_ = 0;
  std::size_t spilled_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

int max_parents(std::size_t records) {
  if (records < 2) throw Error("max_parents: need at least 2 records");
  const long double N = static_cast<long double>(records);
  const long double bound = std::log2(2.0L * N / std::log2(N));
  return std::max(1, static_cast<int>(std::floor(bound)));
}

double penalty_weight(std::size_t records) {
  return std::log2(static_cast<double>(records)) / 2.0;
}

double parameter_count(const Dataset& data, int x, VarSet parents) {
  double k = static_cast<double>(data.arity(x) - 1);
  parents.for_each([&](int p) { k *= static_cast<double>(data.arity(p)); });
  return k;
}

double mdl_score_direct(const Dataset& data, int x, VarSet parents) {
  return conditional_entropy(data, x, parents).bits +
         penalty_weight(data.num_records()) * parameter_count(data, x, parents);
}

double mdl_score_direct_nats(const Dataset& data, int x, VarSet parents) {
  return conditional_entropy(data, x, parents).nats +
         std::log(static_cast<double>(data.num_records())) / 2.0 * parameter_count(data, x, parents);
}

double LowerBoundTable::sum() const {
  double s = 0.0;
  for (double v : lb) s += v;
  return s;
}

std::vector<ScoreRecord> ScoreCache::load(int x) const {
  std::vector<ScoreRecord> out;
  for (int l = 0; l <= max_layer(); ++l) {
    auto part = storage::read_all<ScoreRecord>(file(x, l));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

NeedKey need_key(VarSet parents) {
  if (parents.empty()) return {};
  const int top = parents.max();
  return {parents.without(top).bits(), top};
}

void sort_scores_by_need(int x, std::vector<ScoreRecord> records, const storage::WorkDir& work,
                         int max_layer) {
  std::vector<std::vector<ScoreRecord>> layers(static_cast<std::size_t>(max_layer) + 1);
  for (const auto& r : records) {
    if (r.parents.contains(x)) {
      throw Error("score record for X" + std::to_string(x) + " lists itself as a parent");
    }
    const int l = r.parents.size();
    if (l > max_layer) throw Error("score record exceeds the cached parent-set size");
    layers[static_cast<std::size_t>(l)].push_back(r);
  }
  std::filesystem::create_directories(work.scores_file(x, 0).parent_path());
  for (int l = 0; l <= max_layer; ++l) {
    auto& layer = layers[static_cast<std::size_t>(l)];
    std::sort(layer.begin(), layer.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
      return need_key(a.parents) < need_key(b.parents);
    });
    storage::RecordWriter<ScoreRecord> w(work.scores_file(x, l));
    for (const auto& r : layer) w.write(r);
    w.commit();
  }
}

ScoringResult compute_scores(const Dataset& data, const storage::WorkDir& work,
                             const ScoringOptions& options) {
  const int n = data.num_variables();
  const std::size_t N = data.num_records();
  const int mp = max_parents(N);
  const double weight = penalty_weight(N);

  AdSweep sweep(data, mp, work, options);
  sweep.run();

  ScoringResult result{ScoreCache(work, n, N, mp), {}, sweep.nodes(), 0};
  const int top = result.cache.max_layer();
  result.lb.lb.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

  for (int x = 0; x < n; ++x) {
    const auto partial = sweep.finish(x);
    std::vector<ScoreRecord> records;
    for (int l = 0; l <= top; ++l) {
      for_each_subset_of_size(n, l, [&](VarSet u) {
        if (u.contains(x)) return;
        const auto it = partial.find(u.bits());
        const double h = it == partial.end() ? 0.0 : it->second;
        records.push_back({u, h + weight * parameter_count(data, x, u)});
      });
    }
    for (const auto& r : records) {
      auto& lb = result.lb.lb[static_cast<std::size_t>(x)];
      lb = std::min(lb, r.score);
    }
    sort_scores_by_need(x, std::move(records), work, top);
  }
  result.spilled_runs = sweep.spilled();

  nlohmann::json meta;
  meta["n"] = n;
  meta["N"] = N;
  meta["max_parents"] = mp;
  meta["log_base"] = 2;
  meta["arities"] = data.arities();
  std::ofstream(work.scores_meta()) << meta.dump(2) << '\n';
  return result;
}

LowerBoundTable best_scores(const ScoreCache& cache) {
  LowerBoundTable t;
  t.lb.assign(static_cast<std::size_t>(cache.num_variables()), std::numeric_limits<double>::infinity());
  for (int x = 0; x < cache.num_variables(); ++x) {
    for (int l = 0; l <= cache.max_layer(); ++l) {
      storage::RecordReader<ScoreRecord> in(cache.file(x, l));
      while (in.has_value()) {
        auto& lb = t.lb[static_cast<std::size_t>(x)];
        lb = std::min(lb, in.pop().score);
      }
    }
  }
  return t;
}

}  // namespace bnsl
