#include "bnsl/bounds.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

namespace bnsl {

namespace {

class LocalScores {
 public:
  explicit LocalScores(const Dataset& data)
      : data_(data), memo_(static_cast<std::size_t>(data.num_variables())) {}

  double operator()(int x, VarSet u) {
    auto& m = memo_[static_cast<std::size_t>(x)];
    const auto it = m.find(u.bits());
    if (it != m.end()) return it->second;
    const double s = mdl_score_direct(data_, x, u);
    m.emplace(u.bits(), s);
    return s;
  }

 private:
  const Dataset& data_;
  std::vector<std::unordered_map<std::uint64_t, double>> memo_;
};

struct State {
  std::vector<VarSet> parents;
  double score = 0.0;
};

// True when `to` is reachable from `from` along parent -> child edges.
bool reaches(const std::vector<VarSet>& parents, int from, int to) {
  const int n = static_cast<int>(parents.size());
  VarSet seen = VarSet::singleton(from);
  VarSet frontier = seen;
  while (!frontier.empty()) {
    VarSet next;
    for (int c = 0; c < n; ++c) {
      if (seen.contains(c)) continue;
      if (!(parents[static_cast<std::size_t>(c)] & frontier).empty()) next = next.with(c);
    }
    if (next.contains(to)) return true;
    seen = seen | next;
    frontier = next;
  }
  return false;
}

}  // namespace

Network greedy_upper_bound(const ScoreCache& cache, const Dataset& data, const GreedyOptions& options,
                           GreedyTrace* trace) {
  const int n = data.num_variables();
  const int limit = cache.max_parents();
  LocalScores local(data);
  std::mt19937_64 rng(options.seed);

  State start{std::vector<VarSet>(static_cast<std::size_t>(n)), 0.0};
  for (int x = 0; x < n; ++x) start.score += local(x, VarSet{});

  State best = start;
  std::vector<State> beam{start};
  if (trace != nullptr) trace->accepted.push_back(best.score);

  const int width = std::max(1, options.beam);
  for (int iter = 0; iter < options.max_iters; ++iter) {
    struct Candidate {
      double score;
      std::uint64_t tie;
      std::vector<VarSet> parents;
    };
    std::vector<Candidate> candidates;
    std::set<std::vector<std::uint64_t>> seen;

    auto offer = [&](const std::vector<VarSet>& parents, double score) {
      std::vector<std::uint64_t> key(parents.size());
      for (std::size_t i = 0; i < parents.size(); ++i) key[i] = parents[i].bits();
      if (!seen.insert(std::move(key)).second) return;
      candidates.push_back({score, rng(), parents});
    };

    for (const State& s : beam) {
      auto p = s.parents;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const VarSet pb = p[static_cast<std::size_t>(b)];
          if (pb.contains(a)) {
            const double base = s.score - local(b, pb) + local(b, pb.without(a));
            p[static_cast<std::size_t>(b)] = pb.without(a);
            offer(p, base);
            // reverse a -> b into b -> a
            const VarSet pa = p[static_cast<std::size_t>(a)];
            if (pa.size() < limit && !reaches(p, a, b)) {
              p[static_cast<std::size_t>(a)] = pa.with(b);
              offer(p, base - local(a, pa) + local(a, pa.with(b)));
              p[static_cast<std::size_t>(a)] = pa;
            }
            p[static_cast<std::size_t>(b)] = pb;
          } else if (pb.size() < limit && !reaches(p, b, a)) {
            p[static_cast<std::size_t>(b)] = pb.with(a);
            offer(p, s.score - local(b, pb) + local(b, pb.with(a)));
            p[static_cast<std::size_t>(b)] = pb;
          }
        }
      }
    }
    if (candidates.empty()) break;

    const std::size_t keep = std::min(candidates.size(), static_cast<std::size_t>(width));
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), [](const Candidate& x, const Candidate& y) {
                        return x.score != y.score ? x.score < y.score : x.tie < y.tie;
                      });
    if (!(candidates.front().score < best.score)) break;

    beam.clear();
    for (std::size_t i = 0; i < keep; ++i) {
      beam.push_back({std::move(candidates[i].parents), candidates[i].score});
    }
    best = beam.front();
    if (trace != nullptr) {
      trace->iterations = iter + 1;
      trace->accepted.push_back(best.score);
    }
  }

  // Re-sum from scratch so the reported score carries no incremental drift.
  Network net(n);
  net.parents = best.parents;
  net.score = 0.0;
  for (int x = 0; x < n; ++x) net.score += local(x, net.parents[static_cast<std::size_t>(x)]);
  return net;
}

}  // namespace bnsl
