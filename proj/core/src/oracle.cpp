#include "bnsl/oracle.hpp"

#include <limits>
#include <unordered_map>
#include <vector>

#include "bnsl/error.hpp"
#include "bnsl/scorer.hpp"

namespace bnsl {

OracleResult dp_optimal(const Dataset& data, int max_variables) {
  const int n = data.num_variables();
  if (n > max_variables) {
    throw Error("dp_optimal: " + std::to_string(n) + " variables exceeds the cap of " +
                std::to_string(max_variables));
  }
  const int limit = max_parents(data.num_records());
  const std::size_t subsets = std::size_t{1} << n;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[x][S]: min over P subset of S, |P| <= limit, of MDL(x|P).
  std::vector<std::vector<double>> best(static_cast<std::size_t>(n), std::vector<double>(subsets, kInf));
  std::vector<std::vector<std::uint64_t>> arg(static_cast<std::size_t>(n),
                                              std::vector<std::uint64_t>(subsets, 0));
  for (int x = 0; x < n; ++x) {
    auto& b = best[static_cast<std::size_t>(x)];
    auto& a = arg[static_cast<std::size_t>(x)];
    for (std::uint64_t s = 0; s < subsets; ++s) {
      const VarSet set{s};
      if (set.contains(x)) continue;
      if (set.size() <= limit) {
        b[s] = mdl_score_direct(data, x, set);
        a[s] = s;
      }
      set.for_each([&](int y) {
        const std::uint64_t sub = set.without(y).bits();
        if (b[sub] < b[s]) {
          b[s] = b[sub];
          a[s] = a[sub];
        }
      });
    }
  }

  std::vector<double> g(subsets, kInf);
  std::vector<int> leaf(subsets, -1);
  g[0] = 0.0;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    const VarSet set{s};
    set.for_each([&](int x) {
      const std::uint64_t rest = set.without(x).bits();
      const double c = g[rest] + best[static_cast<std::size_t>(x)][rest];
      if (c < g[s]) {
        g[s] = c;
        leaf[s] = x;
      }
    });
  }

  OracleResult out;
  out.score = g[subsets - 1];
  out.network = Network(n);
  std::uint64_t s = subsets - 1;
  while (s != 0) {
    const int x = leaf[s];
    const std::uint64_t rest = VarSet{s}.without(x).bits();
    out.network.parents[static_cast<std::size_t>(x)] = VarSet{arg[static_cast<std::size_t>(x)][rest]};
    s = rest;
  }
  out.network.score = out.score;
  return out;
}

OracleResult exhaustive_optimal(const Dataset& data) {
  const int n = data.num_variables();
  if (n > 4) throw Error("exhaustive_optimal: at most 4 variables (got " + std::to_string(n) + ")");

  std::vector<std::pair<int, int>> edges;  // (parent, child)
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < n; ++p) {
      if (p != c) edges.emplace_back(p, c);
    }
  }
  std::vector<std::unordered_map<std::uint64_t, double>> memo(static_cast<std::size_t>(n));
  auto local = [&](int x, VarSet u) {
    auto& m = memo[static_cast<std::size_t>(x)];
    const auto it = m.find(u.bits());
    if (it != m.end()) return it->second;
    const double s = mdl_score_direct(data, x, u);
    m.emplace(u.bits(), s);
    return s;
  };

  OracleResult out;
  out.score = std::numeric_limits<double>::infinity();
  const std::uint64_t graphs = std::uint64_t{1} << edges.size();
  Network net(n);
  for (std::uint64_t g = 0; g < graphs; ++g) {
    for (auto& p : net.parents) p = VarSet{};
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if ((g >> e) & 1u) {
        auto& p = net.parents[static_cast<std::size_t>(edges[e].second)];
        p = p.with(edges[e].first);
      }
    }
    if (!net.is_acyclic()) continue;
    double total = 0.0;
    for (int x = 0; x < n; ++x) total += local(x, net.parents[static_cast<std::size_t>(x)]);
    if (total < out.score) {
      out.score = total;
      out.network = net;
    }
  }
  out.network.score = out.score;
  return out;
}

}  // namespace bnsl
