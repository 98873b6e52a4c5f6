// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnsl/oracle.hpp"
#include "bnsl/order_graph.hpp"
#include "support/random_data.hpp"

namespace {

using namespace bnsl;
using bnsl::testing::close_rel;
using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  int id;
  std::string what;
  bool ok;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(int id, std::string what, bool ok, std::string detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  verdicts.push_back({id, std::move(what), ok, std::move(detail)});
}

std::string network_text(const LearnResult& r, const Dataset& d) {
  std::ostringstream out;
  write_network(out, r.network, d.names());
  return out.str();
}

void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream f(path);
  for (int v = 0; v < d.num_variables(); ++v) f << (v ? "," : "") << d.name(v);
  f << '\n';
  for (std::size_t r = 0; r < d.num_records(); ++r) {
    for (int v = 0; v < d.num_variables(); ++v) f << (v ? "," : "") << d.value(r, v);
    f << '\n';
  }
}

struct Instance {
  int n;
  std::size_t N;
  std::uint64_t seed;
  Dataset data;
};

std::vector<Instance> oracle_instances() {
  std::vector<Instance> out;
  for (std::uint64_t i = 0; i < 110; ++i) {
    const int n = 2 + static_cast<int>(i % 11);
    const std::size_t N = 20 + (i * 197) % 481;
    const int arity = 2 + static_cast<int>(i % 3);
    const int degree = 1 + static_cast<int>(i % 3);
    out.push_back({n, N, i, bnsl::testing::random_network_data(n, N, 7000 + i, arity, degree)});
  }
  return out;
}

// Criteria 1, 2, 5, 9 share the same runs.
void oracle_criteria(const std::vector<Instance>& instances) {
  const auto t0 = Clock::now();
  int mismatched = 0, checked_exhaustive = 0, unsound_bound = 0, bad_counts = 0;
  int default_wrong = 0, default_failed = 0, safe_wrong = 0;
  int inconsistent = 0, not_closed = 0, cyclic = 0, runs = 0;
  std::string first_mismatch;
  for (const auto& inst : instances) {
    const auto& d = inst.data;
    const double dp = dp_optimal(d).score;
    if (inst.n <= 4) {
      ++checked_exhaustive;
      if (!close_rel(exhaustive_optimal(d).score, dp)) ++mismatched;
    }
    auto run = [&](LearnOptions opts) -> std::optional<LearnResult> {
      ++runs;
      try {
        auto r = learn(d, opts);
        if (!r.network.is_acyclic()) ++cyclic;
        if (!close_rel(network_score(r.network, d), r.score)) ++not_closed;
        return r;
      } catch (const std::logic_error& e) {
        ++inconsistent;
        std::printf("  heuristic assertion on instance %llu: %s\n", static_cast<unsigned long long>(inst.seed), e.what());
      } catch (const std::exception& e) {
        std::printf("  learn failed on instance %llu: %s\n", static_cast<unsigned long long>(inst.seed), e.what());
      }
      return std::nullopt;
    };
    LearnOptions pruned;
    LearnOptions safe;
    safe.parent_pruning = false;
    LearnOptions unbounded;
    unbounded.upper = kInf;
    const auto a = run(pruned);
    const auto b = run(safe);
    const auto c = run(unbounded);
    if (!a) ++default_failed;
    if (a && !close_rel(a->score, dp)) ++default_wrong;
    if (!b || !close_rel(b->score, dp)) ++safe_wrong;
    for (const auto* r : {&a, &b}) {
      if (!*r || !close_rel((*r)->score, dp)) {
        ++mismatched;
        if (first_mismatch.empty()) {
          const std::string path = "acceptance_mismatch_" + std::to_string(inst.seed) + ".csv";
          save_csv(d, path);
          first_mismatch = "instance " + std::to_string(inst.seed) + " saved to " + path;
        }
      }
    }
    if (!c || !close_rel(c->score, dp)) ++unsound_bound;
    for (const auto* r : {&a, &b}) {
      if (!*r || !c) continue;
      for (std::size_t l = 0; l < (*r)->stats.layers.size(); ++l) {
        if ((*r)->stats.layers[l].surviving > c->stats.layers[l].surviving) ++bad_counts;
      }
    }
  }
  const double secs = since(t0);
  char detail[512];
  std::snprintf(detail, sizeof detail,
                "%zu instances, n 2..12, N 20..500, %d exhaustive checks; default mode: %d wrong scores, "
                "%d unreachable goals; safe mode: %d mismatches; %.1f s of 300 s%s%s",
                instances.size(), checked_exhaustive, default_wrong, default_failed, safe_wrong, secs,
                first_mismatch.empty() ? "" : "; first ",
                first_mismatch.c_str());
  report(1, "learn equals DP optimum (and exhaustive for n<=4) within 1e-9 relative",
         mismatched == 0 && secs < 300.0 && instances.size() >= 100, detail);
  std::snprintf(detail, sizeof detail, "%d unbounded runs differ, %d layers with more survivors when pruning",
                unsound_bound, bad_counts);
  report(2, "pruning soundness against --upper inf", unsound_bound == 0 && bad_counts == 0, detail);
  std::snprintf(detail, sizeof detail, "%d searches, %d assertions fired", runs, inconsistent);
  report(5, "heuristic consistency assertion never fires", inconsistent == 0, detail);
  std::snprintf(detail, sizeof detail, "%d searches, %d cyclic, %d rescoring mismatches", runs, cyclic, not_closed);
  report(9, "reconstruction is acyclic and rescores to the goal f", cyclic == 0 && not_closed == 0, detail);
}

void ddd_criterion(const std::vector<Instance>& instances) {
  int compared = 0, differing = 0;
  for (std::size_t i = 0; i < instances.size() && compared < 20; i += 5) {
    const auto& d = instances[i].data;
    for (bool pruning : {true, false}) {
      std::string reference;
      for (std::size_t max_size : {std::size_t{1000000}, std::size_t{7}, std::size_t{1}}) {
        LearnOptions opts;
        opts.max_ram_nodes = max_size;
        opts.parent_pruning = pruning;
        std::string text;
        try {
          text = network_text(learn(d, opts), d);
        } catch (const Error& e) {
          text = std::string("error: ") + e.what();
        }
        if (reference.empty()) {
          reference = text;
        } else if (text != reference) {
          ++differing;
        }
      }
    }
    ++compared;
  }
  report(3, "network output byte-identical for max_size 1, 7, 10^6", compared == 20 && differing == 0,
         std::to_string(compared) + " instances in both modes, " + std::to_string(differing) +
             " differing outputs");
}

int check_cache(const Dataset& d) {
  bnsl::testing::TempDir tmp;
  storage::WorkDir work(tmp.path());
  const auto scoring = compute_scores(d, work);
  int bad = 0;
  for (int x = 0; x < d.num_variables(); ++x) {
    for (const auto& r : scoring.cache.load(x)) {
      if (!close_rel(r.score, mdl_score_direct(d, x, r.parents))) ++bad;
    }
  }
  return bad;
}

void score_engine_criterion() {
  int triples = 0, bad = 0;
  std::mt19937_64 rng(4);
  for (int n = 3; n <= 8; ++n) {
    for (int t = 0; t < 50; ++t) {
      const std::size_t N = 10 + rng() % 300;
      const auto d = bnsl::testing::random_network_data(n, N, rng(), 2 + static_cast<int>(rng() % 3));
      const int x = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const int maxp = std::min(max_parents(N), n - 1);
      const int size = static_cast<int>(rng() % static_cast<std::uint64_t>(maxp + 1));
      VarSet u;
      while (u.size() < size) {
        const int y = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (y != x) u = u.with(y);
      }
      bnsl::testing::TempDir tmp;
      storage::WorkDir work(tmp.path());
      const auto scoring = compute_scores(d, work);
      bool found = false;
      for (const auto& r : scoring.cache.load(x)) {
        if (r.parents != u) continue;
        found = true;
        if (!close_rel(r.score, mdl_score_direct(d, x, u))) ++bad;
      }
      if (!found) ++bad;
      ++triples;
    }
  }
  // Degenerate data: unobserved states, constant columns, a single
  // configuration, two records.
  int degenerate_bad = 0;
  degenerate_bad += check_cache(Dataset({}, {4, 4, 3}, {{0, 0, 1, 1, 0}, {3, 3, 3, 3, 0}, {0, 0, 0, 0, 0}}));
  degenerate_bad += check_cache(Dataset({}, {1, 1, 1}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  degenerate_bad += check_cache(Dataset({}, {2, 3, 2}, {{1, 0}, {2, 2}, {0, 0}}));
  degenerate_bad += check_cache(Dataset({}, {3, 3, 3, 3}, {{0, 1, 2, 0, 1, 2}, {0, 1, 2, 0, 1, 2}, {2, 2, 2, 1, 1, 1}, {0, 0, 0, 0, 0, 0}}));
  const double zero_log_zero = mdl_score_direct(Dataset({}, {3}, {{1, 1, 1, 1}}), 0, {});
  const bool zero_ok = zero_log_zero == 2.0;  // H = 0, K = 2, weight log2(4)/2 = 1
  report(4, "AD-tree sweep equals direct counting within 1e-9 relative",
         bad == 0 && degenerate_bad == 0 && zero_ok,
         std::to_string(triples) + " triples for n 3..8 with " + std::to_string(bad) + " mismatches; " +
             std::to_string(degenerate_bad) + " degenerate mismatches; 0 log 0 case " + (zero_ok ? "ok" : "wrong"));
}

// floor(log2(2N / log2 N)) with long double, away from the integer boundary.
int max_parents_long(std::size_t N) {
  const long double v = std::log2(2.0L * N / std::log2(static_cast<long double>(N)));
  return static_cast<int>(std::floor(v));
}

void parent_bound_criterion(const std::vector<Instance>& instances) {
  const bool frozen = max_parents(178) == 5 && max_parents(30162) == 11 && max_parents_long(178) == 5 &&
                      max_parents_long(30162) == 11;
  int checked = 0, violations = 0;
  for (const auto& inst : instances) {
    if (inst.n > 4) continue;
    const auto ex = exhaustive_optimal(inst.data);
    for (VarSet p : ex.network.parents) {
      if (p.size() > max_parents(inst.N)) ++violations;
    }
    ++checked;
  }
  // Small N, where the bound actually binds below n - 1.
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t N = 3 + s % 10;
    const auto ex = exhaustive_optimal(bnsl::testing::random_network_data(4, N, 900 + s, 3, 3));
    for (VarSet p : ex.network.parents) {
      if (p.size() > max_parents(N)) ++violations;
    }
    ++checked;
  }
  report(6, "parent-count bound: max_parents(178)=5, max_parents(30162)=11, unrestricted optima obey it",
         frozen && violations == 0,
         std::string("bound values ") + (frozen ? "match" : "differ") + "; " + std::to_string(checked) +
             " exhaustive optima, " + std::to_string(violations) + " oversized parent sets");
}

void envelope_criterion() {
  // Shapes only: 14 columns x 178 rows and 17 columns x 435 rows.
  const auto wine = bnsl::testing::random_network_data(14, 178, 178, 2, 3);
  auto t0 = Clock::now();
  const auto r14 = learn(wine);
  const double s14 = since(t0);
  const auto votes = bnsl::testing::random_network_data(17, 435, 435, 2, 3);
  t0 = Clock::now();
  const auto r17 = learn(votes);
  const double s17 = since(t0);
  char detail[256];
  std::snprintf(detail, sizeof detail, "14 vars x 178 rows %.2f s (limit 60), 17 vars x 435 rows %.2f s (limit 600)",
                s14, s17);
  report(7, "desk-scale envelope", s14 < 60.0 && s17 < 600.0 && r14.network.is_acyclic() && r17.network.is_acyclic(),
         detail);
}

void frontier_criterion() {
  const int n = 14;
  const auto d = bnsl::testing::random_network_data(n, 500, 3141, 2, 3);
  int leftovers = 0, hooks = 0;
  LearnOptions opts;
  opts.upper = kInf;
  opts.on_layer_done = [&](int l, const storage::WorkDir& work) {
    ++hooks;
    for (int k = 0; k <= l; ++k) {
      if (std::filesystem::exists(work.order_file(k))) ++leftovers;
      for (int x = 0; x < n; ++x) {
        if (std::filesystem::exists(work.parents_file(x, k))) ++leftovers;
        if (std::filesystem::exists(work.scores_file(x, k))) ++leftovers;
      }
    }
  };
  const auto r = learn(d, opts);
  std::vector<std::uint64_t> disk;
  for (const auto& s : r.stats.layers) disk.push_back(s.disk_bytes);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < disk.size(); ++i) {
    if (disk[i] > disk[peak]) peak = i;
  }
  const bool rise_fall = peak > 0 && peak + 1 < disk.size() && disk.front() < disk[peak] && disk.back() < disk[peak];
  std::ostringstream csv;
  write_stats_csv(csv, r.stats);
  std::ostringstream profile;
  for (std::size_t i = 0; i < disk.size(); ++i) profile << (i ? " " : "") << disk[i] / 1024;
  report(8, "frontier files deleted per layer; disk profile rises and falls",
         leftovers == 0 && hooks == n && rise_fall,
         std::to_string(hooks) + " layer hooks, " + std::to_string(leftovers) + " stale files; disk KiB by layer: " +
             profile.str() + "; peak at layer " + std::to_string(peak));
}

}  // namespace

// --expect-red K: criterion K is reported but does not set the exit code.
int main(int argc, char** argv) {
  std::vector<int> expected_red;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--expect-red") expected_red.push_back(std::stoi(argv[++i]));
  }
  const auto instances = oracle_instances();
  oracle_criteria(instances);
  ddd_criterion(instances);
  score_engine_criterion();
  parent_bound_criterion(instances);
  envelope_criterion();
  frontier_criterion();
  int failed = 0, red = 0;
  for (const auto& v : verdicts) {
    if (v.ok) continue;
    if (std::find(expected_red.begin(), expected_red.end(), v.id) != expected_red.end()) {
      ++red;
    } else {
      ++failed;
    }
  }
  std::printf("%zu criteria, %d failed, %d failed as expected red\n", verdicts.size(), failed, red);
  return failed == 0 ? 0 : 1;
}
