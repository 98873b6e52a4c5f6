#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bnsl/varset.hpp"

namespace bnsl {
namespace {

VarSet of(std::initializer_list<int> xs) {
  VarSet s;
  for (int x : xs) s = s.with(x);
  return s;
}

// All size-k subsets of n elements, sorted by "compare largest differing
// element" (the definition of colexicographic order), computed without
// any ranking function.
std::vector<VarSet> colex_layer(int n, int k) {
  std::vector<VarSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (VarSet{m}.size() == k) out.push_back(VarSet{m});
  }
  std::sort(out.begin(), out.end(), [](VarSet a, VarSet b) {
    const VarSet diff{a.bits() ^ b.bits()};
    return diff.empty() ? false : b.contains(diff.max());
  });
  return out;
}

TEST(ColexRank, EmptySetIsZero) { EXPECT_EQ(colex_rank(VarSet{}).value, 0u); }

TEST(ColexRank, FollowsPrintedSizeTwoSequence) {
  // {X1,X2},{X1,X3},{X2,X3},{X1,X4},{X2,X4},{X3,X4}
  const std::vector<VarSet> seq = {of({0, 1}), of({0, 2}), of({1, 2}), of({0, 3}), of({1, 3}), of({2, 3})};
  for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_EQ(colex_rank(seq[i]).value, i);
  EXPECT_EQ(colex_rank(of({1, 2})).value, 2u);
}

TEST(ColexRank, MatchesEnumeratedOrderAndMaskOrder) {
  for (int n = 0; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto layer = colex_layer(n, k);
      ASSERT_EQ(layer.size(), layer_size(n, k));
      for (std::size_t i = 0; i < layer.size(); ++i) {
        EXPECT_EQ(colex_rank(layer[i]).value, i);
        if (i > 0) EXPECT_LT(layer[i - 1].bits(), layer[i].bits());
      }
    }
  }
}

TEST(ColexUnrank, Examples) {
  EXPECT_EQ(colex_unrank(LayerRank{0}, 0, 4), VarSet{});
  EXPECT_EQ(colex_unrank(LayerRank{5}, 2, 4), of({2, 3}));
  EXPECT_THROW(colex_unrank(LayerRank{6}, 2, 4), std::out_of_range);
}

TEST(ColexUnrank, RoundTripsEveryLayerOfSix) {
  for (int k = 0; k <= 6; ++k) {
    for (std::uint64_t r = 0; r < layer_size(6, k); ++r) {
      const VarSet s = colex_unrank(LayerRank{r}, k, 6);
      EXPECT_EQ(s.size(), k);
      EXPECT_TRUE(s.is_subset_of(VarSet::full(6)));
      EXPECT_EQ(colex_rank(s).value, r);
    }
  }
}

TEST(Successors, Examples) {
  auto s = successors(VarSet{}, 3);
  ASSERT_EQ(s.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s[static_cast<std::size_t>(i)].added, i);
    EXPECT_EQ(s[static_cast<std::size_t>(i)].set, VarSet::singleton(i));
  }
  s = successors(of({0, 2}), 4);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].added, 1);
  EXPECT_EQ(s[0].set, of({0, 1, 2}));
  EXPECT_EQ(s[1].added, 3);
  EXPECT_EQ(s[1].set, of({0, 2, 3}));
  EXPECT_TRUE(successors(VarSet::full(5), 5).empty());
}

TEST(LayerSize, Examples) {
  EXPECT_EQ(layer_size(4, 2), 6u);
  EXPECT_EQ(layer_size(9, 0), 1u);
  EXPECT_EQ(layer_size(33, 16), 1166803110u);
  EXPECT_EQ(layer_size(63, 31), 916312070471295267u);
  EXPECT_EQ(binomial(64, 32), 1832624140942590534u);
  EXPECT_THROW(binomial(65, 1), std::overflow_error);
  EXPECT_THROW(layer_size(4, 5), std::invalid_argument);
}

TEST(ColexProperties, CanonicalPredecessorHasSmallestRank) {
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const VarSet s{m};
      const auto canonical = colex_rank(s.without(s.max())).value;
      s.for_each([&](int y) {
        if (y != s.max()) EXPECT_LT(canonical, colex_rank(s.without(y)).value);
      });
    }
  }
}

TEST(ColexProperties, FilteringALayerGivesParentQueues) {
  const auto layer = colex_layer(4, 2);
  std::vector<VarSet> queue;
  for (VarSet s : layer) {
    if (!s.contains(0)) queue.push_back(s);
  }
  EXPECT_EQ(queue, (std::vector<VarSet>{of({1, 2}), of({1, 3}), of({2, 3})}));
  // Relative order is preserved for every variable and layer.
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int x = 0; x < n; ++x) {
        std::uint64_t prev = 0;
        bool first = true;
        for (VarSet s : colex_layer(n, k)) {
          if (s.contains(x)) continue;
          if (!first) EXPECT_LT(prev, colex_rank(s).value);
          prev = colex_rank(s).value;
          first = false;
        }
      }
    }
  }
}

TEST(ColexProperties, CanonicalGenerationArrivesInNeedOrder) {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k < n; ++k) {
      std::vector<VarSet> generated;
      for (VarSet u : colex_layer(n, k)) {
        for (const auto& s : successors(u, n)) {
          if (u.empty() || s.added > u.max()) generated.push_back(s.set);
        }
      }
      ASSERT_EQ(generated.size(), layer_size(n, k + 1));
      for (std::size_t i = 1; i < generated.size(); ++i) {
        const VarSet a = generated[i - 1];
        const VarSet b = generated[i];
        EXPECT_LT(colex_rank(a.without(a.max())).value * 64 + static_cast<std::uint64_t>(a.max()),
                  colex_rank(b.without(b.max())).value * 64 + static_cast<std::uint64_t>(b.max()));
      }
    }
  }
}

TEST(ColexProperties, CanonicalGenerationIsNotColexSorted) {
  // {X1} generates {X1,X4} before {X2} generates {X2,X3}, yet {X2,X3} has
  // the smaller rank; consumers must key on the predecessor, not the set.
  EXPECT_LT(colex_rank(of({1, 2})).value, colex_rank(of({0, 3})).value);
}

}  // namespace
}  // namespace bnsl
