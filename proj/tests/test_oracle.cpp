#include <gtest/gtest.h>

#include "bnsl/error.hpp"
#include "bnsl/oracle.hpp"
#include "bnsl/scorer.hpp"
#include "support/random_data.hpp"

namespace bnsl {
namespace {

using testing::close_rel;

TEST(Oracle, SingleVariable) {
  const auto d = testing::random_uniform_data(1, 20, 1);
  EXPECT_DOUBLE_EQ(dp_optimal(d).score, mdl_score_direct(d, 0, {}));
  EXPECT_DOUBLE_EQ(exhaustive_optimal(d).score, mdl_score_direct(d, 0, {}));
}

TEST(Oracle, TwoVariablesByHand) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = testing::random_network_data(2, 50, seed);
    const double none = mdl_score_direct(d, 0, {}) + mdl_score_direct(d, 1, {});
    const double forward = mdl_score_direct(d, 0, {}) + mdl_score_direct(d, 1, VarSet::singleton(0));
    const double backward = mdl_score_direct(d, 1, {}) + mdl_score_direct(d, 0, VarSet::singleton(1));
    const double best = std::min({none, forward, backward});
    EXPECT_TRUE(close_rel(dp_optimal(d).score, best));
    EXPECT_TRUE(close_rel(exhaustive_optimal(d).score, best));
  }
}

TEST(Oracle, DpAgreesWithExhaustive) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 2);
    const auto d = testing::random_network_data(n, 20 + 15 * seed, seed, 3, 3);
    const auto dp = dp_optimal(d);
    const auto ex = exhaustive_optimal(d);
    EXPECT_TRUE(close_rel(dp.score, ex.score)) << "seed " << seed;
    EXPECT_TRUE(dp.network.is_acyclic());
    EXPECT_TRUE(close_rel(network_score(dp.network, d), dp.score));
    EXPECT_TRUE(close_rel(network_score(ex.network, d), ex.score));
  }
}

// The unrestricted optimum never needs more parents than max_parents(N),
// including at tiny N where the bound is 1.
TEST(Oracle, ParentBoundHoldsOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t N = 3 + seed % 12;
    const auto d = testing::random_network_data(4, N, seed, 3, 3);
    const auto ex = exhaustive_optimal(d);
    for (VarSet p : ex.network.parents) EXPECT_LE(p.size(), max_parents(N)) << "N " << N;
  }
}

TEST(Oracle, RefusesOverCap) {
  const auto d = testing::random_uniform_data(5, 20, 1);
  EXPECT_THROW(exhaustive_optimal(d), Error);
  EXPECT_THROW(dp_optimal(d, 4), Error);
}

}  // namespace
}  // namespace bnsl
