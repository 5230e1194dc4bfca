#include <gtest/gtest.h>

#include "apdc/exact.hpp"
#include "support/oracles.hpp"

using namespace apdc;

TEST(SolveExact, TwoAdHandExample) {
  AuctionInstance inst({Ad{1, 1.0, 1.0, 0.5}, Ad{2, 0.8, 1.0, 0.2}}, SlotLadder(2, {1.0}));
  const auto r = solve_exact(inst);
  EXPECT_DOUBLE_EQ(r.best_value, 1.4);
  EXPECT_EQ(r.best_alloc.slots, (std::vector<AdId>{1, 2}));
  EXPECT_TRUE(r.complete);
  EXPECT_GT(r.nodes_explored, 0u);
}

TEST(SolveExact, SingleSlotTakesLargestVbar) {
  AuctionInstance inst({Ad{1, 1.0, 0.3, 0.9}, Ad{2, 2.0, 0.2, 0.1}, Ad{3, 0.5, 1.0, 0.0}}, SlotLadder(1, {}));
  const auto r = solve_exact(inst);
  EXPECT_DOUBLE_EQ(r.best_value, 0.5);
  EXPECT_EQ(r.best_alloc.slots, (std::vector<AdId>{3}));
}

TEST(SolveExact, ZeroContinuationAdGoesLast) {
  AuctionInstance inst({Ad{1, 1, 1, 0}, Ad{2, 1, 1, 1}, Ad{3, 1, 1, 1}}, SlotLadder(2, {1.0}));
  const auto r = solve_exact(inst);
  EXPECT_DOUBLE_EQ(r.best_value, 2.0);
  // Optima: [2,1], [2,3], [3,1], [3,2]; smallest id sequence wins.
  EXPECT_EQ(r.best_alloc.slots, (std::vector<AdId>{2, 1}));
}

TEST(SolveExact, TiesResolveToSmallestIdSequence) {
  AuctionInstance inst({Ad{7, 1, 1, 1}, Ad{3, 1, 1, 1}, Ad{5, 1, 1, 1}}, SlotLadder(2, {0.5}));
  EXPECT_EQ(solve_exact(inst).best_alloc.slots, (std::vector<AdId>{3, 5}));
}

TEST(SolveExact, RefusesLargeInstancesWithoutBudget) {
  std::vector<Ad> ads;
  for (int i = 0; i < 21; ++i) ads.push_back(Ad{i, 1.0, 0.5, 0.5});
  AuctionInstance inst(ads, SlotLadder(3, {0.5, 0.5}));
  try {
    solve_exact(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::instance_too_large);
  }
  ExactOptions opts;
  opts.node_budget = 1'000'000;
  EXPECT_NO_THROW(solve_exact(inst, opts));
}

TEST(SolveExact, BudgetExhaustionIsFlagged) {
  Xoshiro256 rng(3);
  std::vector<Ad> ads;
  for (int i = 0; i < 14; ++i) ads.push_back(Ad{i, rng.uniform(), 1.0, rng.uniform()});
  AuctionInstance inst(ads, SlotLadder(6, {0.9, 0.9, 0.9, 0.9, 0.9}));
  ExactOptions opts;
  opts.node_budget = 5;
  const auto r = solve_exact(inst, opts);
  EXPECT_FALSE(r.complete);
  EXPECT_LE(r.nodes_explored, 5u);
  EXPECT_EQ(r.best_alloc.size(), 6u);
  EXPECT_LE(r.best_value, solve_exact(inst).best_value);
}

TEST(EnumerateAll, Counts) {
  AuctionInstance two({Ad{1, 1, 1, 0.5}, Ad{2, 0.8, 1, 0.2}}, SlotLadder(2, {1.0}));
  EXPECT_EQ(enumerate_all(two).size(), 5u);
  AuctionInstance three({Ad{1, 1, 1, 0.5}, Ad{2, 0.8, 1, 0.2}, Ad{3, 0.1, 1, 0.1}}, SlotLadder(2, {1.0}));
  const auto all = enumerate_all(three);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_TRUE(all.front().first.empty());
  for (const auto& [alloc, value] : all) EXPECT_DOUBLE_EQ(value, social_welfare(three, alloc));
}

TEST(EnumerateAll, RefusesMoreThanTenAds) {
  std::vector<Ad> ads;
  for (int i = 0; i < 11; ++i) ads.push_back(Ad{i, 1, 1, 1});
  EXPECT_THROW(enumerate_all(AuctionInstance(ads, SlotLadder(1, {}))), Error);
}

TEST(SolveExactProperty, MatchesBruteForce) {
  Xoshiro256 rng(21);
  for (int t = 0; t < 400; ++t) {
    const auto inst = oracle::random_instance(rng);
    const auto r = solve_exact(inst);
    const auto truth = oracle::best_allocation(inst);
    ASSERT_NEAR(r.best_value, truth.value, 1e-9) << "trial " << t;
    EXPECT_EQ(r.best_alloc.size(), inst.num_slots());
    EXPECT_DOUBLE_EQ(r.best_value, social_welfare(inst, r.best_alloc));

    double enumerated = 0.0;
    enumerate_all(inst, [&](const Allocation&, double v) { enumerated = std::max(enumerated, v); });
    EXPECT_NEAR(enumerated, truth.value, 1e-9);
  }
}

TEST(SolveExactProperty, FullLengthAllocationsSuffice) {
  Xoshiro256 rng(22);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(rng);
    EXPECT_NEAR(oracle::best_full_length(inst), oracle::best_allocation(inst).value, 1e-12);
  }
}

TEST(SolveExactProperty, MediumInstancesMatchBruteForce) {
  Xoshiro256 rng(23);
  for (int t = 0; t < 30; ++t) {
    oracle::RandomSpec spec;
    spec.min_n = 12;
    spec.max_n = 16;
    spec.max_k = 4;
    const auto inst = oracle::random_instance(rng, spec);
    EXPECT_NEAR(solve_exact(inst).best_value, oracle::best_allocation(inst).value, 1e-9);
  }
}
