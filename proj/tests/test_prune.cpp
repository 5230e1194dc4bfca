#include <gtest/gtest.h>

#include "apdc/exact.hpp"
#include "apdc/prune.hpp"
#include "support/oracles.hpp"

using namespace apdc;

namespace {

AuctionInstance two_ads() {
  return AuctionInstance({Ad{1, 1.0, 1.0, 0.5}, Ad{2, 0.8, 1.0, 0.2}}, SlotLadder(2, {1.0}));
}

// Random instance without repeated (vbar, c) pairs, so corner orders are strict.
AuctionInstance generic_instance(Xoshiro256& rng, std::size_t n, std::size_t k) {
  std::vector<Ad> ads;
  for (std::size_t i = 0; i < n; ++i)
    ads.push_back(Ad{static_cast<AdId>(i + 1), 0.1 + 2.0 * rng.uniform(), 0.05 + 0.95 * rng.uniform(), rng.uniform()});
  std::vector<double> lambdas(k);
  for (auto& l : lambdas) l = 0.3 + 0.7 * rng.uniform();
  return AuctionInstance(std::move(ads), SlotLadder(k, lambdas));
}

}  // namespace

TEST(WValue, HandValues) {
  const auto inst = two_ads();
  EXPECT_DOUBLE_EQ(w_value(inst.ad(0), inst.ad(1), 0.0, 0.0), 0.2);
  EXPECT_NEAR(w_value(inst.ad(0), inst.ad(1), 1.0, 1.4), 0.82, 1e-12);
}

TEST(WValue, Antisymmetric) {
  Xoshiro256 rng(31);
  for (int t = 0; t < 200; ++t) {
    const double va = rng.uniform(), ca = rng.uniform(), vb = rng.uniform(), cb = rng.uniform();
    const double x = rng.uniform(), y = 3.0 * rng.uniform();
    EXPECT_NEAR(w_value(va, ca, vb, cb, x, y), -w_value(vb, cb, va, ca, x, y), 1e-12);
    EXPECT_NEAR(w_value(va, ca, vb, cb, x, y), oracle::w(va, ca, vb, cb, x, y), 1e-12);
  }
}

TEST(Dominates, AllCornersPositive) {
  const auto inst = two_ads();
  const DominanceParams p{1.0, 1.4};
  EXPECT_NEAR(w_value(inst.ad(0), inst.ad(1), 0.0, 1.4), 0.62, 1e-12);
  EXPECT_NEAR(w_value(inst.ad(0), inst.ad(1), 1.0, 0.0), 0.4, 1e-12);
  EXPECT_TRUE(dominates(inst.ad(0), inst.ad(1), p));
  EXPECT_FALSE(dominates(inst.ad(1), inst.ad(0), p));
}

TEST(Dominates, IdenticalAdsDoNotDominate) {
  const Ad a{1, 1.0, 0.5, 0.4};
  const Ad b{2, 1.0, 0.5, 0.4};
  EXPECT_FALSE(dominates(a, b, DominanceParams{0.9, 2.0}));
  EXPECT_FALSE(dominates(b, a, DominanceParams{0.9, 2.0}));
}

TEST(Bounds, ConstLambdaHandValue) {
  EXPECT_DOUBLE_EQ(const_lambda_bound(two_ads()), 1.4);
}

TEST(Bounds, ConstLambdaHandlesContinuationOne) {
  AuctionInstance inst({Ad{1, 1.0, 1.0, 1.0}, Ad{2, 2.0, 1.0, 0.0}}, SlotLadder(2, {1.0}));
  EXPECT_DOUBLE_EQ(const_lambda_bound(inst), 3.0);
}

TEST(Bounds, DecoupleHandValues) {
  const auto ub = decouple_bounds(two_ads());
  ASSERT_EQ(ub.size(), 2u);
  EXPECT_DOUBLE_EQ(ub[0], 1.4);
  EXPECT_DOUBLE_EQ(ub[1], 1.0);
}

TEST(Bounds, ChooseBoundModes) {
  const auto inst = two_ads();
  EXPECT_DOUBLE_EQ(choose_bound(inst).bound, 1.4);
  EXPECT_DOUBLE_EQ(choose_bound(inst).lambda_max, 1.0);
  EXPECT_DOUBLE_EQ(choose_bound(inst, BoundMode::footnote).bound, 1.0);
}

TEST(Bounds, DecoupleMatchesDirectSummation) {
  Xoshiro256 rng(32);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(rng);
    const auto ub = decouple_bounds(inst);
    const auto ref = oracle::decouple(inst);
    ASSERT_EQ(ub.size(), ref.size());
    for (std::size_t k = 0; k < ub.size(); ++k) EXPECT_NEAR(ub[k], ref[k], 1e-12);
  }
}

TEST(Bounds, FftMatchesDirectForLongLadders) {
  Xoshiro256 rng(33);
  for (std::size_t k : {65u, 100u, 257u}) {
    std::vector<Ad> ads;
    for (std::size_t i = 0; i < k + 20; ++i) ads.push_back(Ad{static_cast<AdId>(i), rng.uniform(), rng.uniform(), rng.uniform()});
    std::vector<double> lambdas(k);
    for (auto& l : lambdas) l = 0.97 + 0.03 * rng.uniform();
    AuctionInstance inst(std::move(ads), SlotLadder(k, lambdas));
    const auto fft = decouple_bounds(inst, ConvolutionMethod::fft);
    const auto direct = decouple_bounds(inst, ConvolutionMethod::direct);
    for (std::size_t s = 0; s < k; ++s) {
      EXPECT_GE(fft[s], direct[s]) << "slot " << s;
      EXPECT_NEAR(fft[s], direct[s], 1e-6 * std::max(1.0, direct[s])) << "slot " << s;
    }
  }
}

TEST(BoundsProperty, AdmissibleForEveryMode) {
  Xoshiro256 rng(34);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(rng);
    const double opt = oracle::best_allocation(inst).value;
    for (BoundMode m : {BoundMode::const_lambda, BoundMode::decouple, BoundMode::min})
      EXPECT_GE(choose_bound(inst, m).bound, opt - 1e-12);
    EXPECT_LE(choose_bound(inst, BoundMode::min).bound, choose_bound(inst, BoundMode::decouple).bound);
  }
}

TEST(DominatorCounts, NaiveMatchesOracle) {
  Xoshiro256 rng(35);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_instance(rng);
    const auto p = choose_bound(inst);
    EXPECT_EQ(count_dominators_naive(inst, p), oracle::dominator_counts(inst, p.lambda_max, p.bound));
  }
}

TEST(DominatorCounts, FastMatchesNaive) {
  Xoshiro256 rng(36);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng.bounded(300);
    const auto inst = generic_instance(rng, n, 1 + rng.bounded(std::min<std::size_t>(n, 8)));
    const auto p = choose_bound(inst);
    const auto fast = count_dominators_fast(inst, p);
    EXPECT_FALSE(fast.fell_back);
    EXPECT_EQ(fast.counts, count_dominators_naive(inst, p)) << "trial " << t;
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(fast.from_higher_c[i] + fast.from_lower_eq_c[i], fast.counts[i]);
  }
}

TEST(DominatorCounts, FastSplitsByContinuation) {
  Xoshiro256 rng(37);
  const auto inst = generic_instance(rng, 60, 4);
  const auto p = choose_bound(inst);
  const auto fast = count_dominators_fast(inst, p);
  for (std::size_t a = 0; a < inst.num_ads(); ++a) {
    std::size_t higher = 0;
    for (std::size_t b = 0; b < inst.num_ads(); ++b)
      if (b != a && dominates(inst.ad(b), inst.ad(a), p) && inst.continuation(b) > inst.continuation(a)) ++higher;
    EXPECT_EQ(fast.from_higher_c[a], higher);
  }
}

TEST(DominatorCounts, DuplicatesFallBack) {
  AuctionInstance inst({Ad{1, 1.0, 0.5, 0.3}, Ad{2, 1.0, 0.5, 0.3}, Ad{3, 2.0, 0.5, 0.1}}, SlotLadder(2, {0.8}));
  const auto p = choose_bound(inst);
  const auto fast = count_dominators_fast(inst, p);
  EXPECT_TRUE(fast.fell_back);
  EXPECT_EQ(fast.counts, count_dominators_naive(inst, p));
}

TEST(DominanceProperty, Transitive) {
  Xoshiro256 rng(38);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.bounded(49);
    const auto inst = generic_instance(rng, n, 1 + rng.bounded(std::min<std::size_t>(n, 5)));
    const auto p = choose_bound(inst);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!dominates(inst.ad(a), inst.ad(b), p)) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (dominates(inst.ad(b), inst.ad(c), p)) {
            EXPECT_TRUE(dominates(inst.ad(a), inst.ad(c), p));
          }
      }
  }
}

TEST(Prune, ThirdAdIsDiscarded) {
  AuctionInstance inst({Ad{1, 3.0, 1.0, 0.5}, Ad{2, 2.0, 1.0, 0.5}, Ad{3, 1.0, 1.0, 0.5}}, SlotLadder(2, {0.5}));
  const auto r = prune_instance(inst);
  EXPECT_EQ(r.report.surviving, (std::vector<AdId>{1, 2}));
  EXPECT_EQ(r.report.discarded, (std::vector<AdId>{3}));
  EXPECT_EQ(r.report.dom_counts, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.reduced.num_ads(), 2u);

  PruneOptions strict;
  strict.rule = DiscardRule::more_than_k;
  EXPECT_TRUE(prune_instance(inst, strict).report.discarded.empty());
}

TEST(Prune, NothingDiscardedWhenAdsFitSlots) {
  Xoshiro256 rng(39);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.bounded(8);
    const auto inst = generic_instance(rng, n, n);
    EXPECT_TRUE(prune_instance(inst).report.discarded.empty());
  }
}

TEST(PruneProperty, PreservesOptimum) {
  Xoshiro256 rng(40);
  for (int t = 0; t < 300; ++t) {
    oracle::RandomSpec spec;
    spec.max_n = 10;
    spec.max_k = 4;
    const auto inst = oracle::random_instance(rng, spec);
    const double opt = oracle::best_allocation(inst).value;
    for (BoundMode m : {BoundMode::min, BoundMode::const_lambda, BoundMode::decouple, BoundMode::footnote}) {
      PruneOptions o;
      o.bound = m;
      const auto r = prune_instance(inst, o);
      EXPECT_NEAR(solve_exact(r.reduced).best_value, opt, 1e-9) << "trial " << t;
      EXPECT_EQ(r.report.surviving.size() + r.report.discarded.size(), inst.num_ads());
    }
  }
}

TEST(PruneProperty, BoundNeverIncreases) {
  Xoshiro256 rng(41);
  for (int t = 0; t < 50; ++t) {
    const auto inst = generic_instance(rng, 50 + rng.bounded(150), 2 + rng.bounded(4));
    PruneOptions o;
    o.fast = true;
    const auto r = prune_instance(inst, o);
    for (std::size_t i = 1; i < r.report.bound_history.size(); ++i)
      EXPECT_LE(r.report.bound_history[i], r.report.bound_history[i - 1]);
    EXPECT_EQ(r.report.bound_history.size(), r.report.iterations);
    EXPECT_EQ(r.report.surviving, prune_instance(inst).report.surviving);
  }
}
