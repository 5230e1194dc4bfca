#include <gtest/gtest.h>

#include "apdc/mechanisms.hpp"
#include "support/oracles.hpp"

using namespace apdc;

namespace {

AuctionInstance uniform(std::size_t n, std::size_t k, double v, double c, double lambda) {
  std::vector<Ad> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(Ad{static_cast<AdId>(i + 1), v, 1.0, c});
  return AuctionInstance(std::move(ads), SlotLadder(k, std::vector<double>(k - 1, lambda)));
}

std::vector<std::vector<double>> value_grids(const AuctionInstance& inst, int points) {
  std::vector<std::vector<double>> grids;
  for (const Ad& ad : inst.ads()) {
    std::vector<double> g;
    for (int j = 0; j < points; ++j) g.push_back(2.0 * ad.value * j / (points - 1));
    grids.push_back(std::move(g));
  }
  return grids;
}

}  // namespace

TEST(Gsp, LastWinnerCanPayWithoutClicks) {
  const auto inst = uniform(3, 2, 1.0, 0.0, 1.0);
  const auto out = gsp_outcome(inst, BidProfile::truthful(inst));
  EXPECT_EQ(out.alloc.slots, (std::vector<AdId>{1, 2}));
  EXPECT_DOUBLE_EQ(out.payments[1], 1.0);
  EXPECT_DOUBLE_EQ(out.utilities[1], -1.0);
  EXPECT_FALSE(out.per_click[1].has_value());
  EXPECT_FALSE(out.per_click[2].has_value());
  EXPECT_TRUE(out.per_click[0].has_value());
}

TEST(Gsp, OverbiddingExampleValues) {
  const double e = 0.1;
  AuctionInstance inst({Ad{1, e, 1.0, e}, Ad{2, 1.0, 1.0, 1.0 - e}}, SlotLadder(2, {1.0}));
  const auto out = gsp_outcome(inst, BidProfile{{1.0 / e, e * e / 2.0}});
  EXPECT_NEAR(out.sw, 0.2, 1e-12);
  EXPECT_NEAR(out.utilities[0], 0.095, 1e-12);
  EXPECT_NEAR(out.utilities[1], 0.1, 1e-12);
  EXPECT_NEAR(out.revenue, e * e / 2.0, 1e-12);
}

TEST(Gsp, SingleBidderPaysNothing) {
  AuctionInstance inst({Ad{5, 2.0, 0.5, 0.5}}, SlotLadder(1, {}));
  const auto out = gsp_outcome(inst, BidProfile::truthful(inst));
  EXPECT_EQ(out.alloc.slots, (std::vector<AdId>{5}));
  EXPECT_DOUBLE_EQ(out.payments[0], 0.0);
  EXPECT_DOUBLE_EQ(out.utilities[0], 1.0);
}

TEST(Gsp, RankingByQuality) {
  AuctionInstance inst({Ad{1, 1.0, 0.2, 0.5}, Ad{2, 0.9, 1.0, 0.5}}, SlotLadder(1, {}));
  const BidProfile bids = BidProfile::truthful(inst);
  EXPECT_EQ(gsp_outcome(inst, bids).alloc.slots, (std::vector<AdId>{1}));
  EXPECT_EQ(gsp_outcome(inst, bids, GspOptions{true}).alloc.slots, (std::vector<AdId>{2}));
}

TEST(Gsp, RejectsBadBids) {
  const auto inst = uniform(2, 2, 1.0, 0.5, 0.5);
  EXPECT_THROW(gsp_outcome(inst, BidProfile{{1.0}}), Error);
  EXPECT_THROW(gsp_outcome(inst, BidProfile{{1.0, -0.5}}), Error);
  EXPECT_THROW(gsp_outcome(inst, BidProfile{{1.0, std::nan("")}}), Error);
}

TEST(VcgPdc, HandValues) {
  AuctionInstance inst({Ad{1, 1.0, 1.0, 1.0}, Ad{2, 0.0, 1.0, 0.5}}, SlotLadder(2, {0.5}));
  const auto out = vcg_pdc_outcome(inst, BidProfile{{1.0, 0.5}});
  EXPECT_DOUBLE_EQ(out.payments[0], 0.25);
  EXPECT_DOUBLE_EQ(out.utilities[0], 0.75);
  EXPECT_DOUBLE_EQ(out.revenue, 0.25);
}

TEST(VcgPdc, ZeroBidsPayNothing) {
  const auto inst = uniform(4, 3, 1.0, 0.5, 0.5);
  const auto out = vcg_pdc_outcome(inst, BidProfile{{0.0, 0.0, 0.0, 0.0}});
  for (double p : out.payments) EXPECT_DOUBLE_EQ(p, 0.0);
}

TEST(VcgPdc, PaymentsIgnoreContinuations) {
  Xoshiro256 rng(71);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng);
    std::vector<Ad> ads = inst.ads();
    for (auto& ad : ads) ad.continuation = rng.uniform();
    const AuctionInstance other(ads, inst.ladder());
    const BidProfile bids = BidProfile::truthful(inst);
    EXPECT_EQ(vcg_pdc_outcome(inst, bids).payments, vcg_pdc_outcome(other, bids).payments);
    EXPECT_EQ(vcg_pdc_outcome(inst, bids).alloc.slots, vcg_pdc_outcome(other, bids).alloc.slots);
  }
}

TEST(VcgApdc, ZeroRevenueWhenNoOneIsDisplaced) {
  AuctionInstance inst({Ad{1, 1.0, 1.0, 1.0}, Ad{2, 1.0 / 3.0, 1.0, 0.5}}, SlotLadder(2, {1.0}));
  const auto out = vcg_apdc_outcome(inst, BidProfile::truthful(inst));
  EXPECT_EQ(out.alloc.slots, (std::vector<AdId>{1, 2}));
  EXPECT_NEAR(out.revenue, 0.0, 1e-12);
}

TEST(VcgApdc, ClarkePaymentByHand) {
  // Three identical ads, K = 2, lambda 1/2, c = 1. Without ad 1, ad 2 moves up
  // and ad 3 enters: 1.5 against 0.5. Without ad 2, ad 3 takes slot 2.
  const auto inst = uniform(3, 2, 1.0, 1.0, 0.5);
  const auto out = vcg_apdc_outcome(inst, BidProfile::truthful(inst));
  EXPECT_EQ(out.alloc.slots, (std::vector<AdId>{1, 2}));
  EXPECT_NEAR(out.payments[0], 1.0, 1e-12);
  EXPECT_NEAR(out.payments[1], 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(out.payments[2], 0.0);
}

TEST(VcgApdcProperty, IndividuallyRationalAndNoSubsidy) {
  Xoshiro256 rng(72);
  for (AllocatorKind kind : {AllocatorKind::exact, AllocatorKind::colored, AllocatorKind::sorted}) {
    for (int t = 0; t < 60; ++t) {
      oracle::RandomSpec spec;
      spec.max_n = 6;
      const auto inst = oracle::random_instance(rng, spec);
      VcgApdcOptions o;
      o.allocator = kind;
      o.seed = rng();
      const auto out = vcg_apdc_outcome(inst, BidProfile::truthful(inst), o);
      double sum = 0.0;
      for (std::size_t i = 0; i < inst.num_ads(); ++i) {
        EXPECT_GE(out.utilities[i], -1e-12);
        EXPECT_GE(out.payments[i], -1e-12);
        sum += out.payments[i];
      }
      EXPECT_NEAR(out.revenue, sum, 1e-12);
      EXPECT_NEAR(out.sw, social_welfare(inst, out.alloc), 1e-12);
    }
  }
}

TEST(VcgApdcProperty, ExactAllocatorIsOptimal) {
  Xoshiro256 rng(73);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng);
    EXPECT_NEAR(vcg_apdc_outcome(inst, BidProfile::truthful(inst)).sw, oracle::best_allocation(inst).value, 1e-9);
  }
}

TEST(VcgApdcProperty, TruthfulOnGrid) {
  Xoshiro256 rng(74);
  for (AllocatorKind kind : {AllocatorKind::exact, AllocatorKind::colored, AllocatorKind::sorted}) {
    for (int t = 0; t < 12; ++t) {
      oracle::RandomSpec spec;
      spec.max_n = 5;
      const auto inst = oracle::random_instance(rng, spec);
      VcgApdcOptions o;
      o.allocator = kind;
      o.seed = rng();
      o.color_iterations = 20;
      o.random_orders = 10;
      const auto check = is_nash(inst, BidProfile::truthful(inst), vcg_apdc_mechanism(o), value_grids(inst, 11));
      EXPECT_TRUE(check.nash) << "trial " << t << " agent " << (check.best_deviation ? check.best_deviation->id : 0)
                              << " gain " << (check.best_deviation ? check.best_deviation->gain() : 0.0);
    }
  }
}

TEST(IsNash, DetectsProfitableDeviation) {
  const auto inst = uniform(3, 2, 1.0, 0.0, 1.0);
  const auto bids = BidProfile::truthful(inst);
  const auto r = is_nash(inst, bids, gsp_mechanism(), {{1.0}, {0.0, 1.0}, {1.0}});
  ASSERT_FALSE(r.nash);
  ASSERT_TRUE(r.best_deviation.has_value());
  EXPECT_EQ(r.best_deviation->id, 2);
  EXPECT_DOUBLE_EQ(r.best_deviation->bid, 0.0);
  EXPECT_DOUBLE_EQ(r.best_deviation->gain(), 1.0);
}

TEST(IsNash, EmptyGridsAreNash) {
  const auto inst = uniform(3, 2, 1.0, 0.0, 1.0);
  EXPECT_TRUE(is_nash(inst, BidProfile::truthful(inst), gsp_mechanism(), {{}, {}, {}}).nash);
  EXPECT_THROW(is_nash(inst, BidProfile::truthful(inst), gsp_mechanism(), {{}, {}}), Error);
}

TEST(Outcome, RevenueIsSumOfPayments) {
  Xoshiro256 rng(75);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng);
    BidProfile bids;
    for (std::size_t i = 0; i < inst.num_ads(); ++i) bids.bids.push_back(2.0 * rng.uniform());
    for (const auto& mech : {gsp_mechanism(), vcg_pdc_mechanism(), vcg_apdc_mechanism()}) {
      const auto out = mech(inst, bids);
      double sum = 0.0;
      for (std::size_t i = 0; i < inst.num_ads(); ++i) {
        sum += out.payments[i];
        const auto slot = slot_of(inst, out.alloc, inst.ad(i).id);
        const double c = slot ? ctr(inst, out.alloc, inst.ad(i).id) : 0.0;
        EXPECT_NEAR(out.utilities[i], inst.ad(i).value * c - out.payments[i], 1e-12);
        if (c > 0.0) {
          ASSERT_TRUE(out.per_click[i].has_value());
          EXPECT_NEAR(*out.per_click[i] * c, out.payments[i], 1e-12);
        } else {
          EXPECT_FALSE(out.per_click[i].has_value());
        }
      }
      EXPECT_NEAR(out.revenue, sum, 1e-12);
    }
  }
}
