#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "apdc/rng.hpp"

using namespace apdc;

TEST(SplitMix, ReferenceOutput) {
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(splitmix64(s), 0x6E789E6AA1B965F4ull);
}

TEST(Xoshiro, DeterministicPerSeed) {
  Xoshiro256 a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Xoshiro, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Xoshiro, UniformAndBoundedRanges) {
  Xoshiro256 rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++hist[rng.bounded(7)];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Xoshiro, DistributionMoments) {
  Xoshiro256 rng(2);
  const int n = 200000;
  double sn = 0, sn2 = 0, sb = 0, sg = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sb += rng.beta(2.0, 5.0);
    sg += rng.gamma(0.5);
  }
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  EXPECT_NEAR(sb / n, 2.0 / 7.0, 0.005);
  EXPECT_NEAR(sg / n, 0.5, 0.01);
}

TEST(Xoshiro, TruncatedNormalRespectsLowerBound) {
  Xoshiro256 rng(3);
  for (int i = 0; i < 10000; ++i) EXPECT_GE(rng.truncated_normal(0.1, 1.0, 0.0), 0.0);
}

TEST(Xoshiro, ShuffleIsPermutation) {
  Xoshiro256 rng(4);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(std::span<int>(v));
  auto s = v;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(s[i], i);
}
