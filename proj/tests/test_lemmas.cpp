#include <gtest/gtest.h>

#include <set>

#include "apdc/lemmas.hpp"

using namespace apdc;

namespace {

// Entries whose stated values hold as constructed.
const std::vector<std::string> kConsistent = {
    "gsp-not-ir",   "gsp-sw-poa-ovb",   "gsp-rev-poa",       "gsp-sw-pos",        "gsp-rev-pos",
    "vcgpd-not-ir", "vcgpd-sw-poa-ovb", "vcgpd-sw-pos",      "vcgpd-rev-pos-ovb", "vcgpd-rev-pos-noovb"};

std::string failures(const std::vector<AssertionResult>& rs) {
  std::string s;
  for (const auto& r : rs)
    if (!r.passed) s += r.label + " (" + r.detail + "); ";
  return s;
}

}  // namespace

TEST(Catalog, ThirteenDistinctNames) {
  const auto& names = lemma_names();
  EXPECT_EQ(names.size(), 13u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 13u);
  for (const auto& n : names) EXPECT_NO_THROW(lemma_instance(n)) << n;
}

TEST(Catalog, UnknownName) {
  try {
    lemma_instance("gsp-nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_lemma);
  }
}

TEST(Catalog, InvalidEps) {
  for (double e : {0.0, 1.0, -0.1, 2.0, std::nan("")}) {
    LemmaParams p;
    p.eps = e;
    EXPECT_THROW(lemma_instance("gsp-sw-poa-ovb", p), Error);
    EXPECT_THROW(lemma_instance("gsp-rev-poa", p), Error);
  }
}

TEST(Catalog, InvalidSizes) {
  LemmaParams p;
  p.n = 2;
  p.k = 2;
  EXPECT_THROW(lemma_instance("gsp-not-ir", p), Error);
  p.n = 3;
  EXPECT_THROW(lemma_instance("gsp-rev-pos", p), Error);
  EXPECT_THROW(lemma_instance("vcgpd-rev-poa", p), Error);
  p.n = 11;
  p.k = 4;
  EXPECT_THROW(lemma_instance("gsp-sw-pos", p), Error);
}

TEST(Catalog, EpsDependence) {
  EXPECT_TRUE(lemma_uses_eps("gsp-sw-poa-ovb"));
  EXPECT_TRUE(lemma_uses_eps("gsp-rev-poa"));
  EXPECT_FALSE(lemma_uses_eps("gsp-rev-pos"));
}

TEST(Verify, ConsistentEntriesPassForEveryEps) {
  for (const auto& name : kConsistent)
    for (double e : {0.5, 0.1, 0.01}) {
      LemmaParams p;
      p.eps = e;
      const auto rs = verify(lemma_instance(name, p));
      EXPECT_FALSE(rs.empty());
      EXPECT_TRUE(all_passed(rs)) << name << " eps=" << e << ": " << failures(rs);
    }
}

TEST(Verify, ConsistentEntriesPassAtOtherSizes) {
  for (const auto& name : {"gsp-not-ir", "vcgpd-not-ir", "gsp-sw-pos", "vcgpd-sw-pos", "gsp-rev-poa",
                           "vcgpd-rev-pos-noovb"})
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{4, 2}, {4, 3}, {6, 3}}) {
      LemmaParams p;
      p.n = n;
      p.k = k;
      const auto rs = verify(lemma_instance(name, p));
      EXPECT_TRUE(all_passed(rs)) << name << " N=" << n << " K=" << k << ": " << failures(rs);
    }
}

TEST(Verify, ReportsDetailOnFailure) {
  LemmaInstance L = lemma_instance("gsp-rev-pos");
  L.assertions.push_back(detail::expect_near("forced", [] { return 1.0; }, 2.0));
  const auto rs = verify(L);
  EXPECT_FALSE(all_passed(rs));
  EXPECT_FALSE(rs.back().passed);
  EXPECT_NE(rs.back().detail.find("expected 2"), std::string::npos) << rs.back().detail;
}

TEST(Verify, ToleranceIsRelative) {
  const auto big = detail::expect_near("big", [] { return 1e6 + 1e-4; }, 1e6).check();
  EXPECT_TRUE(big.passed);
  const auto small = detail::expect_near("small", [] { return 1e-8; }, 0.0).check();
  EXPECT_FALSE(small.passed);
}
