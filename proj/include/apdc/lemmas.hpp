#pragma once

// Catalog of small witness instances for the inefficiency of GSP and of VCG
// under the position-dependent cascade, relative to VCG under APDC. Each
// entry bundles an instance, a bid profile and checkable claims about it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "apdc/error.hpp"
#include "apdc/exact.hpp"
#include "apdc/mechanisms.hpp"
#include "apdc/model.hpp"

namespace apdc {

struct LemmaParams {
  double eps = 0.1;
  std::size_t n = 0;  // 0 picks the entry's default
  std::size_t k = 0;
};

struct AssertionResult {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct LemmaAssertion {
  std::string label;
  std::function<AssertionResult()> check;
};

struct LemmaInstance {
  std::string name;
  LemmaParams params;
  AuctionInstance instance;
  BidProfile bids;
  std::vector<LemmaAssertion> assertions;
};

inline constexpr double kLemmaTolerance = 1e-9;

inline const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names = {
      "gsp-not-ir",         "gsp-sw-poa-ovb",     "gsp-sw-poa-noovb",  "gsp-rev-poa",
      "gsp-sw-pos",         "gsp-rev-pos",        "vcgpd-not-ir",      "vcgpd-sw-poa-ovb",
      "vcgpd-sw-poa-noovb", "vcgpd-rev-poa",      "vcgpd-sw-pos",      "vcgpd-rev-pos-ovb",
      "vcgpd-rev-pos-noovb"};
  return names;
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

inline LemmaAssertion expect_near(std::string label, std::function<double()> actual, double expected,
                                  double tol = kLemmaTolerance) {
  return {label, [label, actual, expected, tol] {
            const double a = actual();
            const bool ok = std::abs(a - expected) <= tol * std::max(1.0, std::abs(expected));
            return AssertionResult{label, ok, "actual " + fmt(a) + ", expected " + fmt(expected)};
          }};
}

inline LemmaAssertion expect_true(std::string label, std::function<bool()> pred, std::string what) {
  return {label, [label, pred, what] { return AssertionResult{label, pred(), what}; }};
}

inline LemmaAssertion expect_nash(std::string label, const AuctionInstance& inst, const BidProfile& bids, Mechanism mech,
                                  std::vector<std::vector<double>> grids, bool want) {
  return {label, [label, inst, bids, mech, grids, want] {
            const NashCheck r = is_nash(inst, bids, mech, grids);
            std::string detail = r.nash ? "no profitable grid deviation" : "";
            if (r.best_deviation) {
              const Deviation& d = *r.best_deviation;
              detail = "ad " + std::to_string(d.id) + " bidding " + fmt(d.bid) + " moves utility " +
                       fmt(d.utility_before) + " -> " + fmt(d.utility_after);
            }
            return AssertionResult{label, r.nash == want, detail};
          }};
}

inline AuctionInstance uniform_instance(std::size_t n, std::size_t k, double value, double cont, double lambda) {
  std::vector<Ad> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(Ad{static_cast<AdId>(i + 1), value, 1.0, cont});
  return AuctionInstance(std::move(ads), SlotLadder(k, std::vector<double>(k - 1, lambda)));
}

inline Allocation first_k(std::size_t k) {
  Allocation a;
  for (std::size_t i = 0; i < k; ++i) a.slots.push_back(static_cast<AdId>(i + 1));
  return a;
}

inline std::vector<std::vector<double>> same_grid(std::size_t n, std::vector<double> grid) {
  return std::vector<std::vector<double>>(n, std::move(grid));
}

inline std::string show(const Allocation& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a.slots[i]);
  return s + "]";
}

inline LemmaAssertion expect_alloc(std::string label, std::function<Allocation()> actual, Allocation expected) {
  return {label, [label, actual, expected] {
            const Allocation a = actual();
            return AssertionResult{label, a.slots == expected.slots, "actual " + show(a) + ", expected " + show(expected)};
          }};
}

struct Sizes {
  std::size_t n, k;
};

// N > K >= 2 entries.
inline Sizes more_ads_than_slots(const LemmaParams& p, std::size_t dn, std::size_t dk) {
  const std::size_t k = p.k ? p.k : dk;
  const std::size_t n = p.n ? p.n : std::max(dn, k + 1);
  if (k < 2 || n <= k) throw Error(ErrorCode::invalid_params, "this entry needs N > K >= 2");
  if (n > 10) throw Error(ErrorCode::invalid_params, "this entry supports N <= 10");
  return {n, k};
}

// N == K >= 2 entries.
inline Sizes as_many_ads_as_slots(const LemmaParams& p, std::size_t dk) {
  const std::size_t k = p.k ? p.k : (p.n ? p.n : dk);
  const std::size_t n = p.n ? p.n : k;
  if (k < 2 || n != k) throw Error(ErrorCode::invalid_params, "this entry needs N == K >= 2");
  if (n > 10) throw Error(ErrorCode::invalid_params, "this entry supports N <= 10");
  return {n, k};
}

inline Sizes exactly_two(const LemmaParams& p) {
  if ((p.n && p.n != 2) || (p.k && p.k != 2)) throw Error(ErrorCode::invalid_params, "this entry is fixed at N = K = 2");
  return {2, 2};
}

inline double check_eps(const LemmaParams& p) {
  if (!(p.eps > 0.0 && p.eps < 1.0)) throw Error(ErrorCode::invalid_params, "eps must lie in (0,1)");
  return p.eps;
}

inline double apdc_optimum(const AuctionInstance& inst) { return solve_exact(inst).best_value; }

inline double total(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace detail

inline LemmaInstance lemma_instance(std::string_view name, const LemmaParams& params = {}) {
  using namespace detail;
  LemmaInstance L;
  L.name = std::string(name);
  L.params = params;
  auto& A = L.assertions;
  const Mechanism gsp = gsp_mechanism();
  const Mechanism pdc = vcg_pdc_mechanism();
  const Mechanism apdc = vcg_apdc_mechanism();

  if (name == "gsp-not-ir" || name == "vcgpd-not-ir") {
    const auto [n, k] = more_ads_than_slots(params, 3, 2);
    L.instance = uniform_instance(n, k, 1.0, 0.0, 1.0);
    L.bids = BidProfile::truthful(L.instance);
    const Mechanism mech = name == "gsp-not-ir" ? gsp : pdc;
    const auto inst = L.instance;
    const auto bids = L.bids;
    A.push_back(expect_alloc("allocation", [=] { return mech(inst, bids).alloc; }, first_k(k)));
    A.push_back(expect_near("payment of ad 2", [=] { return mech(inst, bids).payments[1]; }, 1.0));
    A.push_back(expect_near("utility of ad 2", [=] { return mech(inst, bids).utilities[1]; }, -1.0));
    if (name == "vcgpd-not-ir")
      A.push_back(expect_nash("truthful profile admits a profitable misreport", inst, bids, mech,
                              same_grid(n, {0.0, 0.5, 1.0, 2.0}), false));
  } else if (name == "gsp-sw-poa-ovb") {
    exactly_two(params);
    const double e = check_eps(params);
    L.instance = AuctionInstance({Ad{1, e, 1.0, e}, Ad{2, 1.0, 1.0, 1.0 - e}}, SlotLadder(2, {1.0}));
    L.bids.bids = {1.0 / e, e * e / 2.0};
    const auto inst = L.instance;
    const auto bids = L.bids;
    const double opt = 1.0 + e * (1.0 - e);
    A.push_back(expect_alloc("GSP allocation", [=] { return gsp(inst, bids).alloc; }, first_k(2)));
    A.push_back(expect_near("GSP welfare", [=] { return gsp(inst, bids).sw; }, 2.0 * e));
    A.push_back(expect_near("utility of ad 1", [=] { return gsp(inst, bids).utilities[0]; }, e - e * e / 2.0));
    A.push_back(expect_near("utility of ad 2", [=] { return gsp(inst, bids).utilities[1]; }, e));
    A.push_back(expect_near("APDC optimum", [=] { return apdc_optimum(inst); }, opt));
    A.push_back(expect_near("welfare ratio", [=] { return gsp(inst, bids).sw / apdc_optimum(inst); },
                            2.0 * e / (1.0 + e * (1.0 - e))));
    const std::vector<double> grid = {0.0, e * e / 4.0, e * e / 2.0, e / 2.0, e, 1.0, 1.0 / e, 2.0 / e};
    A.push_back(expect_nash("GSP Nash", inst, bids, gsp, same_grid(2, grid), true));
  } else if (name == "gsp-sw-poa-noovb" || name == "vcgpd-sw-poa-noovb") {
    const auto [n, k] = more_ads_than_slots(params, 5, 4);
    std::vector<Ad> ads;
    for (std::size_t i = 0; i < n; ++i) ads.push_back(Ad{static_cast<AdId>(i + 1), 1.0, 1.0, i == 0 ? 0.0 : 1.0});
    L.instance = AuctionInstance(std::move(ads), SlotLadder(k, std::vector<double>(k - 1, 1.0)));
    L.bids = BidProfile::truthful(L.instance);
    const Mechanism mech = name == "gsp-sw-poa-noovb" ? gsp : pdc;
    const auto inst = L.instance;
    const auto bids = L.bids;
    const double kk = static_cast<double>(k);
    A.push_back(expect_alloc("allocation", [=] { return mech(inst, bids).alloc; }, first_k(k)));
    A.push_back(expect_near("welfare", [=] { return mech(inst, bids).sw; }, 1.0));
    A.push_back(expect_near("APDC optimum", [=] { return apdc_optimum(inst); }, kk));
    A.push_back(expect_true("APDC optimum puts ad 1 in the last slot", [=] {
      const auto a = solve_exact(inst).best_alloc;
      return a.size() == k && a.slots.back() == 1;
    }, "ad 1 in slot K"));
    A.push_back(expect_near("welfare ratio", [=] { return mech(inst, bids).sw / apdc_optimum(inst); }, 1.0 / kk));
    A.push_back(expect_nash("Nash without overbidding", inst, bids, mech,
                            same_grid(n, {0.0, 0.25, 0.5, 0.75, 1.0}), true));
  } else if (name == "gsp-rev-poa") {
    const auto [n, k] = more_ads_than_slots(params, 3, 2);
    const double e = check_eps(params);
    std::vector<Ad> ads;
    for (std::size_t i = 0; i < n; ++i)
      ads.push_back(Ad{static_cast<AdId>(i + 1), i == 0 ? 1.0 : 1.0 - e, 1.0, i == 0 ? 0.0 : 1.0});
    L.instance = AuctionInstance(std::move(ads), SlotLadder(k, std::vector<double>(k - 1, 1.0)));
    L.bids.bids.assign(n, 0.0);
    L.bids.bids[0] = 1.0;
    const auto inst = L.instance;
    const auto bids = L.bids;
    const auto truthful = BidProfile::truthful(inst);
    const double kk = static_cast<double>(k);
    A.push_back(expect_alloc("GSP allocation", [=] { return gsp(inst, bids).alloc; }, first_k(k)));
    A.push_back(expect_near("GSP revenue", [=] { return gsp(inst, bids).revenue; }, 0.0));
    A.push_back(expect_nash("GSP Nash", inst, bids, gsp, same_grid(n, {0.0, e / 2.0, 1.0 - e, 1.0, 1.0 + e, 2.0}), true));
    A.push_back(expect_true("APDC puts ad 1 in the last slot", [=] {
      const auto a = apdc(inst, truthful).alloc;
      return a.size() == k && a.slots.back() == 1;
    }, "ad 1 in slot K"));
    A.push_back(expect_near("APDC payment of ad 1", [=] { return apdc(inst, truthful).payments[0]; }, 1.0 - e));
    A.push_back(expect_near("APDC revenue", [=] { return apdc(inst, truthful).revenue; }, kk * (1.0 - e)));
  } else if (name == "gsp-sw-pos" || name == "vcgpd-sw-pos") {
    const auto [n, k] = more_ads_than_slots(params, 3, 2);
    L.instance = uniform_instance(n, k, 1.0, 1.0, 1.0);
    L.bids = BidProfile::truthful(L.instance);
    const Mechanism mech = name == "gsp-sw-pos" ? gsp : pdc;
    const auto inst = L.instance;
    const auto bids = L.bids;
    const double kk = static_cast<double>(k);
    A.push_back(expect_alloc("allocation", [=] { return mech(inst, bids).alloc; }, first_k(k)));
    A.push_back(expect_alloc("APDC allocation", [=] { return apdc(inst, bids).alloc; }, first_k(k)));
    A.push_back(expect_near("welfare", [=] { return mech(inst, bids).sw; }, kk));
    A.push_back(expect_near("welfare ratio", [=] { return mech(inst, bids).sw / apdc(inst, bids).sw; }, 1.0));
    if (name == "vcgpd-sw-pos")
      for (std::size_t i = 0; i < k; ++i)
        A.push_back(expect_near("payment of ad " + std::to_string(i + 1),
                                [=] { return mech(inst, bids).payments[i]; }, 1.0));
    A.push_back(expect_nash("Nash", inst, bids, mech, same_grid(n, {0.0, 0.5, 1.0, 1.5, 2.0}), true));
  } else if (name == "gsp-rev-pos") {
    exactly_two(params);
    L.instance = AuctionInstance({Ad{1, 1.0, 1.0, 1.0}, Ad{2, 1.0 / 3.0, 1.0, 0.5}}, SlotLadder(2, {1.0}));
    L.bids = BidProfile::truthful(L.instance);
    const auto inst = L.instance;
    const auto bids = L.bids;
    A.push_back(expect_alloc("GSP allocation", [=] { return gsp(inst, bids).alloc; }, first_k(2)));
    A.push_back(expect_near("GSP revenue", [=] { return gsp(inst, bids).revenue; }, 1.0 / 3.0));
    A.push_back(expect_near("utility of ad 1", [=] { return gsp(inst, bids).utilities[0]; }, 2.0 / 3.0));
    A.push_back(expect_near("utility of ad 2", [=] { return gsp(inst, bids).utilities[1]; }, 1.0 / 3.0));
    A.push_back(expect_near("ad 1 bidding below ad 2", [=] {
      return gsp(inst, BidProfile{{0.25, 1.0 / 3.0}}).utilities[0];
    }, 0.5));
    A.push_back(expect_near("ad 2 bidding above ad 1", [=] {
      return gsp(inst, BidProfile{{1.0, 2.0}}).utilities[1];
    }, -2.0 / 3.0));
    A.push_back(expect_nash("GSP Nash", inst, bids, gsp, same_grid(2, {0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 1.0, 2.0}), true));
    A.push_back(expect_alloc("APDC allocation", [=] { return apdc(inst, bids).alloc; }, first_k(2)));
    A.push_back(expect_near("APDC revenue", [=] { return apdc(inst, bids).revenue; }, 0.0));
  } else if (name == "vcgpd-sw-poa-ovb") {
    exactly_two(params);
    L.instance = AuctionInstance({Ad{1, 0.0, 1.0, 0.0}, Ad{2, 1.0, 1.0, 1.0}}, SlotLadder(2, {0.5}));
    L.bids.bids = {4.0, 0.0};
    const auto inst = L.instance;
    const auto bids = L.bids;
    A.push_back(expect_alloc("allocation", [=] { return pdc(inst, bids).alloc; }, first_k(2)));
    A.push_back(expect_near("utility of ad 1", [=] { return pdc(inst, bids).utilities[0]; }, 0.0));
    A.push_back(expect_near("utility of ad 2", [=] { return pdc(inst, bids).utilities[1]; }, 0.0));
    A.push_back(expect_near("welfare", [=] { return pdc(inst, bids).sw; }, 0.0));
    A.push_back(expect_near("ad 2 overbidding ad 1", [=] { return pdc(inst, BidProfile{{4.0, 5.0}}).utilities[1]; }, -1.0));
    A.push_back(expect_nash("Nash", inst, bids, pdc, same_grid(2, {0.0, 1.0, 2.0, 4.0, 5.0, 8.0}), true));
    A.push_back(expect_alloc("APDC allocation", [=] { return apdc(inst, BidProfile::truthful(inst)).alloc; },
                             Allocation{{2, 1}, false}));
    A.push_back(expect_near("APDC optimum", [=] { return apdc_optimum(inst); }, 1.0));
  } else if (name == "vcgpd-rev-poa") {
    const auto [n, k] = as_many_ads_as_slots(params, 3);
    L.instance = uniform_instance(n, k, 1.0, 1.0, 0.5);
    L.bids = BidProfile::truthful(L.instance);
    const auto inst = L.instance;
    const auto bids = L.bids;
    for (std::size_t i = 0; i < n; ++i)
      A.push_back(expect_near("payment of ad " + std::to_string(i + 1), [=] { return pdc(inst, bids).payments[i]; }, 0.0));
    A.push_back(expect_near("revenue", [=] { return pdc(inst, bids).revenue; }, 0.0));
    A.push_back(expect_nash("Nash", inst, bids, pdc, same_grid(n, {0.0, 0.5, 1.0, 2.0}), true));
    A.push_back(expect_true("APDC charges every ad above the last slot", [=] {
      const auto out = apdc(inst, bids);
      for (std::size_t s = 0; s + 1 < out.alloc.size(); ++s)
        if (!(out.payments[*inst.index_of(out.alloc.slots[s])] > 0.0)) return false;
      return true;
    }, "positive payments in slots 1..K-1"));
    A.push_back(expect_true("APDC revenue positive", [=] { return apdc(inst, bids).revenue > 0.0; }, "revenue > 0"));
  } else if (name == "vcgpd-rev-pos-ovb") {
    exactly_two(params);
    L.instance = AuctionInstance({Ad{1, 1.0, 1.0, 1.0}, Ad{2, 0.0, 1.0, 0.5}}, SlotLadder(2, {0.5}));
    L.bids.bids = {1.0, 0.5};
    const auto inst = L.instance;
    const auto bids = L.bids;
    const auto truthful = BidProfile::truthful(inst);
    A.push_back(expect_alloc("allocation", [=] { return pdc(inst, bids).alloc; }, first_k(2)));
    A.push_back(expect_near("utility of ad 1", [=] { return pdc(inst, bids).utilities[0]; }, 0.75));
    A.push_back(expect_near("utility of ad 2", [=] { return pdc(inst, bids).utilities[1]; }, 0.0));
    A.push_back(expect_near("revenue", [=] { return pdc(inst, bids).revenue; }, 0.25));
    A.push_back(expect_near("ad 1 bidding below 1/2", [=] { return pdc(inst, BidProfile{{0.25, 0.5}}).utilities[0]; }, 0.25));
    A.push_back(expect_near("ad 2 bidding above 1", [=] { return pdc(inst, BidProfile{{1.0, 2.0}}).utilities[1]; }, -0.5));
    A.push_back(expect_nash("Nash", inst, bids, pdc, same_grid(2, {0.0, 0.25, 0.5, 1.0, 2.0}), true));
    A.push_back(expect_alloc("APDC allocation", [=] { return apdc(inst, truthful).alloc; }, first_k(2)));
    A.push_back(expect_near("APDC revenue", [=] { return apdc(inst, truthful).revenue; }, 0.0));
  } else if (name == "vcgpd-rev-pos-noovb") {
    const auto [n, k] = more_ads_than_slots(params, 3, 2);
    L.instance = uniform_instance(n, k, 1.0, 1.0, 0.5);
    L.bids = BidProfile::truthful(L.instance);
    const auto inst = L.instance;
    const auto bids = L.bids;
    A.push_back(expect_nash("Nash without overbidding", inst, bids, pdc, same_grid(n, {0.0, 0.25, 0.5, 0.75, 1.0}), true));
    A.push_back(expect_near("revenue equals APDC revenue", [=] { return pdc(inst, bids).revenue; },
                            apdc(inst, bids).revenue));
    for (std::size_t i = 0; i < k; ++i)
      A.push_back(expect_near("payment of ad " + std::to_string(i + 1), [=] { return pdc(inst, bids).payments[i]; },
                              inst.ladder().prominence(i)));
  } else {
    throw Error(ErrorCode::unknown_lemma, "no catalog entry named '" + std::string(name) + "'");
  }
  return L;
}

inline std::vector<AssertionResult> verify(const LemmaInstance& lemma) {
  std::vector<AssertionResult> out;
  for (const auto& a : lemma.assertions) out.push_back(a.check());
  return out;
}

inline bool all_passed(const std::vector<AssertionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const AssertionResult& r) { return r.passed; });
}

// Entries whose construction depends on eps.
inline bool lemma_uses_eps(std::string_view name) { return name == "gsp-sw-poa-ovb" || name == "gsp-rev-poa"; }

}  // namespace apdc
