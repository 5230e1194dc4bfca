#pragma once

// GSP, VCG under the position-dependent cascade, and VCG over the APDC model
// with a maximal-in-range allocator. Payments are expected amounts charged per
// impression; utilities use true values and true APDC click rates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apdc/color_coding.hpp"
#include "apdc/error.hpp"
#include "apdc/exact.hpp"
#include "apdc/model.hpp"
#include "apdc/parallel.hpp"
#include "apdc/sorted_dp.hpp"

namespace apdc {

// Reported per-click values, one per ad index of the instance.
struct BidProfile {
  std::vector<double> bids;

  static BidProfile truthful(const AuctionInstance& inst) {
    BidProfile p;
    for (const Ad& ad : inst.ads()) p.bids.push_back(ad.value);
    return p;
  }
};

struct MechanismOutcome {
  Allocation alloc;
  std::vector<double> payments;                 // per ad index
  std::vector<std::optional<double>> per_click; // payment / CTR, absent when CTR == 0
  std::vector<double> utilities;
  double revenue = 0.0;
  double sw = 0.0;
};

namespace detail {

inline void check_bids(const AuctionInstance& inst, const BidProfile& bids) {
  if (bids.bids.size() != inst.num_ads())
    throw Error(ErrorCode::invalid_params, "expected " + std::to_string(inst.num_ads()) + " bids, got " +
                                               std::to_string(bids.bids.size()));
  for (std::size_t i = 0; i < bids.bids.size(); ++i)
    if (!(bids.bids[i] >= 0.0) || !std::isfinite(bids.bids[i]))
      throw Error(ErrorCode::invalid_params, "bids[" + std::to_string(i) + "] must be finite and >= 0");
}

// Per-slot reach (prominence times continuations above) of an allocation
// placed from slot 0.
inline std::vector<double> reach_of(const AuctionInstance& inst, std::span<const std::size_t> idx) {
  std::vector<double> reach(idx.size());
  Prefix p;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    reach[s] = p.reach;
    const double lam = s + 1 < inst.num_slots() ? inst.ladder().lambda(s) : 0.0;
    p = extend(p, inst.vbar(idx[s]), inst.continuation(idx[s]), lam);
  }
  return reach;
}

// Fills utilities, per-click prices, revenue and welfare from allocation and payments.
inline MechanismOutcome settle(const AuctionInstance& truth, std::vector<std::size_t> idx, std::vector<double> pay) {
  MechanismOutcome out;
  const std::size_t n = truth.num_ads();
  out.alloc = to_allocation(truth, idx);
  out.payments = std::move(pay);
  out.per_click.assign(n, std::nullopt);
  out.utilities.assign(n, 0.0);
  std::vector<double> ctr_of(n, 0.0);
  const auto reach = reach_of(truth, idx);
  for (std::size_t s = 0; s < idx.size(); ++s) ctr_of[idx[s]] = truth.ad(idx[s]).quality * reach[s];
  for (std::size_t i = 0; i < n; ++i) {
    out.utilities[i] = truth.ad(i).value * ctr_of[i] - out.payments[i];
    if (ctr_of[i] > 0.0) out.per_click[i] = out.payments[i] / ctr_of[i];
    out.revenue += out.payments[i];
  }
  out.sw = welfare_of_indices(truth, idx);
  return out;
}

}  // namespace detail

struct GspOptions {
  bool rank_by_quality = false;  // rank by q * bid instead of bid
};

// Rank by bid (ties by id), top K win; rank r pays q * bid of rank r+1.
inline MechanismOutcome gsp_outcome(const AuctionInstance& inst, const BidProfile& bids, const GspOptions& opts = {}) {
  detail::check_bids(inst, bids);
  const std::size_t n = inst.num_ads();
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) score[i] = opts.rank_by_quality ? inst.ad(i).quality * bids.bids[i] : bids.bids[i];
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return inst.ad(a).id < inst.ad(b).id;
  });
  const std::size_t k = std::min(inst.num_slots(), n);
  std::vector<std::size_t> idx(rank.begin(), rank.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<double> pay(n, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    if (r + 1 < n) pay[rank[r]] = inst.ad(rank[r + 1]).quality * bids.bids[rank[r + 1]];
  return detail::settle(inst, std::move(idx), std::move(pay));
}

namespace detail {

// Greedy PDC optimum over `ads` with reported values: best q * bid in the top slot.
inline std::vector<std::size_t> pdc_greedy(const AuctionInstance& inst, const BidProfile& bids,
                                           std::vector<std::size_t> ads, std::size_t slots) {
  std::sort(ads.begin(), ads.end(), [&](std::size_t a, std::size_t b) {
    const double sa = inst.ad(a).quality * bids.bids[a], sb = inst.ad(b).quality * bids.bids[b];
    if (sa != sb) return sa > sb;
    return inst.ad(a).id < inst.ad(b).id;
  });
  ads.resize(std::min(slots, ads.size()));
  return ads;
}

inline double pdc_value(const AuctionInstance& inst, const BidProfile& bids, std::span<const std::size_t> idx,
                        std::optional<std::size_t> skip = std::nullopt) {
  double total = 0.0;
  for (std::size_t s = 0; s < idx.size(); ++s)
    if (idx[s] != skip) total += inst.ad(idx[s]).quality * bids.bids[idx[s]] * inst.ladder().prominence(s);
  return total;
}

}  // namespace detail

// VCG when the declared model is PDC: continuation probabilities play no part
// in allocation or payments.
inline MechanismOutcome vcg_pdc_outcome(const AuctionInstance& inst, const BidProfile& bids) {
  detail::check_bids(inst, bids);
  const std::size_t n = inst.num_ads();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto idx = detail::pdc_greedy(inst, bids, all, inst.num_slots());
  std::vector<double> pay(n, 0.0);
  for (std::size_t a : idx) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (i != a) rest.push_back(i);
    const auto alt = detail::pdc_greedy(inst, bids, rest, std::min(inst.num_slots(), n - 1));
    pay[a] = detail::pdc_value(inst, bids, alt) - detail::pdc_value(inst, bids, idx, a);
  }
  return detail::settle(inst, idx, std::move(pay));
}

enum class AllocatorKind { exact, colored, sorted };

struct VcgApdcOptions {
  AllocatorKind allocator = AllocatorKind::exact;
  std::uint64_t seed = 0;
  std::optional<std::size_t> color_iterations;  // default ceil(e^K ln 2)
  std::optional<std::size_t> random_orders;     // default 2K^3
  ExactOptions exact;
};

namespace detail {

// Best allocation inside the allocator's range, restricted to the ads in
// `ads`. The range depends only on the seed and the ad set, never on values.
class RangeAllocator {
 public:
  RangeAllocator(const AuctionInstance& reported, const VcgApdcOptions& opts) : inst_(reported), opts_(opts) {
    const std::size_t n = inst_.num_ads(), k = inst_.num_slots();
    if (opts_.allocator == AllocatorKind::colored) {
      const std::size_t rounds = opts_.color_iterations.value_or(default_color_iterations(k));
      if (rounds == 0) throw Error(ErrorCode::no_iterations, "color coding needs at least one iteration");
      colorings_ = draw_colorings(n, k, opts_.seed, rounds);
    } else if (opts_.allocator == AllocatorKind::sorted) {
      const std::size_t t = opts_.random_orders.value_or(default_order_count(k));
      if (t == 0) throw Error(ErrorCode::no_orders, "no random orders");
      for (std::size_t i = 0; i < t; ++i) orders_.push_back(random_permutation(n, opts_.seed, i));
    }
  }

  std::vector<std::size_t> best(std::optional<std::size_t> excluded) const {
    const std::size_t n = inst_.num_ads();
    std::vector<std::size_t> ads;
    for (std::size_t i = 0; i < n; ++i)
      if (i != excluded) ads.push_back(i);
    if (ads.empty()) return {};

    switch (opts_.allocator) {
      case AllocatorKind::exact: {
        const AuctionInstance sub = inst_.subset(ads);
        const auto r = solve_exact(sub, opts_.exact);
        auto idx = resolve(sub, r.best_alloc);
        for (auto& i : idx) i = ads[i];
        return idx;
      }
      case AllocatorKind::colored: {
        std::vector<std::size_t> winner;
        double best = -1.0;
        std::vector<std::uint32_t> cols(ads.size());
        for (const Coloring& col : colorings_) {
          for (std::size_t j = 0; j < ads.size(); ++j) cols[j] = col.colors[ads[j]];
          auto r = colorful_best(inst_, ads, cols);
          if (r.value > best) {
            best = r.value;
            winner = std::move(r.chosen);
          }
        }
        return winner;
      }
      case AllocatorKind::sorted: {
        std::vector<std::size_t> winner;
        double best = -1.0;
        std::vector<std::size_t> order;
        for (const auto& perm : orders_) {
          order.clear();
          for (std::size_t i : perm)
            if (i != excluded) order.push_back(i);
          auto r = sorted_ads_indices(inst_, order);
          const double v = welfare_of_indices(inst_, r.chosen);
          if (v > best) {
            best = v;
            winner = std::move(r.chosen);
          }
        }
        return winner;
      }
    }
    return {};
  }

 private:
  const AuctionInstance& inst_;
  VcgApdcOptions opts_;
  std::vector<Coloring> colorings_;
  std::vector<std::vector<std::size_t>> orders_;
};

}  // namespace detail

// Clarke payments over the allocator's range: what the others would get
// without ad a, minus what they get with it.
inline MechanismOutcome vcg_apdc_outcome(const AuctionInstance& inst, const BidProfile& bids,
                                         const VcgApdcOptions& opts = {}) {
  detail::check_bids(inst, bids);
  const AuctionInstance reported = inst.with_values(bids.bids);
  const detail::RangeAllocator allocator(reported, opts);
  const auto idx = allocator.best(std::nullopt);

  const auto reach = detail::reach_of(reported, idx);
  const double total = detail::welfare_of_indices(reported, idx);
  std::vector<double> pay(inst.num_ads(), 0.0);
  for (std::size_t s = 0; s < idx.size(); ++s) {
    const std::size_t a = idx[s];
    const auto alt = allocator.best(a);
    pay[a] = detail::welfare_of_indices(reported, alt) - (total - reported.vbar(a) * reach[s]);
  }
  return detail::settle(inst, idx, std::move(pay));
}

using Mechanism = std::function<MechanismOutcome(const AuctionInstance&, const BidProfile&)>;

struct Deviation {
  std::size_t agent = 0;  // ad index
  AdId id = 0;
  double bid = 0.0;
  double utility_before = 0.0;
  double utility_after = 0.0;
  double gain() const noexcept { return utility_after - utility_before; }
};

struct NashCheck {
  bool nash = true;
  std::optional<Deviation> best_deviation;  // most profitable one when not Nash
};

// Unilateral deviations on per-agent grids; not Nash when some deviation
// gains more than eps. An empty grid leaves that agent fixed.
inline NashCheck is_nash(const AuctionInstance& inst, const BidProfile& bids, const Mechanism& mechanism,
                         const std::vector<std::vector<double>>& grids, double eps = 1e-9, unsigned threads = 1) {
  detail::check_bids(inst, bids);
  if (grids.size() != inst.num_ads()) throw Error(ErrorCode::invalid_params, "need one grid per agent");
  if (!(eps >= 0.0)) throw Error(ErrorCode::invalid_params, "eps must be >= 0");

  const MechanismOutcome base = mechanism(inst, bids);
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t a = 0; a < grids.size(); ++a)
    for (double b : grids[a]) jobs.emplace_back(a, b);

  std::vector<double> after(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    BidProfile dev = bids;
    dev.bids[jobs[j].first] = jobs[j].second;
    after[j] = mechanism(inst, dev).utilities[jobs[j].first];
  });

  NashCheck out;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const std::size_t a = jobs[j].first;
    const double gain = after[j] - base.utilities[a];
    if (gain > eps && (!out.best_deviation || gain > out.best_deviation->gain())) {
      out.nash = false;
      out.best_deviation = Deviation{a, inst.ad(a).id, jobs[j].second, base.utilities[a], after[j]};
    }
  }
  return out;
}

inline Mechanism gsp_mechanism(GspOptions opts = {}) {
  return [opts](const AuctionInstance& i, const BidProfile& b) { return gsp_outcome(i, b, opts); };
}

inline Mechanism vcg_pdc_mechanism() {
  return [](const AuctionInstance& i, const BidProfile& b) { return vcg_pdc_outcome(i, b); };
}

inline Mechanism vcg_apdc_mechanism(VcgApdcOptions opts = {}) {
  return [opts](const AuctionInstance& i, const BidProfile& b) { return vcg_apdc_outcome(i, b, opts); };
}

}  // namespace apdc
