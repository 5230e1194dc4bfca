#pragma once

// Dominance pruning. Ad a dominates ad b (a < b) when the affine function
//
//   w(a, b; x, y) = x (vbar_b c_a - vbar_a c_b) + y (c_a - c_b) + (vbar_a - vbar_b)
//
// is strictly positive on the rectangle [0, lambda_max] x [0, B], B an upper
// bound on the optimal welfare. Swapping b below a then always improves any
// allocation, so an ad with at least K dominators never appears in an optimal
// allocation and can be dropped. Positivity is checked at the four corners.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "apdc/detail/convolution.hpp"
#include "apdc/detail/dominance_counter.hpp"
#include "apdc/model.hpp"
#include "apdc/sorted_dp.hpp"

namespace apdc {

struct DominanceParams {
  double lambda_max = 0.0;
  double bound = 0.0;  // B
};

inline double w_value(double vbar_a, double c_a, double vbar_b, double c_b, double x, double y) noexcept {
  return x * (vbar_b * c_a - vbar_a * c_b) + y * (c_a - c_b) + (vbar_a - vbar_b);
}

inline double w_value(const Ad& a, const Ad& b, double x, double y) noexcept {
  return w_value(a.vbar(), a.continuation, b.vbar(), b.continuation, x, y);
}

namespace detail {

inline bool dominates(double vbar_a, double c_a, double vbar_b, double c_b, const DominanceParams& p) noexcept {
  return w_value(vbar_a, c_a, vbar_b, c_b, 0.0, 0.0) > 0.0 && w_value(vbar_a, c_a, vbar_b, c_b, 0.0, p.bound) > 0.0 &&
         w_value(vbar_a, c_a, vbar_b, c_b, p.lambda_max, 0.0) > 0.0 &&
         w_value(vbar_a, c_a, vbar_b, c_b, p.lambda_max, p.bound) > 0.0;
}

}  // namespace detail

// Strict: a zero corner value means no domination.
inline bool dominates(const Ad& a, const Ad& b, const DominanceParams& params) noexcept {
  return detail::dominates(a.vbar(), a.continuation, b.vbar(), b.continuation, params);
}

// Exact optimum of the instance with every readable lambda raised to
// lambda_max, via the sorted DP on descending vbar / (1 - lambda_max c).
inline double const_lambda_bound(const AuctionInstance& inst) {
  const std::size_t k_slots = inst.num_slots();
  const double lmax = inst.ladder().lambda_max();
  const AuctionInstance flat = inst.with_ladder(SlotLadder(k_slots, std::vector<double>(k_slots, lmax)));

  std::vector<std::size_t> idx(inst.num_ads());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> key(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) key[i] = detail::ratio_key(inst.vbar(i), inst.continuation(i), lmax);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    if (inst.vbar(a) != inst.vbar(b)) return inst.vbar(a) > inst.vbar(b);
    return inst.ad(a).id < inst.ad(b).id;
  });
  return detail::sorted_ads_indices(flat, idx).table_value;
}

enum class ConvolutionMethod { automatic, direct, fft };

// UB[k] (k = 0-based first slot) bounds the best allocation of slots k..K-1
// normalised to prominence 1 at slot k:
//   UB[k] = sum_i vbar*_i (c*_0 ... c*_{i-1}) (lambda_k ... lambda_{k+i-1})
// with vbar*, c* the top-K values sorted descending.
inline std::vector<double> decouple_bounds(const AuctionInstance& inst,
                                           ConvolutionMethod method = ConvolutionMethod::automatic) {
  const std::size_t k_slots = inst.num_slots();
  std::vector<double> vbars(inst.num_ads()), conts(inst.num_ads());
  for (std::size_t i = 0; i < inst.num_ads(); ++i) {
    vbars[i] = inst.vbar(i);
    conts[i] = inst.continuation(i);
  }
  std::partial_sort(vbars.begin(), vbars.begin() + k_slots, vbars.end(), std::greater<>());
  std::partial_sort(conts.begin(), conts.begin() + k_slots, conts.end(), std::greater<>());
  const SlotLadder& ladder = inst.ladder();

  std::vector<double> ub(k_slots, 0.0);
  auto direct = [&] {
    for (std::size_t k = 0; k < k_slots; ++k) {
      double cont = 1.0, lam = 1.0, sum = 0.0;
      for (std::size_t i = 0; k + i < k_slots; ++i) {
        sum += vbars[i] * cont * lam;
        cont *= conts[i];
        if (k + i + 1 < k_slots) lam *= ladder.lambda(k + i);
      }
      ub[k] = sum;
    }
  };

  if (method == ConvolutionMethod::direct || (method == ConvolutionMethod::automatic && k_slots <= 64)) {
    direct();
    return ub;
  }

  // UB[k] * prominence(k) = sum_i a_i prominence(k + i): a correlation of the
  // prefix-weighted values with the prominence vector.
  std::vector<double> a(k_slots), rev_prom(k_slots);
  double cont = 1.0, sum_a = 0.0, sum_b = 0.0, min_prom = 1.0;
  for (std::size_t i = 0; i < k_slots; ++i) {
    a[i] = vbars[i] * cont;
    cont *= conts[i];
    rev_prom[i] = ladder.prominence(k_slots - 1 - i);
    sum_a += a[i];
    sum_b += rev_prom[i];
    min_prom = std::min(min_prom, rev_prom[i]);
  }
  // Dividing by tiny prominences would amplify the transform's rounding.
  if (min_prom < 1e-6) {
    direct();
    return ub;
  }
  const std::vector<double> conv = detail::convolve_fft(a, rev_prom);
  const double margin = 16.0 * std::numeric_limits<double>::epsilon() *
                        std::log2(static_cast<double>(2 * k_slots)) * sum_a * sum_b;
  for (std::size_t k = 0; k < k_slots; ++k)
    ub[k] = std::max(0.0, conv[k_slots - 1 - k] + margin) / ladder.prominence(k);
  return ub;
}

enum class BoundMode { const_lambda, decouple, min, footnote };

// B for the dominance rectangle. `footnote` uses max_i lambda_i UB[i+1],
// which bounds the welfare that can sit below any slot.
inline DominanceParams choose_bound(const AuctionInstance& inst, BoundMode mode = BoundMode::min) {
  DominanceParams p;
  p.lambda_max = inst.ladder().lambda_max();
  switch (mode) {
    case BoundMode::const_lambda: p.bound = const_lambda_bound(inst); break;
    case BoundMode::decouple: p.bound = decouple_bounds(inst)[0]; break;
    case BoundMode::min: p.bound = std::min(const_lambda_bound(inst), decouple_bounds(inst)[0]); break;
    case BoundMode::footnote: {
      const auto ub = decouple_bounds(inst);
      double b = 0.0;
      for (std::size_t i = 0; i + 1 < ub.size(); ++i) b = std::max(b, inst.ladder().lambda(i) * ub[i + 1]);
      p.bound = b;
      break;
    }
  }
  return p;
}

// counts[i] = number of ads dominating ad i.
inline std::vector<std::size_t> count_dominators_naive(const AuctionInstance& inst, const DominanceParams& params) {
  const std::size_t n = inst.num_ads();
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const double va = inst.vbar(a), ca = inst.continuation(a);
    for (std::size_t b = 0; b < n; ++b)
      if (b != a && detail::dominates(inst.vbar(b), inst.continuation(b), va, ca, params)) ++counts[a];
  }
  return counts;
}

struct FastDominatorCounts {
  std::vector<std::size_t> counts;
  std::vector<std::size_t> from_higher_c;     // dominators with c_b > c_a
  std::vector<std::size_t> from_lower_eq_c;   // dominators with c_b <= c_a
  bool fell_back = false;                     // corner orders had ties
};

namespace detail {

// Rank of each ad in the total order "a before b iff w(a, b; x, y) > 0",
// i.e. ascending (1 - c x) / (vbar + c y). Empty when the order has a tie.
inline std::vector<std::size_t> corner_ranks(const AuctionInstance& inst, double x, double y) {
  const std::size_t n = inst.num_ads();
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double num = 1.0 - inst.continuation(i) * x;
    const double den = inst.vbar(i) + inst.continuation(i) * y;
    if (den == 0.0 && num == 0.0) return {};
    key[i] = den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t a = order[i], b = order[i + 1];
    if (!(w_value(inst.vbar(a), inst.continuation(a), inst.vbar(b), inst.continuation(b), x, y) > 0.0)) return {};
  }
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
  return rank;
}

}  // namespace detail

// O(N log^2 N) dominator counting. Ads are scanned by decreasing c; a
// dominator with larger c is certified by the two y = 0 corner ranks, one with
// smaller or equal c by the two y = B corner ranks. Falls back to the naive
// count when any corner order has ties.
inline FastDominatorCounts count_dominators_fast(const AuctionInstance& inst, const DominanceParams& params) {
  const std::size_t n = inst.num_ads();
  FastDominatorCounts out;
  out.counts.assign(n, 0);
  out.from_higher_c.assign(n, 0);
  out.from_lower_eq_c.assign(n, 0);

  const auto r00 = detail::corner_ranks(inst, 0.0, 0.0);
  const auto r0b = detail::corner_ranks(inst, 0.0, params.bound);
  const auto rl0 = detail::corner_ranks(inst, params.lambda_max, 0.0);
  const auto rlb = detail::corner_ranks(inst, params.lambda_max, params.bound);
  if (n > 1 && (r00.empty() || r0b.empty() || rl0.empty() || rlb.empty())) {
    out.fell_back = true;
    out.counts = count_dominators_naive(inst, params);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a || !detail::dominates(inst.vbar(b), inst.continuation(b), inst.vbar(a), inst.continuation(a), params))
          continue;
        if (inst.continuation(b) > inst.continuation(a))
          ++out.from_higher_c[a];
        else
          ++out.from_lower_eq_c[a];
      }
    return out;
  }
  if (n <= 1) return out;

  detail::DominanceCounter2D higher(r00, rl0);  // scanned ads, strictly larger c
  detail::DominanceCounter2D lower(r0b, rlb);   // not yet scanned, c <= current
  for (std::size_t i = 0; i < n; ++i) lower.insert(i);

  std::vector<std::size_t> scan(n);
  std::iota(scan.begin(), scan.end(), std::size_t{0});
  std::stable_sort(scan.begin(), scan.end(),
                   [&](std::size_t a, std::size_t b) { return inst.continuation(a) > inst.continuation(b); });

  for (std::size_t g = 0; g < n;) {
    std::size_t end = g;
    while (end < n && inst.continuation(scan[end]) == inst.continuation(scan[g])) ++end;
    for (std::size_t t = g; t < end; ++t) {
      const std::size_t a = scan[t];
      out.from_higher_c[a] = higher.count_below(r00[a], rl0[a]);
      out.from_lower_eq_c[a] = lower.count_below(r0b[a], rlb[a]);
      out.counts[a] = out.from_higher_c[a] + out.from_lower_eq_c[a];
    }
    for (std::size_t t = g; t < end; ++t) {
      lower.erase(scan[t]);
      higher.insert(scan[t]);
    }
    g = end;
  }
  return out;
}

enum class DiscardRule { at_least_k, more_than_k };

struct PruneOptions {
  BoundMode bound = BoundMode::min;
  bool fast = false;
  DiscardRule rule = DiscardRule::at_least_k;
};

struct DominanceReport {
  std::vector<AdId> ids;                // original ad order
  std::vector<std::size_t> dom_counts;  // count when discarded, or in the last round
  std::vector<AdId> surviving;
  std::vector<AdId> discarded;
  DominanceParams bound_used;           // last round
  std::vector<double> bound_history;    // B per round
  std::size_t iterations = 0;
  bool fast_fell_back = false;
};

struct PruneResult {
  AuctionInstance reduced;
  DominanceReport report;
};

// Repeats {bound, count, discard} until nothing is discarded, at most N rounds.
inline PruneResult prune_instance(const AuctionInstance& inst, const PruneOptions& opts = {}) {
  const std::size_t n = inst.num_ads();
  const std::size_t k_slots = inst.num_slots();
  DominanceReport report;
  report.ids = inst.ids();
  report.dom_counts.assign(n, 0);

  std::vector<std::size_t> alive(n);  // indices into inst
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  AuctionInstance current = inst;

  while (report.iterations < n) {
    ++report.iterations;
    const DominanceParams params = choose_bound(current, opts.bound);
    report.bound_used = params;
    report.bound_history.push_back(params.bound);

    std::vector<std::size_t> counts;
    if (opts.fast) {
      auto fast = count_dominators_fast(current, params);
      report.fast_fell_back = report.fast_fell_back || fast.fell_back;
      counts = std::move(fast.counts);
    } else {
      counts = count_dominators_naive(current, params);
    }

    std::vector<std::size_t> keep_local;
    std::vector<std::size_t> kept_alive;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      report.dom_counts[alive[i]] = counts[i];
      const bool drop = opts.rule == DiscardRule::at_least_k ? counts[i] >= k_slots : counts[i] > k_slots;
      if (drop) {
        report.discarded.push_back(inst.ad(alive[i]).id);
      } else {
        keep_local.push_back(i);
        kept_alive.push_back(alive[i]);
      }
    }
    if (kept_alive.size() == alive.size()) break;
    current = current.subset(keep_local);
    alive = std::move(kept_alive);
  }

  for (std::size_t i : alive) report.surviving.push_back(inst.ad(i).id);
  return {std::move(current), std::move(report)};
}

}  // namespace apdc
