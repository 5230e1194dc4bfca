#pragma once

// Optimal allocation restricted to a total order over the ads, and the
// multi-order approximation built on top of it.
//
// For an order a_1 < a_2 < ... < a_N the table best[n][k] holds the value of
// the best allocation that uses only a_n..a_N, starts at slot k and leaves no
// hole, normalised so that slot k has prominence 1:
//
//   best[N][k] = vbar(a_N)
//   best[n][k] = max(vbar(a_n) + lambda_k c(a_n) best[n+1][k+1], best[n+1][k])   k < K-1
//   best[n][K-1] = max(vbar(a_n), best[n+1][K-1])
//
// The reported value is recomputed from the reconstructed allocation.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "apdc/error.hpp"
#include "apdc/model.hpp"
#include "apdc/parallel.hpp"
#include "apdc/rng.hpp"

namespace apdc {

enum class OrderKind { random, natural, reverse_natural, custom };

struct AdOrder {
  std::vector<AdId> ids;
  OrderKind kind = OrderKind::custom;
};

struct SortedDpResult {
  double value = 0.0;
  Allocation alloc;
  std::size_t rows = 0;  // N
  std::size_t cols = 0;  // K
  std::size_t order_index = 0;
};

namespace detail {

// vbar / (1 - scale * c), with scale * c == 1 mapped to +infinity.
inline double ratio_key(double vbar, double c, double scale = 1.0) noexcept {
  const double denom = 1.0 - scale * c;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return vbar / denom;
}

inline std::vector<std::size_t> natural_indices(const AuctionInstance& inst) {
  std::vector<std::size_t> idx(inst.num_ads());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> key(inst.num_ads());
  for (std::size_t i = 0; i < key.size(); ++i) key[i] = ratio_key(inst.vbar(i), inst.continuation(i));
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return inst.ad(a).id < inst.ad(b).id;
  });
  return idx;
}

// Uniform permutation of [0, n) for order stream `index`; depends on nothing
// but (n, seed, index).
inline std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Xoshiro256 rng(derive_seed(seed, index));
  rng.shuffle(std::span<std::size_t>(perm));
  return perm;
}

struct OrderedBest {
  double table_value = 0.0;
  std::vector<std::size_t> chosen;
};

// Core DP over ad indices already arranged in order. `order` may be a strict
// subset of the instance's ads.
inline OrderedBest sorted_ads_indices(const AuctionInstance& inst, std::span<const std::size_t> order) {
  OrderedBest out;
  const std::size_t n_ads = order.size();
  const std::size_t k_slots = inst.num_slots();
  if (n_ads == 0) return out;
  const SlotLadder& ladder = inst.ladder();

  std::vector<double> best(n_ads * k_slots);
  auto at = [&](std::size_t n, std::size_t k) -> double& { return best[n * k_slots + k]; };

  for (std::size_t k = 0; k < k_slots; ++k) at(n_ads - 1, k) = inst.vbar(order[n_ads - 1]);
  for (std::size_t n = n_ads - 1; n-- > 0;) {
    const double vbar = inst.vbar(order[n]);
    const double c = inst.continuation(order[n]);
    for (std::size_t k = 0; k < k_slots; ++k) {
      const double take = k + 1 < k_slots ? vbar + ladder.lambda(k) * c * at(n + 1, k + 1) : vbar;
      at(n, k) = std::max(take, at(n + 1, k));
    }
  }
  out.table_value = at(0, 0);

  std::size_t k = 0;
  for (std::size_t n = 0; n < n_ads && k < k_slots; ++n) {
    const double vbar = inst.vbar(order[n]);
    if (n + 1 == n_ads) {
      out.chosen.push_back(order[n]);
      break;
    }
    const double c = inst.continuation(order[n]);
    const double take = k + 1 < k_slots ? vbar + ladder.lambda(k) * c * at(n + 1, k + 1) : vbar;
    if (take >= at(n + 1, k)) {
      out.chosen.push_back(order[n]);
      ++k;
    }
  }
  return out;
}

inline std::vector<std::size_t> order_to_indices(const AuctionInstance& inst, const AdOrder& order) {
  if (order.ids.size() != inst.num_ads())
    throw Error(ErrorCode::invalid_order, "order has " + std::to_string(order.ids.size()) + " entries for " +
                                              std::to_string(inst.num_ads()) + " ads");
  std::vector<std::size_t> idx;
  idx.reserve(order.ids.size());
  std::vector<char> seen(inst.num_ads(), 0);
  for (AdId id : order.ids) {
    auto i = inst.index_of(id);
    if (!i) throw Error(ErrorCode::invalid_order, "order mentions unknown ad " + std::to_string(id));
    if (seen[*i]) throw Error(ErrorCode::invalid_order, "order repeats ad " + std::to_string(id));
    seen[*i] = 1;
    idx.push_back(*i);
  }
  return idx;
}

inline AdOrder indices_to_order(const AuctionInstance& inst, std::span<const std::size_t> idx, OrderKind kind) {
  AdOrder order;
  order.kind = kind;
  order.ids.reserve(idx.size());
  for (std::size_t i : idx) order.ids.push_back(inst.ad(i).id);
  return order;
}

}  // namespace detail

// Descending vbar/(1-c); c == 1 sorts first; ties by ascending id.
inline AdOrder natural_order(const AuctionInstance& inst) {
  const auto idx = detail::natural_indices(inst);
  return detail::indices_to_order(inst, idx, OrderKind::natural);
}

inline AdOrder reverse_natural_order(const AuctionInstance& inst) {
  auto idx = detail::natural_indices(inst);
  std::reverse(idx.begin(), idx.end());
  return detail::indices_to_order(inst, idx, OrderKind::reverse_natural);
}

inline AdOrder random_order(const AuctionInstance& inst, std::uint64_t seed, std::uint64_t index) {
  const auto perm = detail::random_permutation(inst.num_ads(), seed, index);
  return detail::indices_to_order(inst, perm, OrderKind::random);
}

inline SortedDpResult sorted_ads(const AuctionInstance& inst, const AdOrder& order) {
  const auto idx = detail::order_to_indices(inst, order);
  const auto best = detail::sorted_ads_indices(inst, idx);
  SortedDpResult r;
  r.alloc = detail::to_allocation(inst, best.chosen);
  r.value = detail::welfare_of_indices(inst, best.chosen);
  r.rows = inst.num_ads();
  r.cols = inst.num_slots();
  return r;
}

struct MultiOrderOptions {
  std::size_t random_orders = 0;  // T; see default_order_count()
  std::uint64_t seed = 0;
  std::vector<AdOrder> extra_orders;
  bool include_natural = true;
  unsigned threads = 1;
};

inline std::size_t default_order_count(std::size_t k_slots) { return 2 * k_slots * k_slots * k_slots; }

// Best order-restricted allocation over T random orders followed by the extra
// orders (natural order appended when requested). Lowest order index wins ties.
inline SortedDpResult multi_order_approx(const AuctionInstance& inst, const MultiOrderOptions& opts) {
  std::vector<AdOrder> extras = opts.extra_orders;
  if (opts.include_natural) extras.push_back(natural_order(inst));
  const std::size_t total = opts.random_orders + extras.size();
  if (total == 0) throw Error(ErrorCode::no_orders, "no random orders and no extra orders supplied");

  std::vector<detail::OrderedBest> results(total);
  std::vector<double> values(total);
  parallel_for(total, opts.threads, [&](std::size_t t) {
    std::vector<std::size_t> idx = t < opts.random_orders
                                       ? detail::random_permutation(inst.num_ads(), opts.seed, t)
                                       : detail::order_to_indices(inst, extras[t - opts.random_orders]);
    results[t] = detail::sorted_ads_indices(inst, idx);
    values[t] = detail::welfare_of_indices(inst, results[t].chosen);
  });

  std::size_t winner = 0;
  for (std::size_t t = 1; t < total; ++t)
    if (values[t] > values[winner]) winner = t;

  SortedDpResult r;
  r.alloc = detail::to_allocation(inst, results[winner].chosen);
  r.value = values[winner];
  r.rows = inst.num_ads();
  r.cols = inst.num_slots();
  r.order_index = winner;
  return r;
}

}  // namespace apdc
