#pragma once

// Randomised color coding for the optimal K-ad allocation.
//
// Each pass colors the ads with K colors (every color used at least once) and
// finds, by a DP over color subsets, the best allocation whose ads carry
// pairwise distinct colors. memo[C] is the best path through exactly the
// colors in C laid out on the last |C| slots (right-aligned), normalised to
// prominence 1 at its first slot:
//
//   memo[C] = max over c in C, color(a) = c of  vbar_a + c_a lambda_{K-|C|} memo[C - {c}]
//
// The range searched by a pass depends only on the coloring, which depends
// only on (seed, pass index), never on reported values.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "apdc/error.hpp"
#include "apdc/model.hpp"
#include "apdc/parallel.hpp"
#include "apdc/rng.hpp"

namespace apdc {

inline constexpr std::size_t kMaxColorSlots = 24;

struct Coloring {
  std::vector<std::uint32_t> colors;  // 0-based, one per ad index
  std::uint64_t seed = 0;
};

struct ColorPassResult {
  double value = 0.0;
  Allocation alloc;
  std::size_t passes = 0;          // passes actually run
  std::size_t best_iteration = 0;  // pass that produced `alloc`
};

namespace detail {

// cover[j][m]: probability that j more uniform draws hit all K - m colors not
// yet used, given m are used.
inline std::vector<std::vector<double>> coverage_table(std::size_t n, std::size_t k) {
  std::vector<std::vector<double>> cover(n + 1, std::vector<double>(k + 1, 0.0));
  cover[0][k] = 1.0;
  const double kk = static_cast<double>(k);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t m = 0; m <= k; ++m) {
      double p = static_cast<double>(m) * cover[j - 1][m];
      if (m < k) p += static_cast<double>(k - m) * cover[j - 1][m + 1];
      cover[j][m] = p / kk;
    }
  return cover;
}

}  // namespace detail

// Uniform over surjective colorings of n ads with k colors. Rejection
// sampling when a uniform coloring is surjective often enough, otherwise an
// exact sequential sampler of the same distribution.
inline Coloring draw_coloring(std::size_t n, std::size_t k, Xoshiro256& rng) {
  if (k == 0 || k > n) throw Error(ErrorCode::invalid_params, "coloring needs 1 <= K <= N");
  Coloring out;
  out.colors.assign(n, 0);
  const auto cover = detail::coverage_table(n, k);
  if (cover[n][0] >= 0.01) {
    std::vector<char> hit(k);
    for (;;) {
      std::fill(hit.begin(), hit.end(), 0);
      std::size_t distinct = 0;
      for (auto& c : out.colors) {
        c = static_cast<std::uint32_t>(rng.bounded(k));
        if (!hit[c]) {
          hit[c] = 1;
          ++distinct;
        }
      }
      if (distinct == k) return out;
    }
  }
  std::vector<std::uint32_t> used, unused(k);
  for (std::uint32_t c = 0; c < k; ++c) unused[c] = c;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t left = n - t;
    const std::size_t m = used.size();
    const double p_old = static_cast<double>(m) * cover[left - 1][m] / (static_cast<double>(k) * cover[left][m]);
    if (m > 0 && rng.uniform() < p_old) {
      out.colors[t] = used[rng.bounded(m)];
    } else {
      const std::size_t pick = rng.bounded(unused.size());
      out.colors[t] = unused[pick];
      used.push_back(unused[pick]);
      unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return out;
}

inline Coloring draw_coloring(std::size_t n, std::size_t k, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Coloring c = draw_coloring(n, k, rng);
  c.seed = seed;
  return c;
}

inline std::size_t default_color_iterations(std::size_t k_slots) {
  return static_cast<std::size_t>(std::ceil(std::exp(static_cast<double>(k_slots)) * std::numbers::ln2));
}

namespace detail {

struct ColorfulBest {
  std::vector<std::size_t> chosen;  // instance indices, top slot first
  double value = 0.0;
};

// Best allocation with pairwise distinct colors over the ads in `ads`
// (instance indices; `colors[i]` is the color of ads[i]). When some colors are
// absent the layout shrinks to one slot per present color, which is where the
// best distinct-color allocation lives.
inline ColorfulBest colorful_best(const AuctionInstance& inst, std::span<const std::size_t> ads,
                                  std::span<const std::uint32_t> colors) {
  ColorfulBest out;
  if (ads.empty()) return out;
  const std::size_t k_full = inst.num_slots();

  std::vector<int> remap(k_full, -1);
  std::size_t present = 0;
  for (std::uint32_t c : colors)
    if (remap[c] < 0) remap[c] = static_cast<int>(present++);
  const std::size_t k = std::min(k_full, present);
  std::vector<std::vector<std::size_t>> by_color(k);
  for (std::size_t i = 0; i < ads.size(); ++i) by_color[static_cast<std::size_t>(remap[colors[i]])].push_back(ads[i]);

  const SlotLadder& ladder = inst.ladder();
  const std::size_t full = (std::size_t{1} << k) - 1;
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> memo(full + 1, kNone);
  std::vector<std::size_t> parent(full + 1, 0);
  memo[0] = 0.0;

  std::vector<std::size_t> masks(full);
  for (std::size_t m = 1; m <= full; ++m) masks[m - 1] = m;
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });

  for (std::size_t mask : masks) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    const std::size_t slot = k - size;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t bit = std::size_t{1} << c;
      if (!(mask & bit)) continue;
      const double tail = memo[mask ^ bit];
      if (tail == kNone) continue;
      for (std::size_t a : by_color[c]) {
        const double value = size == 1 ? inst.vbar(a) : inst.vbar(a) + inst.continuation(a) * ladder.lambda(slot) * tail;
        if (value > memo[mask]) {
          memo[mask] = value;
          parent[mask] = a;
        }
      }
    }
  }

  std::vector<std::size_t> color_of(inst.num_ads(), 0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t a : by_color[c]) color_of[a] = c;
  for (std::size_t mask = full; mask != 0;) {
    const std::size_t a = parent[mask];
    out.chosen.push_back(a);
    mask ^= std::size_t{1} << color_of[a];
  }
  out.value = welfare_of_indices(inst, out.chosen);
  return out;
}

inline std::vector<Coloring> draw_colorings(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t count) {
  std::vector<Coloring> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw_coloring(n, k, derive_seed(seed, i)));
  return out;
}

}  // namespace detail

inline ColorPassResult colored_pass(const AuctionInstance& inst, const Coloring& coloring) {
  if (coloring.colors.size() != inst.num_ads())
    throw Error(ErrorCode::invalid_params, "coloring size does not match the instance");
  if (inst.num_slots() > kMaxColorSlots) throw Error(ErrorCode::invalid_params, "color coding supports K <= 24");
  std::vector<char> hit(inst.num_slots(), 0);
  for (auto c : coloring.colors) {
    if (c >= inst.num_slots()) throw Error(ErrorCode::invalid_params, "color out of range");
    hit[c] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end())
    throw Error(ErrorCode::invalid_params, "coloring must use every color");

  std::vector<std::size_t> all(inst.num_ads());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto best = detail::colorful_best(inst, all, coloring.colors);
  ColorPassResult r;
  r.value = best.value;
  r.alloc = detail::to_allocation(inst, best.chosen);
  r.passes = 1;
  return r;
}

struct ColorCodingOptions {
  std::optional<std::size_t> iterations;  // default ceil(e^K ln 2)
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> time_budget_ms;  // checked between passes
};

// Best of R independent passes; the earliest pass wins ties.
inline ColorPassResult colored_ads(const AuctionInstance& inst, const ColorCodingOptions& opts = {}) {
  const std::size_t k = inst.num_slots();
  if (k > kMaxColorSlots) throw Error(ErrorCode::invalid_params, "color coding supports K <= 24");
  const std::size_t rounds = opts.iterations.value_or(default_color_iterations(k));
  if (rounds == 0) throw Error(ErrorCode::no_iterations, "color coding needs at least one iteration");

  std::vector<std::size_t> all(inst.num_ads());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  auto run_pass = [&](std::size_t i) {
    const Coloring col = draw_coloring(inst.num_ads(), k, derive_seed(opts.seed, i));
    return detail::colorful_best(inst, all, col.colors);
  };

  std::vector<detail::ColorfulBest> results;
  if (opts.time_budget_ms) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < rounds; ++i) {
      results.push_back(run_pass(i));
      const std::chrono::duration<double, std::milli> spent = std::chrono::steady_clock::now() - start;
      if (spent.count() >= *opts.time_budget_ms) break;
    }
  } else {
    results.resize(rounds);
    parallel_for(rounds, opts.threads, [&](std::size_t i) { results[i] = run_pass(i); });
  }

  std::size_t winner = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[winner].value) winner = i;

  ColorPassResult r;
  r.value = results[winner].value;
  r.alloc = detail::to_allocation(inst, results[winner].chosen);
  r.passes = results.size();
  r.best_iteration = winner;
  return r;
}

}  // namespace apdc
