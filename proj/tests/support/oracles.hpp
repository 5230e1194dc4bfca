#pragma once

// Brute-force reference implementations used by the unit and acceptance
// suites. They evaluate welfare straight from the definition
// (sum of vbar * prominence * continuations above) and share no code with the
// solvers beyond the instance type.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "apdc/model.hpp"
#include "apdc/rng.hpp"

namespace oracle {

using apdc::AuctionInstance;

inline double prominence(const AuctionInstance& inst, std::size_t slot) {
  double p = 1.0;
  for (std::size_t k = 0; k < slot; ++k) p *= inst.ladder().lambdas()[k];
  return p;
}

// Allocation given as ad indices, placed from `start`.
inline double welfare(const AuctionInstance& inst, const std::vector<std::size_t>& idx, std::size_t start = 0) {
  double sw = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double above = 1.0;
    for (std::size_t j = 0; j < i; ++j) above *= inst.ads()[idx[j]].continuation;
    const auto& ad = inst.ads()[idx[i]];
    sw += ad.quality * ad.value * prominence(inst, start + i) * above;
  }
  return sw;
}

// Visits every ordered subset of at most `max_len` ads.
inline void for_each_sequence(std::size_t n, std::size_t max_len,
                              const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> seq;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    visit(seq);
    if (seq.size() == max_len) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      seq.push_back(i);
      rec();
      seq.pop_back();
      used[i] = false;
    }
  };
  rec();
}

struct Best {
  double value = 0.0;
  std::vector<std::size_t> seq;
};

inline Best best_allocation(const AuctionInstance& inst) {
  Best b;
  for_each_sequence(inst.num_ads(), inst.num_slots(), [&](const std::vector<std::size_t>& s) {
    const double v = welfare(inst, s);
    if (v > b.value) b = {v, s};
  });
  return b;
}

inline double best_full_length(const AuctionInstance& inst) {
  double best = 0.0;
  for_each_sequence(inst.num_ads(), inst.num_slots(), [&](const std::vector<std::size_t>& s) {
    if (s.size() == inst.num_slots()) best = std::max(best, welfare(inst, s));
  });
  return best;
}

// Best allocation whose ads appear in `order` order (order holds ad indices).
inline double best_in_order(const AuctionInstance& inst, const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > inst.num_slots()) continue;
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) seq.push_back(order[i]);
    best = std::max(best, welfare(inst, seq));
  }
  return best;
}

// Best full-length allocation whose ads carry pairwise distinct colors.
inline double best_colorful(const AuctionInstance& inst, const std::vector<std::uint32_t>& colors) {
  double best = 0.0;
  for_each_sequence(inst.num_ads(), inst.num_slots(), [&](const std::vector<std::size_t>& s) {
    if (s.size() != inst.num_slots()) return;
    std::vector<bool> seen(inst.num_slots(), false);
    for (std::size_t i : s) {
      if (seen[colors[i]]) return;
      seen[colors[i]] = true;
    }
    best = std::max(best, welfare(inst, s));
  });
  return best;
}

inline double w(double va, double ca, double vb, double cb, double x, double y) {
  // (1 - cb x)(va + ca y) - (1 - ca x)(vb + cb y)
  return (1.0 - cb * x) * (va + ca * y) - (1.0 - ca * x) * (vb + cb * y);
}

inline std::vector<std::size_t> dominator_counts(const AuctionInstance& inst, double lmax, double bound) {
  const std::size_t n = inst.num_ads();
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == b) continue;
      const auto& A = inst.ads()[a];
      const auto& B = inst.ads()[b];
      bool all = true;
      for (double x : {0.0, lmax})
        for (double y : {0.0, bound})
          all = all && w(A.vbar(), A.continuation, B.vbar(), B.continuation, x, y) > 0.0;
      if (all) ++counts[b];
    }
  return counts;
}

// UB(k) for k = 0..K-1 by direct summation.
inline std::vector<double> decouple(const AuctionInstance& inst) {
  std::vector<double> v, c;
  for (const auto& ad : inst.ads()) {
    v.push_back(ad.vbar());
    c.push_back(ad.continuation);
  }
  std::sort(v.rbegin(), v.rend());
  std::sort(c.rbegin(), c.rend());
  const std::size_t k = inst.num_slots();
  std::vector<double> ub(k, 0.0);
  for (std::size_t start = 0; start < k; ++start)
    for (std::size_t i = 0; start + i < k; ++i) {
      double term = v[i];
      for (std::size_t j = 0; j < i; ++j) term *= c[j] * inst.ladder().lambdas()[start + j];
      ub[start] += term;
    }
  return ub;
}

struct RandomSpec {
  std::size_t min_n = 1, max_n = 8;
  std::size_t max_k = 0;  // 0: up to N
  bool constant_lambda = false;
  double lambda_one_share = 0.0;  // probability that a constant ladder is all ones
  double special_share = 0.2;     // probability of c in {0, 1} or repeated values
};

// Random instance with a mix of generic and boundary values.
inline AuctionInstance random_instance(apdc::Xoshiro256& rng, const RandomSpec& spec = {}) {
  const std::size_t n = spec.min_n + rng.bounded(spec.max_n - spec.min_n + 1);
  const std::size_t kmax = spec.max_k ? std::min(spec.max_k, n) : n;
  const std::size_t k = 1 + rng.bounded(kmax);
  std::vector<apdc::Ad> ads;
  for (std::size_t i = 0; i < n; ++i) {
    apdc::Ad ad;
    ad.id = static_cast<apdc::AdId>(10 + 3 * i);
    ad.value = 2.0 * rng.uniform();
    ad.quality = rng.uniform();
    ad.continuation = rng.uniform();
    if (rng.uniform() < spec.special_share) ad.continuation = rng.uniform() < 0.5 ? 0.0 : 1.0;
    if (i > 0 && rng.uniform() < spec.special_share / 2) ad = {ad.id, ads.back().value, ads.back().quality, ad.continuation};
    ads.push_back(ad);
  }
  std::vector<double> lambdas(k);
  if (spec.constant_lambda) {
    const double l = rng.uniform() < spec.lambda_one_share ? 1.0 : rng.uniform();
    std::fill(lambdas.begin(), lambdas.end(), l);
  } else {
    for (auto& l : lambdas) l = rng.uniform() < 0.1 ? 1.0 : rng.uniform();
  }
  return AuctionInstance(std::move(ads), apdc::SlotLadder(k, lambdas));
}

inline std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace oracle
