#pragma once

// Ad/position-dependent cascade (APDC) model: ads, slot ladders, instances,
// allocations, click-through rates and social welfare.
//
// Slots are 0-based throughout the API. Slot s has prominence
// prominence(s) = lambda(0) * ... * lambda(s-1), so prominence(0) == 1.
// The last factor lambda(K-1) is kept for round-tripping but never read.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apdc/error.hpp"

namespace apdc {

using AdId = std::int64_t;

struct Ad {
  AdId id = 0;
  double value = 0.0;         // money per click
  double quality = 0.0;       // click probability once observed
  double continuation = 0.0;  // probability the user keeps scanning

  double vbar() const noexcept { return quality * value; }

  friend bool operator==(const Ad&, const Ad&) = default;
};

class SlotLadder {
 public:
  SlotLadder() = default;

  // Accepts either K or K-1 factors; a missing last factor is stored as 0.
  SlotLadder(std::size_t slots, std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    if (slots == 0) throw Error(ErrorCode::invalid_instance, "ladder must have at least one slot");
    if (lambdas_.size() + 1 == slots) lambdas_.push_back(0.0);
    if (lambdas_.size() != slots)
      throw Error(ErrorCode::invalid_instance,
                  "lambdas: expected " + std::to_string(slots) + " or " + std::to_string(slots - 1) +
                      " values, got " + std::to_string(lambdas_.size()));
    for (std::size_t k = 0; k < lambdas_.size(); ++k) {
      const double l = lambdas_[k];
      if (!(l >= 0.0 && l <= 1.0))
        throw Error(ErrorCode::invalid_instance, "lambdas[" + std::to_string(k) + "] must lie in [0,1]");
    }
    prominence_.assign(slots, 1.0);
    for (std::size_t s = 1; s < slots; ++s) prominence_[s] = prominence_[s - 1] * lambdas_[s - 1];
  }

  std::size_t size() const noexcept { return lambdas_.size(); }
  double lambda(std::size_t k) const { return lambdas_.at(k); }
  double prominence(std::size_t s) const { return prominence_.at(s); }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }

  // max over the factors that can actually be read, i.e. all but the last.
  double lambda_max() const noexcept {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < lambdas_.size(); ++k) m = std::max(m, lambdas_[k]);
    return m;
  }

  // First `slots` slots of this ladder (the new last factor is carried along).
  SlotLadder truncated(std::size_t slots) const {
    return SlotLadder(slots, std::vector<double>(lambdas_.begin(), lambdas_.begin() + slots));
  }

 private:
  std::vector<double> lambdas_;
  std::vector<double> prominence_;
};

class AuctionInstance {
 public:
  AuctionInstance() = default;

  AuctionInstance(std::vector<Ad> ads, SlotLadder ladder) : ads_(std::move(ads)), ladder_(std::move(ladder)) {
    if (ladder_.size() == 0) throw Error(ErrorCode::invalid_instance, "K must be at least 1");
    if (ladder_.size() > ads_.size())
      throw Error(ErrorCode::invalid_instance, "K (" + std::to_string(ladder_.size()) +
                                                   ") exceeds the number of ads (" + std::to_string(ads_.size()) +
                                                   ")");
    index_.reserve(ads_.size());
    vbar_.reserve(ads_.size());
    for (std::size_t i = 0; i < ads_.size(); ++i) {
      const Ad& ad = ads_[i];
      const std::string where = "ads[" + std::to_string(i) + "]";
      if (!(ad.value >= 0.0) || !std::isfinite(ad.value))
        throw Error(ErrorCode::invalid_instance, where + ".v must be finite and >= 0");
      if (!(ad.quality >= 0.0 && ad.quality <= 1.0))
        throw Error(ErrorCode::invalid_instance, where + ".q must lie in [0,1]");
      if (!(ad.continuation >= 0.0 && ad.continuation <= 1.0))
        throw Error(ErrorCode::invalid_instance, where + ".c must lie in [0,1]");
      if (!index_.emplace(ad.id, i).second)
        throw Error(ErrorCode::invalid_instance, where + ".id duplicates id " + std::to_string(ad.id));
      vbar_.push_back(ad.vbar());
    }
  }

  std::size_t num_ads() const noexcept { return ads_.size(); }
  std::size_t num_slots() const noexcept { return ladder_.size(); }
  const std::vector<Ad>& ads() const noexcept { return ads_; }
  const Ad& ad(std::size_t index) const { return ads_.at(index); }
  const SlotLadder& ladder() const noexcept { return ladder_; }

  double vbar(std::size_t index) const noexcept { return vbar_[index]; }
  double continuation(std::size_t index) const noexcept { return ads_[index].continuation; }

  std::optional<std::size_t> index_of(AdId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<AdId> ids() const {
    std::vector<AdId> out;
    out.reserve(ads_.size());
    for (const Ad& ad : ads_) out.push_back(ad.id);
    return out;
  }

  // Sub-instance over the given ad indices (in that order). Slots are clamped
  // to the number of kept ads.
  AuctionInstance subset(std::span<const std::size_t> indices) const {
    std::vector<Ad> kept;
    kept.reserve(indices.size());
    for (std::size_t i : indices) kept.push_back(ads_.at(i));
    const std::size_t slots = std::min(ladder_.size(), kept.size());
    return AuctionInstance(std::move(kept), ladder_.truncated(slots));
  }

  // Same instance with every ad except `index`; requires at least two ads.
  AuctionInstance without(std::size_t index) const {
    std::vector<std::size_t> keep;
    keep.reserve(ads_.size());
    for (std::size_t i = 0; i < ads_.size(); ++i)
      if (i != index) keep.push_back(i);
    return subset(keep);
  }

  // Same instance with per-click values replaced (used for reported bids).
  AuctionInstance with_values(std::span<const double> values) const {
    if (values.size() != ads_.size()) throw Error(ErrorCode::invalid_params, "value vector size mismatch");
    std::vector<Ad> out = ads_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].value = values[i];
    return AuctionInstance(std::move(out), ladder_);
  }

  AuctionInstance with_ladder(SlotLadder ladder) const { return AuctionInstance(ads_, std::move(ladder)); }

 private:
  std::vector<Ad> ads_;
  SlotLadder ladder_;
  std::unordered_map<AdId, std::size_t> index_;
  std::vector<double> vbar_;
};

// Ordered ad ids; entry i sits in slot i, or in slot K-n+i when right-aligned.
struct Allocation {
  std::vector<AdId> slots;
  bool right_aligned = false;

  std::size_t size() const noexcept { return slots.size(); }
  bool empty() const noexcept { return slots.empty(); }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

namespace detail {

// Running state while filling slots top to bottom. `reach` is the probability
// the user observes the next slot: prominence times continuations above.
// Every solver extends prefixes through this one routine so that identical
// allocations evaluate to bit-identical welfare.
struct Prefix {
  double total = 0.0;
  double reach = 1.0;
};

inline Prefix extend(Prefix p, double vbar, double continuation, double lambda_here) noexcept {
  p.total = p.total + vbar * p.reach;
  p.reach = p.reach * (continuation * lambda_here);
  return p;
}

inline std::size_t first_slot(const AuctionInstance& inst, std::size_t n, bool right_aligned) noexcept {
  return right_aligned ? inst.num_slots() - n : 0;
}

// Welfare of ad indices placed from `start` downwards.
inline double welfare_of_indices(const AuctionInstance& inst, std::span<const std::size_t> idx,
                                 std::size_t start = 0) {
  const SlotLadder& ladder = inst.ladder();
  Prefix p{0.0, ladder.prominence(start)};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::size_t s = start + i;
    const double lam = s + 1 < ladder.size() ? ladder.lambda(s) : 0.0;
    p = extend(p, inst.vbar(idx[i]), inst.continuation(idx[i]), lam);
  }
  return p.total;
}

inline std::vector<std::size_t> resolve(const AuctionInstance& inst, const Allocation& alloc) {
  if (alloc.size() > inst.num_slots())
    throw Error(ErrorCode::invalid_allocation, "allocation uses " + std::to_string(alloc.size()) +
                                                   " slots but K = " + std::to_string(inst.num_slots()));
  std::vector<std::size_t> idx;
  idx.reserve(alloc.size());
  std::vector<char> seen(inst.num_ads(), 0);
  for (AdId id : alloc.slots) {
    auto i = inst.index_of(id);
    if (!i) throw Error(ErrorCode::invalid_allocation, "unknown ad id " + std::to_string(id));
    if (seen[*i]) throw Error(ErrorCode::invalid_allocation, "ad id " + std::to_string(id) + " allocated twice");
    seen[*i] = 1;
    idx.push_back(*i);
  }
  return idx;
}

inline Allocation to_allocation(const AuctionInstance& inst, std::span<const std::size_t> idx,
                                bool right_aligned = false) {
  Allocation a;
  a.right_aligned = right_aligned;
  a.slots.reserve(idx.size());
  for (std::size_t i : idx) a.slots.push_back(inst.ad(i).id);
  return a;
}

}  // namespace detail

inline void validate(const AuctionInstance& inst, const Allocation& alloc) { (void)detail::resolve(inst, alloc); }

// Slot (0-based) the allocation assigns to `id`, if any.
inline std::optional<std::size_t> slot_of(const AuctionInstance& inst, const Allocation& alloc, AdId id) {
  for (std::size_t i = 0; i < alloc.size(); ++i)
    if (alloc.slots[i] == id) return detail::first_slot(inst, alloc.size(), alloc.right_aligned) + i;
  return std::nullopt;
}

// Click probability of `id`: q * prominence(slot) * product of continuations above.
inline double ctr(const AuctionInstance& inst, const Allocation& alloc, AdId id) {
  const auto idx = detail::resolve(inst, alloc);
  const std::size_t start = detail::first_slot(inst, alloc.size(), alloc.right_aligned);
  double cascade = 1.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Ad& ad = inst.ad(idx[i]);
    if (ad.id == id) return ad.quality * inst.ladder().prominence(start + i) * cascade;
    cascade *= ad.continuation;
  }
  throw Error(ErrorCode::not_allocated, "ad " + std::to_string(id) + " is not allocated");
}

inline double social_welfare(const AuctionInstance& inst, const Allocation& alloc) {
  const auto idx = detail::resolve(inst, alloc);
  return detail::welfare_of_indices(inst, idx, detail::first_slot(inst, idx.size(), alloc.right_aligned));
}

}  // namespace apdc
