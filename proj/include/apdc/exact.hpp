#pragma once

// Exact optimal allocation by depth-first branch and bound over full-length
// allocations (some optimum always fills every slot), plus a brute-force
// enumerator used as a test oracle.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "apdc/error.hpp"
#include "apdc/model.hpp"
#include "apdc/sorted_dp.hpp"

namespace apdc {

struct ExactOptions {
  std::optional<std::uint64_t> node_budget;
  std::size_t hard_cap = 20;  // max N without a budget
};

struct OracleResult {
  Allocation best_alloc;
  double best_value = 0.0;
  std::uint64_t nodes_explored = 0;
  bool complete = true;  // false when the node budget ran out
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const AuctionInstance& inst, const ExactOptions& opts)
      : inst_(inst), ladder_(inst.ladder()), n_(inst.num_ads()), k_(inst.num_slots()), opts_(opts), used_(n_, 0) {
    by_vbar_.resize(n_);
    std::iota(by_vbar_.begin(), by_vbar_.end(), std::size_t{0});
    by_cont_ = by_vbar_;
    std::stable_sort(by_vbar_.begin(), by_vbar_.end(),
                     [&](std::size_t a, std::size_t b) { return inst.vbar(a) > inst.vbar(b); });
    std::stable_sort(by_cont_.begin(), by_cont_.end(),
                     [&](std::size_t a, std::size_t b) { return inst.continuation(a) > inst.continuation(b); });

    const double lmax = ladder_.lambda_max();
    children_.resize(n_);
    std::iota(children_.begin(), children_.end(), std::size_t{0});
    std::stable_sort(children_.begin(), children_.end(), [&](std::size_t a, std::size_t b) {
      const double ka = ratio_key(inst.vbar(a), inst.continuation(a), lmax);
      const double kb = ratio_key(inst.vbar(b), inst.continuation(b), lmax);
      if (ka != kb) return ka > kb;
      return inst.ad(a).id < inst.ad(b).id;
    });
    top_v_.resize(k_);
    top_c_.resize(k_);
  }

  OracleResult run() {
    // Incumbent from the natural order, padded to full length.
    {
      auto seed = sorted_ads_indices(inst_, children_).chosen;
      std::vector<char> in(n_, 0);
      for (std::size_t i : seed) in[i] = 1;
      for (std::size_t i : children_)
        if (seed.size() < k_ && !in[i]) seed.push_back(i);
      best_seq_ = seed;
      best_ = welfare_of_indices(inst_, seed);
    }
    path_.reserve(k_);
    dfs(Prefix{0.0, 1.0});

    OracleResult r;
    r.best_alloc = to_allocation(inst_, best_seq_);
    r.best_value = welfare_of_indices(inst_, best_seq_);
    r.nodes_explored = nodes_;
    r.complete = !exhausted_;
    return r;
  }

 private:
  // Decouple-style bound on the remaining ads for slots depth..K-1,
  // normalised to prominence 1 at `depth`.
  double residual_bound(std::size_t depth) {
    const std::size_t m = k_ - depth;
    std::size_t got = 0;
    for (std::size_t i : by_vbar_) {
      if (got == m) break;
      if (!used_[i]) top_v_[got++] = inst_.vbar(i);
    }
    got = 0;
    for (std::size_t i : by_cont_) {
      if (got == m) break;
      if (!used_[i]) top_c_[got++] = inst_.continuation(i);
    }
    double sum = 0.0, mult = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += top_v_[i] * mult;
      if (depth + i + 1 < k_) mult *= top_c_[i] * ladder_.lambda(depth + i);
    }
    return sum;
  }

  bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&](std::size_t x, std::size_t y) {
      return inst_.ad(x).id < inst_.ad(y).id;
    });
  }

  void dfs(Prefix prefix) {
    const std::size_t depth = path_.size();
    if (depth == k_) {
      if (prefix.total > best_ || (prefix.total == best_ && lex_less(path_, best_seq_))) {
        best_ = prefix.total;
        best_seq_ = path_;
      }
      return;
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(best_));
    if (prefix.total + prefix.reach * residual_bound(depth) < best_ - slack) return;

    const double lam = depth + 1 < k_ ? ladder_.lambda(depth) : 0.0;
    for (std::size_t i : children_) {
      if (used_[i]) continue;
      if (opts_.node_budget && nodes_ >= *opts_.node_budget) {
        exhausted_ = true;
        return;
      }
      ++nodes_;
      used_[i] = 1;
      path_.push_back(i);
      dfs(extend(prefix, inst_.vbar(i), inst_.continuation(i), lam));
      path_.pop_back();
      used_[i] = 0;
      if (exhausted_) return;
    }
  }

  const AuctionInstance& inst_;
  const SlotLadder& ladder_;
  std::size_t n_, k_;
  ExactOptions opts_;
  std::vector<char> used_;
  std::vector<std::size_t> by_vbar_, by_cont_, children_;
  std::vector<double> top_v_, top_c_;
  std::vector<std::size_t> path_, best_seq_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

inline OracleResult solve_exact(const AuctionInstance& inst, const ExactOptions& opts = {}) {
  if (!opts.node_budget && inst.num_ads() > opts.hard_cap)
    throw Error(ErrorCode::instance_too_large, "N = " + std::to_string(inst.num_ads()) + " exceeds the cap of " +
                                                   std::to_string(opts.hard_cap) + " without a node budget");
  return detail::BranchAndBound(inst, opts).run();
}

inline constexpr std::size_t kEnumerateMaxAds = 10;

namespace detail {

template <typename Visitor>
void enumerate_rec(const AuctionInstance& inst, std::vector<std::size_t>& path, std::vector<char>& used,
                   Prefix prefix, Visitor& visit) {
  visit(static_cast<const std::vector<std::size_t>&>(path), prefix.total);
  const std::size_t depth = path.size();
  if (depth == inst.num_slots()) return;
  const double lam = depth + 1 < inst.num_slots() ? inst.ladder().lambda(depth) : 0.0;
  for (std::size_t i = 0; i < inst.num_ads(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    path.push_back(i);
    enumerate_rec(inst, path, used, extend(prefix, inst.vbar(i), inst.continuation(i), lam), visit);
    path.pop_back();
    used[i] = 0;
  }
}

}  // namespace detail

// Calls visit(indices, value) for every ordered subset of size <= K, the
// empty allocation first. Indices refer to inst.ads().
template <typename Visitor>
void enumerate_all_indices(const AuctionInstance& inst, Visitor&& visit) {
  if (inst.num_ads() > kEnumerateMaxAds)
    throw Error(ErrorCode::instance_too_large,
                "enumeration refused for N = " + std::to_string(inst.num_ads()) + " > 10");
  std::vector<std::size_t> path;
  std::vector<char> used(inst.num_ads(), 0);
  detail::enumerate_rec(inst, path, used, detail::Prefix{0.0, 1.0}, visit);
}

template <typename Visitor>
void enumerate_all(const AuctionInstance& inst, Visitor&& visit) {
  enumerate_all_indices(inst, [&](const std::vector<std::size_t>& idx, double value) {
    visit(detail::to_allocation(inst, idx), value);
  });
}

inline std::vector<std::pair<Allocation, double>> enumerate_all(const AuctionInstance& inst) {
  std::vector<std::pair<Allocation, double>> out;
  enumerate_all(inst, [&](Allocation a, double v) { out.emplace_back(std::move(a), v); });
  return out;
}

}  // namespace apdc
