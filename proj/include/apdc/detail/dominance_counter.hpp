#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace apdc::detail {

// Dynamic 2-D dominance counting over a point universe known up front.
// Points are (u, v) with u, v in [0, n); insert/erase/count are O(log^2 n).
// A Fenwick tree over u whose nodes keep the sorted v's of their range plus
// an inner Fenwick of presence counts.
class DominanceCounter2D {
 public:
  DominanceCounter2D(std::vector<std::size_t> u, std::vector<std::size_t> v)
      : u_(std::move(u)), v_(std::move(v)), lists_(u_.size() + 1), trees_(u_.size() + 1) {
    const std::size_t n = u_.size();
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t j = u_[p] + 1; j <= n; j += j & (~j + 1)) lists_[j].push_back(v_[p]);
    for (std::size_t j = 1; j <= n; ++j) {
      std::sort(lists_[j].begin(), lists_[j].end());
      trees_[j].assign(lists_[j].size() + 1, 0);
    }
  }

  void insert(std::size_t point) { update(point, +1); }
  void erase(std::size_t point) { update(point, -1); }

  // Number of present points w with w.u < u and w.v < v.
  std::size_t count_below(std::size_t u, std::size_t v) const {
    long total = 0;
    for (std::size_t j = u; j > 0; j -= j & (~j + 1)) {
      const auto& list = lists_[j];
      const std::size_t pos = std::lower_bound(list.begin(), list.end(), v) - list.begin();
      const auto& tree = trees_[j];
      for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) total += tree[i];
    }
    return static_cast<std::size_t>(total);
  }

  std::size_t size() const noexcept { return present_; }

 private:
  void update(std::size_t point, int delta) {
    const std::size_t n = u_.size();
    for (std::size_t j = u_[point] + 1; j <= n; j += j & (~j + 1)) {
      const auto& list = lists_[j];
      const std::size_t pos = std::lower_bound(list.begin(), list.end(), v_[point]) - list.begin() + 1;
      auto& tree = trees_[j];
      for (std::size_t i = pos; i < tree.size(); i += i & (~i + 1)) tree[i] += delta;
    }
    present_ = static_cast<std::size_t>(static_cast<long>(present_) + delta);
  }

  std::vector<std::size_t> u_, v_;
  std::vector<std::vector<std::size_t>> lists_;
  std::vector<std::vector<int>> trees_;
  std::size_t present_ = 0;
};

}  // namespace apdc::detail
