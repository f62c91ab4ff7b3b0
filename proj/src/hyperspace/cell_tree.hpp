#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <vector>

#include "skewlab/gridset.hpp"

namespace skewlab::detail {

// Chebyshev nearest-neighbor search over cell coordinates, periodic in the
// torus coordinates. Queries may restrict the fiber coordinate of the
// candidates to [lo, hi].
class CellTree {
 public:
  explicit CellTree(const GridSet& s)
      : dims_(s.geometry().torus_dims + 1),
        period_(s.geometry().cells_per_unit) {
    pts_.reserve(s.size());
    for (std::uint64_t c : s.cells()) {
      CellCoord q = s.decode(c);
      Point p{};
      for (std::size_t d = 0; d < dims_; ++d) p[d] = static_cast<std::int32_t>(q[d]);
      pts_.push_back(p);
    }
    nodes_.reserve(2 * pts_.size() / kLeaf + 2);
    build(0, pts_.size());
  }

  // Smallest distance from q to the set, or any value <= stop as soon as
  // one is found.
  std::int64_t nearest(const CellCoord& q, std::int64_t stop) const {
    return nearest(q, stop, std::numeric_limits<std::int32_t>::min(),
                   std::numeric_limits<std::int32_t>::max());
  }
  std::int64_t nearest(const CellCoord& q, std::int64_t stop, std::int64_t lo,
                       std::int64_t hi) const {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    if (!pts_.empty()) search(0, q, stop, lo, hi, best);
    return best;
  }

 private:
  static constexpr std::size_t kLeaf = 16;
  using Point = std::array<std::int32_t, kMaxTorusDim + 1>;

  struct Node {
    std::uint32_t lo, hi;
    std::int32_t left = -1, right = -1;
    Point min, max;
  };

  std::int64_t axis_gap(std::size_t d, std::int64_t q, std::int64_t lo,
                        std::int64_t hi) const {
    if (q >= lo && q <= hi) return 0;
    if (d + 1 == dims_) return q < lo ? lo - q : q - hi;
    auto circ = [&](std::int64_t a, std::int64_t b) {
      std::int64_t d0 = std::llabs(a - b);
      return std::min(d0, static_cast<std::int64_t>(period_) - d0);
    };
    return std::min(circ(q, lo), circ(q, hi));
  }

  std::int64_t point_dist(const CellCoord& a, const Point& b) const {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < dims_; ++i) {
      std::int64_t g = std::llabs(a[i] - b[i]);
      if (i + 1 < dims_) g = std::min(g, static_cast<std::int64_t>(period_) - g);
      d = std::max(d, g);
    }
    return d;
  }

  std::int32_t build(std::size_t lo, std::size_t hi) {
    Node n;
    n.lo = static_cast<std::uint32_t>(lo);
    n.hi = static_cast<std::uint32_t>(hi);
    for (std::size_t d = 0; d < dims_; ++d) {
      n.min[d] = std::numeric_limits<std::int32_t>::max();
      n.max[d] = std::numeric_limits<std::int32_t>::min();
    }
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t d = 0; d < dims_; ++d) {
        n.min[d] = std::min(n.min[d], pts_[i][d]);
        n.max[d] = std::max(n.max[d], pts_[i][d]);
      }
    std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(n);
    if (hi - lo <= kLeaf) return id;
    std::size_t axis = 0;
    std::int32_t spread = -1;
    for (std::size_t d = 0; d < dims_; ++d)
      if (n.max[d] - n.min[d] > spread) {
        spread = n.max[d] - n.min[d];
        axis = d;
      }
    std::size_t mid = (lo + hi) / 2;
    std::nth_element(pts_.begin() + static_cast<std::ptrdiff_t>(lo),
                     pts_.begin() + static_cast<std::ptrdiff_t>(mid),
                     pts_.begin() + static_cast<std::ptrdiff_t>(hi),
                     [axis](const Point& a, const Point& b) { return a[axis] < b[axis]; });
    std::int32_t l = build(lo, mid);
    std::int32_t r = build(mid, hi);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::int64_t box_dist(const Node& n, const CellCoord& q) const {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < dims_; ++i) d = std::max(d, axis_gap(i, q[i], n.min[i], n.max[i]));
    return d;
  }

  bool search(std::int32_t id, const CellCoord& q, std::int64_t stop,
              std::int64_t lo, std::int64_t hi, std::int64_t& best) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    const std::size_t f = dims_ - 1;
    if (n.max[f] < lo || n.min[f] > hi) return false;
    if (box_dist(n, q) >= best) return false;
    if (n.left < 0) {
      for (std::size_t i = n.lo; i < n.hi; ++i) {
        if (pts_[i][f] < lo || pts_[i][f] > hi) continue;
        best = std::min(best, point_dist(q, pts_[i]));
        if (best <= stop) return true;
      }
      return false;
    }
    std::int32_t a = n.left, b = n.right;
    if (box_dist(nodes_[static_cast<std::size_t>(b)], q) <
        box_dist(nodes_[static_cast<std::size_t>(a)], q))
      std::swap(a, b);
    if (search(a, q, stop, lo, hi, best)) return true;
    return search(b, q, stop, lo, hi, best);
  }

  std::size_t dims_;
  std::uint32_t period_;
  std::vector<Point> pts_;
  std::vector<Node> nodes_;
};

}  // namespace skewlab::detail
