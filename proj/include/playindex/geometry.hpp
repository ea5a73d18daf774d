#pragma once

// Box overlap, size buckets and bipartite matching. Shared by detection
// evaluation and digit suppression.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "playindex/core_model.hpp"

namespace playindex {

inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = iw * ih;
  if (inter <= 0.0) return 0.0;
  if (a == b) return 1.0;
  const double uni = a.area() + b.area() - inter;
  return std::min(1.0, inter / uni);
}

enum class SizeBucket { excluded, small, large };

inline constexpr double kSmallMinArea = 32.0 * 32.0;
inline constexpr double kSmallMaxArea = 96.0 * 96.0;

/// excluded below 32x32, small up to and including 96x96, large above.
inline SizeBucket size_bucket(const BoundingBox& b) {
  const double area = b.area();
  if (area < kSmallMinArea) return SizeBucket::excluded;
  if (area <= kSmallMaxArea) return SizeBucket::small;
  return SizeBucket::large;
}

/// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InputError("cost matrix rows must have equal length");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending by row
  double total_cost = 0.0;
};

namespace detail {

// Shortest augmenting path with row/column potentials, O(rows^2 * cols).
// Requires rows <= cols; every row is assigned. Returns the column for each row.
inline std::vector<std::size_t> solve_assignment_rows_le_cols(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = 0;  // index 0 is the virtual column/row

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> col_owner(m + 1, kNone);  // 1-based row owning column j
  std::vector<std::size_t> way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = col_owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != kNone);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (col_owner[j] != kNone) row_to_col[col_owner[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace detail

/// Minimum-cost one-to-one assignment of min(rows, cols) pairs. The smaller
/// side is fully matched, which is equivalent to zero-cost padding.
inline Assignment hungarian_assign(const CostMatrix& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) throw InputError("cost matrix must be at least 1x1");
  for (std::size_t r = 0; r < cost.rows(); ++r)
    for (std::size_t c = 0; c < cost.cols(); ++c)
      if (!std::isfinite(cost(r, c)))
        throw InputError(fmt::format("non-finite cost at ({}, {})", r, c));

  Assignment out;
  if (cost.rows() <= cost.cols()) {
    const auto cols = detail::solve_assignment_rows_le_cols(cost);
    for (std::size_t r = 0; r < cols.size(); ++r) out.pairs.emplace_back(r, cols[r]);
  } else {
    CostMatrix t(cost.cols(), cost.rows());
    for (std::size_t r = 0; r < cost.rows(); ++r)
      for (std::size_t c = 0; c < cost.cols(); ++c) t(c, r) = cost(r, c);
    const auto rows = detail::solve_assignment_rows_le_cols(t);
    for (std::size_t c = 0; c < rows.size(); ++c) out.pairs.emplace_back(rows[c], c);
    std::sort(out.pairs.begin(), out.pairs.end());
  }
  for (const auto& [r, c] : out.pairs) out.total_cost += cost(r, c);
  return out;
}

struct ScoredBox {
  BoundingBox box;
  double score = 0.0;
};

/// Indices of `preds` in descending score order; equal scores keep the lower index first.
inline std::vector<std::size_t> score_order(std::span<const ScoredBox> preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].score > preds[b].score;
  });
  return order;
}

/// Greedy evaluation matching. Each prediction, in descending score order,
/// takes the unmatched ground truth of highest IoU >= threshold (lower gt
/// index on ties). Returns the matched gt index per prediction.
inline std::vector<std::optional<std::size_t>> match_detections(
    std::span<const ScoredBox> preds, std::span<const BoundingBox> gts, double iou_threshold) {
  std::vector<std::optional<std::size_t>> match(preds.size());
  std::vector<char> taken(gts.size(), 0);
  for (const std::size_t p : score_order(preds)) {
    double best = iou_threshold;
    std::optional<std::size_t> best_gt;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double o = iou(preds[p].box, gts[g]);
      if (o >= iou_threshold && (!best_gt || o > best)) {
        best = o;
        best_gt = g;
      }
    }
    if (best_gt) {
      taken[*best_gt] = 1;
      match[p] = best_gt;
    }
  }
  return match;
}

}  // namespace playindex
