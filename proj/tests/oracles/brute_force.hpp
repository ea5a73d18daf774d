#pragma once

// Reference implementations used only by tests. They are written from the
// metric definitions, not from the library code they check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "playindex/core_model.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Minimum over all injective maps from the smaller side into the larger one.
inline double min_assignment_cost(const Matrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  const bool transpose = rows > cols;
  const std::size_t small = transpose ? cols : rows;
  const std::size_t large = transpose ? rows : cols;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < small; ++i) c += transpose ? m[perm[i]][i] : m[i][perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Overlap along one axis as total extent minus the span of the union.
inline double iou(const playindex::BoundingBox& a, const playindex::BoundingBox& b) {
  const double span_x = std::max(a.x + a.w, b.x + b.w) - std::min(a.x, b.x);
  const double span_y = std::max(a.y + a.h, b.y + b.h) - std::min(a.y, b.y);
  const double ox = std::max(0.0, a.w + b.w - span_x);
  const double oy = std::max(0.0, a.h + b.h - span_y);
  const double inter = ox * oy;
  if (inter == 0.0) return 0.0;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

struct Pred {
  playindex::BoundingBox box;
  double score;
};

struct Frame {
  std::vector<Pred> preds;
  std::vector<playindex::BoundingBox> gts;
};

struct Report {
  double ap_range, ap_50, ap_75, ap_small, ap_large, ar_small, ar_large;
};

// 0 all, 1 small (32^2..96^2 inclusive), 2 large
inline int bucket_of(const playindex::BoundingBox& b) {
  const double a = b.w * b.h;
  if (a < 1024.0) return -1;
  return a <= 9216.0 ? 1 : 2;
}

/// For every prefix of the ranking, direct max over all points with recall >= r.
inline double ap_101(const std::vector<bool>& ranked_tp, std::size_t num_gt) {
  if (num_gt == 0) return 0.0;
  std::vector<double> rec, prec;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked_tp.size(); ++i) {
    if (ranked_tp[i]) ++tp;
    rec.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  double total = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    double best = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec[i] >= r) best = std::max(best, prec[i]);
    total += best;
  }
  return total / 101.0;
}

inline Report evaluate(const std::vector<Frame>& frames) {
  static constexpr std::array<double, 10> kThresholds{0.50, 0.55, 0.60, 0.65, 0.70,
                                                      0.75, 0.80, 0.85, 0.90, 0.95};
  std::array<std::array<double, 3>, 10> ap{};
  std::array<std::array<double, 3>, 10> ar{};
  for (std::size_t t = 0; t < kThresholds.size(); ++t) {
    for (int bucket = 0; bucket < 3; ++bucket) {
      struct Entry {
        double score;
        std::size_t frame, rank;
        bool tp;
      };
      std::vector<Entry> entries;
      std::size_t num_gt = 0;
      for (std::size_t f = 0; f < frames.size(); ++f) {
        std::vector<playindex::BoundingBox> gts;
        for (const auto& g : frames[f].gts)
          if (bucket_of(g) >= 0) gts.push_back(g);
        for (const auto& g : gts)
          if (bucket == 0 || bucket_of(g) == bucket) ++num_gt;
        // rank predictions: score desc, index asc
        std::vector<std::size_t> order(frames[f].preds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          const auto& pa = frames[f].preds[a];
          const auto& pb = frames[f].preds[b];
          return pa.score != pb.score ? pa.score > pb.score : a < b;
        });
        if (order.size() > 100) order.resize(100);
        std::vector<bool> used(gts.size(), false);
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
          const auto& p = frames[f].preds[order[rank]];
          int match = -1;
          double best = -1.0;
          for (std::size_t g = 0; g < gts.size(); ++g) {
            if (used[g]) continue;
            const double o = iou(p.box, gts[g]);
            if (o >= kThresholds[t] && o > best) {
              best = o;
              match = static_cast<int>(g);
            }
          }
          if (match >= 0) used[static_cast<std::size_t>(match)] = true;
          const int owner = match >= 0 ? bucket_of(gts[static_cast<std::size_t>(match)]) : bucket_of(p.box);
          const bool counts = bucket == 0 || owner == bucket;
          if (counts) entries.push_back({p.score, f, rank, match >= 0});
        }
      }
      std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.frame != b.frame) return a.frame < b.frame;
        return a.rank < b.rank;
      });
      std::vector<bool> ranked;
      std::size_t tp = 0;
      for (const auto& e : entries) {
        ranked.push_back(e.tp);
        if (e.tp) ++tp;
      }
      ap[t][static_cast<std::size_t>(bucket)] = ap_101(ranked, num_gt);
      ar[t][static_cast<std::size_t>(bucket)] =
          num_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(num_gt);
    }
  }
  Report r{};
  auto mean = [](const std::array<std::array<double, 3>, 10>& v, std::size_t b) {
    double s = 0.0;
    for (const auto& row : v) s += row[b];
    return s / 10.0;
  };
  r.ap_range = mean(ap, 0);
  r.ap_50 = ap[0][0];
  r.ap_75 = ap[5][0];
  r.ap_small = mean(ap, 1);
  r.ap_large = mean(ap, 2);
  r.ar_small = mean(ar, 1);
  r.ar_large = mean(ar, 2);
  return r;
}

}  // namespace oracle
