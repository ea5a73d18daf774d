#pragma once

// Focal loss and detection/classification metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "playindex/core_model.hpp"
#include "playindex/geometry.hpp"

namespace playindex {

// ---------------------------------------------------------------------------
// Focal loss

/// Predicted class probabilities for one example and its true class.
struct ClassDistribution {
  std::vector<double> probs;
  std::size_t true_index = 0;
  double gamma = 2.0;  // focusing parameter
};

inline void validate(const ClassDistribution& d) {
  if (d.probs.size() < 2) throw InvariantError("probs: N >= 2 violated");
  if (d.true_index >= d.probs.size()) throw InvariantError("true_index in [0, N) violated");
  if (!(d.gamma >= 0.0) || !std::isfinite(d.gamma)) throw InvariantError("gamma >= 0 violated");
  double sum = 0.0;
  for (double p : d.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvariantError("probs: each p_i in [0,1] violated");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw InvariantError("probs: sum to 1 within 1e-6 violated");
}

inline constexpr double kProbabilityFloor = 1e-12;

/// -log(p_t) * (1 - p_t)^gamma. With a one-hot target the class sum
/// reduces to the true-class term. p_t is clamped to kProbabilityFloor.
inline double focal_loss_term(double p_t, double gamma) {
  const double p = std::clamp(p_t, kProbabilityFloor, 1.0);
  if (p == 1.0) return 0.0;
  return -std::log(p) * std::pow(1.0 - p, gamma);
}

inline double focal_loss(const ClassDistribution& d) {
  validate(d);
  return focal_loss_term(d.probs[d.true_index], d.gamma);
}

// ---------------------------------------------------------------------------
// Precision/recall curves and AP

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;  // recall non-decreasing
  std::size_t num_gt = 0;

  bool degenerate() const { return num_gt == 0; }
};

inline void validate(const PrCurve& c) {
  double prev = 0.0;
  for (const auto& p : c.points) {
    if (!(p.recall >= 0.0 && p.recall <= 1.0) || !(p.precision >= 0.0 && p.precision <= 1.0))
      throw InvariantError("pr curve: values in [0,1] violated");
    if (p.recall < prev) throw InvariantError("pr curve: recall non-decreasing violated");
    prev = p.recall;
  }
}

inline constexpr int kRecallGridSteps = 100;  // 101 points: 0.00, 0.01, ..., 1.00

/// 101-point interpolated AP. A curve with no ground truth has AP 0
/// (check PrCurve::degenerate()).
inline double average_precision(const PrCurve& curve) {
  validate(curve);
  if (curve.degenerate() || curve.points.empty()) return 0.0;
  // suffix maxima of precision: best precision at recall >= points[i].recall
  std::vector<double> best(curve.points.size());
  double running = 0.0;
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    running = std::max(running, curve.points[i].precision);
    best[i] = running;
  }
  double sum = 0.0;
  for (int k = 0; k <= kRecallGridSteps; ++k) {
    const double r = static_cast<double>(k) / kRecallGridSteps;
    const auto it = std::lower_bound(curve.points.begin(), curve.points.end(), r,
                                     [](const PrPoint& p, double v) { return p.recall < v; });
    if (it != curve.points.end()) sum += best[static_cast<std::size_t>(it - curve.points.begin())];
  }
  return sum / (kRecallGridSteps + 1);
}

/// Builds the curve from detections ranked by confidence (true = TP).
inline PrCurve pr_curve_from_ranked(const std::vector<bool>& ranked_tp, std::size_t num_gt) {
  PrCurve c;
  c.num_gt = num_gt;
  if (num_gt == 0) return c;
  std::size_t tp = 0;
  std::size_t fp = 0;
  c.points.reserve(ranked_tp.size());
  for (bool hit : ranked_tp) {
    hit ? ++tp : ++fp;
    c.points.push_back({static_cast<double>(tp) / static_cast<double>(num_gt),
                        static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Detection evaluation

using PredictionsByFrame = std::map<std::int64_t, std::vector<ScoredBox>>;
using TruthByFrame = std::map<std::int64_t, std::vector<BoundingBox>>;

inline constexpr std::size_t kNumIouThresholds = 10;

/// 0.50, 0.55, ..., 0.95.
inline double iou_threshold_at(std::size_t k) {
  return static_cast<double>(50 + 5 * k) / 100.0;
}

struct EvalParams {
  std::size_t max_detections = 100;  // per frame, for AP and AR
};

struct EvalReport {
  double ap_range = 0.0;  // mean AP over IoU 0.50:0.95
  double ap_50 = 0.0;
  double ap_75 = 0.0;
  double ap_small = 0.0;
  double ap_large = 0.0;
  double ar_small = 0.0;
  double ar_large = 0.0;
  std::array<double, kNumIouThresholds> ap_per_threshold{};
  // Set when the bucket has no ground truth; the bucket's AP/AR are then 0.
  bool no_gt_all = false;
  bool no_gt_small = false;
  bool no_gt_large = false;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

namespace detail {

enum class EvalBucket { all = 0, small = 1, large = 2 };

inline bool in_bucket(SizeBucket b, EvalBucket e) {
  switch (e) {
    case EvalBucket::all: return true;
    case EvalBucket::small: return b == SizeBucket::small;
    case EvalBucket::large: return b == SizeBucket::large;
  }
  return false;
}

}  // namespace detail

/// COCO-style evaluation. Ground truth below 32x32 is dropped before
/// scoring. For the size buckets a matched prediction inherits its ground
/// truth's bucket; an unmatched one counts as FP in the bucket of its own area.
inline EvalReport evaluate_detections(const PredictionsByFrame& preds, const TruthByFrame& gts,
                                      const EvalParams& params = {}) {
  std::vector<std::int64_t> orphans;
  for (const auto& [f, _] : preds)
    if (!gts.contains(f)) orphans.push_back(f);
  for (const auto& [f, _] : gts)
    if (!preds.contains(f)) orphans.push_back(f);
  if (!orphans.empty()) {
    std::sort(orphans.begin(), orphans.end());
    throw InputError(fmt::format("misaligned frames: {}", fmt::join(orphans, ", ")));
  }

  using detail::EvalBucket;
  constexpr std::array<EvalBucket, 3> kBuckets{EvalBucket::all, EvalBucket::small,
                                               EvalBucket::large};

  struct Ranked {
    double score;
    bool tp;
  };
  // [threshold][bucket] -> detections in frame order, then score order
  std::array<std::array<std::vector<Ranked>, 3>, kNumIouThresholds> ranked;
  std::array<std::size_t, 3> num_gt{};

  for (const auto& [frame, frame_preds] : preds) {
    std::vector<BoundingBox> kept_gts;
    std::vector<SizeBucket> gt_bucket;
    for (const auto& g : gts.at(frame)) {
      validate(g, "ground truth box");
      const SizeBucket b = size_bucket(g);
      if (b == SizeBucket::excluded) continue;
      kept_gts.push_back(g);
      gt_bucket.push_back(b);
      for (auto e : kBuckets)
        if (detail::in_bucket(b, e)) ++num_gt[static_cast<int>(e)];
    }

    std::vector<ScoredBox> top;
    for (const std::size_t i : score_order(frame_preds)) {
      if (top.size() == params.max_detections) break;
      validate(frame_preds[i].box, "prediction box");
      top.push_back(frame_preds[i]);
    }

    for (std::size_t k = 0; k < kNumIouThresholds; ++k) {
      const auto match = match_detections(top, kept_gts, iou_threshold_at(k));
      for (std::size_t p = 0; p < top.size(); ++p) {
        const SizeBucket own = match[p] ? gt_bucket[*match[p]] : size_bucket(top[p].box);
        for (auto e : kBuckets)
          if (detail::in_bucket(own, e))
            ranked[k][static_cast<int>(e)].push_back({top[p].score, match[p].has_value()});
      }
    }
  }

  EvalReport report;
  std::array<double, 3> ap_sum{};
  std::array<double, 3> ar_sum{};
  for (std::size_t k = 0; k < kNumIouThresholds; ++k) {
    for (auto e : kBuckets) {
      auto& dets = ranked[k][static_cast<int>(e)];
      std::stable_sort(dets.begin(), dets.end(),
                       [](const Ranked& a, const Ranked& b) { return a.score > b.score; });
      std::vector<bool> hits;
      hits.reserve(dets.size());
      for (const auto& d : dets) hits.push_back(d.tp);
      const std::size_t ngt = num_gt[static_cast<int>(e)];
      const PrCurve curve = pr_curve_from_ranked(hits, ngt);
      const double ap = average_precision(curve);
      const double ar = curve.points.empty() ? 0.0 : curve.points.back().recall;
      ap_sum[static_cast<int>(e)] += ap;
      ar_sum[static_cast<int>(e)] += ar;
      if (e == EvalBucket::all) report.ap_per_threshold[k] = ap;
    }
  }

  const double n = static_cast<double>(kNumIouThresholds);
  report.ap_range = ap_sum[0] / n;
  report.ap_50 = report.ap_per_threshold[0];
  report.ap_75 = report.ap_per_threshold[5];
  report.ap_small = ap_sum[1] / n;
  report.ap_large = ap_sum[2] / n;
  report.ar_small = ar_sum[1] / n;
  report.ar_large = ar_sum[2] / n;
  report.no_gt_all = num_gt[0] == 0;
  report.no_gt_small = num_gt[1] == 0;
  report.no_gt_large = num_gt[2] == 0;
  return report;
}

/// Key-value block using the row names of the usual detection table.
inline std::string format_eval_report(const EvalReport& r) {
  std::string out;
  auto line = [&](std::string_view key, double v) { out += fmt::format("{} {:.6f}\n", key, v); };
  line("AP_{0.5:0.95}", r.ap_range);
  line("AP_{0.50}", r.ap_50);
  line("AP_{0.75}", r.ap_75);
  line("AP_small", r.ap_small);
  line("AP_large", r.ap_large);
  line("AR_small", r.ar_small);
  line("AR_large", r.ar_large);
  return out;
}

// ---------------------------------------------------------------------------
// Counts-based metrics

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;  // some denominator was zero
};

inline PrecisionRecallF1 prf1(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecallF1 r;
  const auto ratio = [&](std::size_t num, std::size_t den) {
    if (den == 0) {
      r.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  if (r.precision + r.recall > 0.0)
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  else
    r.degenerate = true;
  return r;
}

inline constexpr int kNumDigits = 10;

struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumDigits>, kNumDigits> counts{};  // [true][predicted]
  // counts divided by the support of the most frequent true class
  std::array<std::array<double, kNumDigits>, kNumDigits> normalized{};

  std::size_t support(int true_digit) const {
    std::size_t s = 0;
    for (auto c : counts[static_cast<std::size_t>(true_digit)]) s += c;
    return s;
  }
};

inline ConfusionMatrix confusion_matrix(std::span<const std::pair<int, int>> pairs) {
  ConfusionMatrix m;
  for (const auto& [t, p] : pairs) {
    if (t < 0 || t > 9 || p < 0 || p > 9)
      throw InputError(fmt::format("digit pair ({}, {}) outside 0-9", t, p));
    ++m.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  std::size_t largest = 0;
  for (int t = 0; t < kNumDigits; ++t) largest = std::max(largest, m.support(t));
  if (largest == 0) return m;
  for (std::size_t t = 0; t < kNumDigits; ++t)
    for (std::size_t p = 0; p < kNumDigits; ++p)
      m.normalized[t][p] = static_cast<double>(m.counts[t][p]) / static_cast<double>(largest);
  return m;
}

inline std::string format_confusion_matrix(const ConfusionMatrix& m) {
  std::string out = "# confusion counts [true][predicted]\n";
  for (const auto& row : m.counts) out += fmt::format("{}\n", fmt::join(row, " "));
  out += "# normalized to largest class support\n";
  for (const auto& row : m.normalized) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(fmt::format("{:.4f}", v));
    out += fmt::format("{}\n", fmt::join(cells, " "));
  }
  return out;
}

}  // namespace playindex
