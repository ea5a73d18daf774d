#pragma once

// Jersey numbers from per-digit detections: confidence filtering, in-crop
// suppression, then left-to-right composition.

#include <algorithm>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "playindex/core_model.hpp"
#include "playindex/geometry.hpp"

namespace playindex {

struct AssemblyConfig {
  double iou_suppress_threshold = 0.55;
  double confidence_threshold = 0.97;
  int max_digits = 2;
};

inline void validate(const AssemblyConfig& c) {
  if (!(c.iou_suppress_threshold > 0.0 && c.iou_suppress_threshold < 1.0))
    throw InvariantError("iou_suppress_threshold in (0,1) violated");
  if (!(c.confidence_threshold > 0.0 && c.confidence_threshold < 1.0))
    throw InvariantError("confidence_threshold in (0,1) violated");
  if (c.max_digits < 1) throw InvariantError("max_digits >= 1 violated");
}

namespace detail {

// Total order used wherever digits are ranked by confidence, so results do
// not depend on input order.
inline bool more_confident(const DigitDetection& a, const DigitDetection& b) {
  return std::tuple(-a.confidence, a.box.center_x(), a.digit, a.box.x, a.box.y, a.box.w, a.box.h) <
         std::tuple(-b.confidence, b.box.center_x(), b.digit, b.box.x, b.box.y, b.box.w, b.box.h);
}

}  // namespace detail

/// Drops detections under the confidence threshold, then greedily keeps the
/// most confident ones whose IoU with every kept detection is below the
/// suppression threshold. Output is in descending confidence.
inline std::vector<DigitDetection> suppress_digits(std::span<const DigitDetection> digits,
                                                   const AssemblyConfig& cfg = {}) {
  validate(cfg);
  std::vector<DigitDetection> candidates;
  for (const auto& d : digits)
    if (d.confidence >= cfg.confidence_threshold) candidates.push_back(d);
  std::sort(candidates.begin(), candidates.end(), detail::more_confident);

  std::vector<DigitDetection> kept;
  for (const auto& c : candidates) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const DigitDetection& k) {
      return iou(k.box, c.box) >= cfg.iou_suppress_threshold;
    });
    if (!overlaps) kept.push_back(c);
  }
  return kept;
}

/// Reads already-suppressed digits left to right. More than max_digits
/// survivors are truncated to the most confident ones. Returns nullopt for
/// no digits or a value above 99.
inline std::optional<int> assemble_number(std::span<const DigitDetection> digits,
                                          const AssemblyConfig& cfg = {}) {
  validate(cfg);
  if (digits.empty()) return std::nullopt;
  std::vector<DigitDetection> chosen(digits.begin(), digits.end());
  std::sort(chosen.begin(), chosen.end(), detail::more_confident);
  if (chosen.size() > static_cast<std::size_t>(cfg.max_digits))
    chosen.resize(static_cast<std::size_t>(cfg.max_digits));
  // left to right; on equal centers the more confident digit reads first
  std::stable_sort(chosen.begin(), chosen.end(), [](const DigitDetection& a, const DigitDetection& b) {
    return a.box.center_x() < b.box.center_x();
  });
  int value = 0;
  for (const auto& d : chosen) {
    value = value * 10 + d.digit;
    if (value > 99) return std::nullopt;
  }
  return value;
}

/// Suppression followed by assembly, the per-player post-processing step.
inline std::optional<int> read_jersey_number(std::span<const DigitDetection> digits,
                                             const AssemblyConfig& cfg = {}) {
  const auto kept = suppress_digits(digits, cfg);
  return assemble_number(kept, cfg);
}

}  // namespace playindex
