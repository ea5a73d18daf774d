#pragma once

// End-to-end stages shared by the CLI subcommands and the chained pipeline.

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "playindex/clock.hpp"
#include "playindex/config.hpp"
#include "playindex/gamelog.hpp"
#include "playindex/imageops.hpp"
#include "playindex/jersey.hpp"
#include "playindex/metrics.hpp"
#include "playindex/team.hpp"

namespace playindex {

struct WindowsResult {
  std::vector<PlayWindow> windows;
  std::vector<Diagnostic> diagnostics;
};

inline WindowsResult windows_from_clock_text(std::string_view clock_text, const SegmenterConfig& cfg,
                                             bool strict = false) {
  auto stream = parse_clock_stream(clock_text, strict);
  WindowsResult r;
  r.windows = segment_plays(stream.readings, cfg);
  r.diagnostics = std::move(stream.diagnostics);
  return r;
}

namespace detail {

// Runs fn(frame, detections) over frames split into `jobs` contiguous chunks.
// Each frame is touched by one worker, so output does not depend on `jobs`.
template <typename Fn>
void for_each_frame(DetectionsByFrame& frames, unsigned jobs, Fn fn) {
  std::vector<DetectionsByFrame::iterator> its;
  its.reserve(frames.size());
  for (auto it = frames.begin(); it != frames.end(); ++it) its.push_back(it);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(its.size(), 1))));
  if (jobs == 1) {
    for (auto it : its) fn(it->first, it->second);
    return;
  }
  const std::size_t chunk = (its.size() + jobs - 1) / jobs;
  std::vector<std::jthread> workers;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::size_t lo = j * chunk;
    const std::size_t hi = std::min(its.size(), lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(its[i]->first, its[i]->second);
    });
  }
}

}  // namespace detail

/// Replaces every record's number with the one read from its digits.
inline void assemble_numbers(DetectionsByFrame& frames, const AssemblyConfig& cfg, unsigned jobs = 1) {
  validate(cfg);
  detail::for_each_frame(frames, jobs, [&](std::int64_t, std::vector<PlayerDetection>& dets) {
    for (auto& d : dets) d.number = read_jersey_number(d.digits, cfg);
  });
}

/// Crop for record `index` of frame `frame` is `<crops_dir>/<frame>_<index>.ppm`.
inline std::filesystem::path crop_path(const std::filesystem::path& crops_dir, std::int64_t frame,
                                       std::size_t index) {
  return crops_dir / fmt::format("{}_{}.ppm", frame, index);
}

/// Labels records whose crop exists; records without a crop keep their label
/// and are reported.
inline std::vector<Diagnostic> classify_teams(DetectionsByFrame& frames,
                                              const std::filesystem::path& crops_dir,
                                              const GameConfig& cfg) {
  std::vector<Diagnostic> diags;
  for (auto& [frame, dets] : frames)
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto path = crop_path(crops_dir, frame, i);
      if (!std::filesystem::exists(path)) {
        diags.push_back({0, fmt::format("frame {} record {}: no crop at {}", frame, i, path.string())});
        continue;
      }
      const auto crop = read_pnm_file(path.string());
      if (crop.channels() != 3) {
        diags.push_back({0, fmt::format("{}: crop is not RGB", path.string())});
        continue;
      }
      const auto strip = extract_strip(crop, cfg.strip_height_fraction, cfg.strip_width_fraction);
      dets[i].team = classify_team(channel_histogram(strip), cfg.home_colors, cfg.away_colors);
    }
  return diags;
}

inline std::vector<GameLogEntry> build_game_log(const std::vector<PlayWindow>& windows,
                                                const DetectionsByFrame& frames,
                                                const GameConfig& cfg) {
  return synchronize(windows, frames, cfg.logged_roster(), cfg.sync_options());
}

struct PipelineOptions {
  LogFormat format = LogFormat::delimited;
  bool strict = false;
  unsigned jobs = 1;
  std::filesystem::path crops_dir;  // empty: keep team labels from the records
};

struct PipelineOutputs {
  std::vector<PlayWindow> windows;
  std::vector<GameLogEntry> entries;
  std::string windows_text;
  std::string records_text;  // assembled (and classified) records
  std::string game_log;
  std::vector<Diagnostic> clock_diagnostics;
  std::vector<Diagnostic> record_diagnostics;
  std::vector<Diagnostic> crop_diagnostics;
};

/// Clock text and raw detection records in, game log out. Intermediate
/// products are rendered exactly as the individual subcommands write them.
inline PipelineOutputs run_pipeline(std::string_view clock_text, std::string_view detection_text,
                                    const GameConfig& cfg, const PipelineOptions& opts = {}) {
  PipelineOutputs out;
  auto w = windows_from_clock_text(clock_text, cfg.segmenter, opts.strict);
  out.windows = std::move(w.windows);
  out.clock_diagnostics = std::move(w.diagnostics);
  out.windows_text = format_play_windows(out.windows);

  auto dets = load_detections(detection_text, opts.strict);
  out.record_diagnostics = std::move(dets.diagnostics);
  assemble_numbers(dets.frames, cfg.assembly, opts.jobs);
  if (!opts.crops_dir.empty()) out.crop_diagnostics = classify_teams(dets.frames, opts.crops_dir, cfg);
  out.records_text = format_detections(dets.frames);

  out.entries = build_game_log(out.windows, dets.frames, cfg);
  out.game_log = emit_game_log(out.entries, opts.format, cfg.log_team);
  return out;
}

struct EvaluationOutputs {
  EvalReport report;
  PrecisionRecallF1 detection;  // player boxes at `match_iou`
  ConfusionMatrix digits;       // digits of matched players
  std::string text;
};

/// Scores predicted records against ground-truth records. Frames missing
/// from one side count as frames with no boxes there. Digit pairs come from
/// players matched at `match_iou`, with suppressed predicted digits matched
/// to labelled digits at the assembly IoU threshold.
inline EvaluationOutputs evaluate_records(const DetectionsByFrame& preds, const DetectionsByFrame& truth,
                                          const AssemblyConfig& assembly, double match_iou = 0.5) {
  PredictionsByFrame pred_boxes;
  TruthByFrame truth_boxes;
  for (const auto& [f, _] : preds) {
    pred_boxes[f];
    truth_boxes[f];
  }
  for (const auto& [f, _] : truth) {
    pred_boxes[f];
    truth_boxes[f];
  }
  for (const auto& [f, dets] : preds)
    for (const auto& d : dets) pred_boxes[f].push_back({d.box, d.score});
  for (const auto& [f, dets] : truth)
    for (const auto& d : dets) truth_boxes[f].push_back(d.box);

  EvaluationOutputs out;
  out.report = evaluate_detections(pred_boxes, truth_boxes);

  std::size_t tp = 0;
  std::size_t n_pred = 0;
  std::size_t n_truth = 0;
  std::vector<std::pair<int, int>> digit_pairs;
  for (const auto& [f, boxes] : pred_boxes) {
    const auto& gts = truth_boxes.at(f);
    n_pred += boxes.size();
    n_truth += gts.size();
    const auto match = match_detections(boxes, gts, match_iou);
    for (std::size_t p = 0; p < match.size(); ++p) {
      if (!match[p]) continue;
      ++tp;
      const auto& pred_digits = preds.at(f)[p].digits;
      const auto& true_digits = truth.at(f)[*match[p]].digits;
      const auto kept = suppress_digits(pred_digits, assembly);
      std::vector<ScoredBox> kept_boxes;
      for (const auto& k : kept) kept_boxes.push_back({k.box, k.confidence});
      std::vector<BoundingBox> label_boxes;
      for (const auto& t : true_digits) label_boxes.push_back(t.box);
      const auto digit_match = match_detections(kept_boxes, label_boxes, assembly.iou_suppress_threshold);
      for (std::size_t k = 0; k < digit_match.size(); ++k)
        if (digit_match[k]) digit_pairs.emplace_back(true_digits[*digit_match[k]].digit, kept[k].digit);
    }
  }
  out.detection = prf1(tp, n_pred - tp, n_truth - tp);
  out.digits = confusion_matrix(digit_pairs);

  out.text = format_eval_report(out.report);
  out.text += fmt::format("Precision {:.6f}\nRecall {:.6f}\nF1 {:.6f}\n", out.detection.precision,
                          out.detection.recall, out.detection.f1);
  out.text += format_confusion_matrix(out.digits);
  return out;
}

}  // namespace playindex
