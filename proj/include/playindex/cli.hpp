#pragma once

// Command-line front end. run() is the whole program; tools/playindex.cpp
// only forwards argv and the standard streams.

#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "playindex/clock.hpp"
#include "playindex/config.hpp"
#include "playindex/gamelog.hpp"
#include "playindex/imageops.hpp"
#include "playindex/metrics.hpp"
#include "playindex/pipeline.hpp"
#include "playindex/synth.hpp"

namespace playindex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

namespace detail {

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;

  std::string read(const std::string& path) const {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return read_text_file(path);
  }

  void write(const std::string& path, std::string_view text) const {
    if (path.empty() || path == "-") {
      out << text;
      out.flush();
      return;
    }
    write_text_file(path, text);
  }

  void report(std::string_view command, const std::vector<Diagnostic>& diags, std::string_view what) const {
    for (const auto& d : diags) err << command << ": " << d.to_string() << '\n';
    if (!diags.empty()) err << fmt::format("{}: {} {} skipped\n", command, diags.size(), what);
  }
};

struct Overrides {
  std::optional<int> play_clock_jump;
  std::optional<int> game_clock_gap;
  std::optional<int> quarter_start;
  std::optional<int> quarter_rearm_below;
  std::optional<int> min_play_frames;
  std::optional<double> digit_iou;
  std::optional<double> digit_confidence;
  std::optional<int> max_digits;
  std::optional<int> min_appearances;
  std::optional<std::string> team;

  void add_segmenter(CLI::App* app) {
    app->add_option("--play-clock-jump", play_clock_jump, "Play-clock upward jump that opens a play (s)");
    app->add_option("--game-clock-gap", game_clock_gap, "Game-clock gap that opens a play (s)");
    app->add_option("--quarter-start", quarter_start, "Game clock at quarter start (s)");
    app->add_option("--quarter-rearm-below", quarter_rearm_below, "Clock below which a new quarter is armed (s)");
    app->add_option("--min-play-frames", min_play_frames, "Drop plays with fewer readable frames");
  }
  void add_assembly(CLI::App* app) {
    app->add_option("--digit-iou", digit_iou, "IoU at which digit detections suppress each other");
    app->add_option("--digit-confidence", digit_confidence, "Minimum digit confidence");
    app->add_option("--max-digits", max_digits, "Digits kept per jersey");
  }
  void add_log(CLI::App* app) {
    app->add_option("--min-appearances", min_appearances, "Frames a number must appear in per play");
    app->add_option("--team", team, "Team whose participants are logged")->check(CLI::IsMember({"home", "away"}));
  }

  void apply(GameConfig& c) const {
    if (play_clock_jump) c.segmenter.play_clock_reset_jump = *play_clock_jump;
    if (game_clock_gap) c.segmenter.game_clock_gap = *game_clock_gap;
    if (quarter_start) c.segmenter.quarter_start = *quarter_start;
    if (quarter_rearm_below) c.segmenter.quarter_rearm_below = *quarter_rearm_below;
    if (min_play_frames) c.segmenter.min_play_frames = *min_play_frames;
    if (digit_iou) c.assembly.iou_suppress_threshold = *digit_iou;
    if (digit_confidence) c.assembly.confidence_threshold = *digit_confidence;
    if (max_digits) c.assembly.max_digits = *max_digits;
    if (min_appearances) c.min_appearances = *min_appearances;
    if (team) c.log_team = *parse_team(*team);
    validate(c.segmenter);
    validate(c.assembly);
    if (c.min_appearances < 1) throw InputError("--min-appearances must be >= 1");
  }
};

inline GameConfig config_for(const std::string& path, bool need_rosters) {
  if (path.empty()) {
    if (need_rosters) throw InputError("--config is required");
    return GameConfig{};
  }
  const std::filesystem::path p(path);
  return parse_game_config(read_text_file(p), p.parent_path(), need_rosters);
}

inline std::string image_extension(const PixelImage& img) { return img.channels() == 3 ? "ppm" : "pgm"; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const detail::Io io{in, out, err};

  CLI::App app{"Play indexing for football broadcast analysis", "playindex"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string config;
  std::string input;
  std::string output = "-";
  std::string truth;
  std::string windows;
  std::string clock;
  std::string crops;
  std::string windows_out;
  std::string records_out;
  std::string format = "delimited";
  std::string output_dir;
  bool strict = false;
  unsigned jobs = 1;
  detail::Overrides ov;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config, "Run configuration file");
    if (config_required) c->required();
    sub->add_option("--output,-o", output, "Output file ('-' for standard output)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Game log format")->check(CLI::IsMember({"delimited", "structured"}));
  };

  auto* parse_clock = app.add_subcommand("parse-clock", "Clock text -> play windows");
  add_common(parse_clock, false);
  parse_clock->add_option("--input,-i", input, "Clock text ('-' for standard input)")->required();
  parse_clock->add_flag("--strict", strict, "Treat malformed lines as fatal");
  ov.add_segmenter(parse_clock);

  auto* assemble = app.add_subcommand("assemble", "Detection records -> records with jersey numbers");
  add_common(assemble, false);
  assemble->add_option("--input,-i", input, "Detection records")->required();
  assemble->add_flag("--strict", strict, "Treat malformed records as fatal");
  assemble->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  ov.add_assembly(assemble);

  auto* classify = app.add_subcommand("classify-team", "Label records home/away from jersey crops");
  add_common(classify, false);
  classify->add_option("--input,-i", input, "Detection records")->required();
  classify->add_option("--crops", crops, "Directory of <frame>_<index>.ppm crops")->required();
  classify->add_flag("--strict", strict, "Treat malformed records as fatal");

  auto* log = app.add_subcommand("log", "Play windows + records + rosters -> game log");
  add_common(log, true);
  log->add_option("--windows,-w", windows, "Play windows file")->required();
  log->add_option("--input,-i", input, "Detection records with jersey numbers")->required();
  log->add_flag("--strict", strict, "Treat malformed records as fatal");
  add_format(log);
  ov.add_log(log);

  auto* evaluate = app.add_subcommand("evaluate", "Score predicted records against ground truth");
  add_common(evaluate, false);
  evaluate->add_option("--input,-i", input, "Predicted detection records")->required();
  evaluate->add_option("--truth,-t", truth, "Ground-truth detection records")->required();
  evaluate->add_flag("--strict", strict, "Treat malformed records as fatal");
  double match_iou = 0.5;
  evaluate->add_option("--match-iou", match_iou, "IoU for precision/recall and digit pairing")
      ->check(CLI::Range(0.01, 1.0));
  ov.add_assembly(evaluate);

  auto* preprocess = app.add_subcommand("preprocess", "Clock crop -> OCR-ready image (gray, threshold, invert)");
  add_common(preprocess, false);
  preprocess->add_option("--input,-i", input, "PPM/PGM image")->required();
  std::optional<int> threshold;
  preprocess->add_option("--threshold", threshold, "Binary threshold (default from config, 128)")
      ->check(CLI::Range(0, 255));

  auto* augment = app.add_subcommand("augment", "Image -> blurred and scaled copies");
  augment->add_option("--input,-i", input, "PPM/PGM image")->required();
  std::string prefix;
  augment->add_option("--output-prefix", prefix, "Writes <prefix>_blur and <prefix>_scale")->required();
  double sigma = 1.5;
  double factor = 0.5;
  augment->add_option("--sigma", sigma, "Gaussian sigma")->check(CLI::PositiveNumber);
  augment->add_option("--scale", factor, "Scale factor")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic game");
  SynthConfig scfg;
  std::optional<std::uint64_t> seed;
  synth->add_option("--seed", seed, "Random seed (required)")->required();
  synth->add_option("--output-dir,-d", output_dir, "Directory to write the game into")->required();
  synth->add_option("--quarters", scfg.quarters, "Quarters (1-4)");
  synth->add_option("--plays-per-quarter", scfg.plays_per_quarter, "Plays per quarter");
  synth->add_option("--fps", scfg.frames_per_second, "Frames per second");
  synth->add_option("--min-players", scfg.min_players, "Fewest home participants per play");
  synth->add_option("--max-players", scfg.max_players, "Most home participants per play");
  synth->add_option("--away-players", scfg.away_players, "Away players visible per play");
  synth->add_option("--ocr-corruption", scfg.ocr_corruption_rate, "Probability a clock line is garbled");
  synth->add_option("--digit-error", scfg.digit_error_rate, "Probability a record's digits are unreadable");
  synth->add_option("--drop-rate", scfg.detection_drop_rate, "Probability a record is missing");
  synth->add_option("--home-team", scfg.home_team, "Home team name");
  synth->add_option("--away-team", scfg.away_team, "Away team name");

  auto* pipeline = app.add_subcommand("pipeline", "Clock text + raw records -> game log (all stages)");
  add_common(pipeline, true);
  pipeline->add_option("--clock,-c", clock, "Clock text")->required();
  pipeline->add_option("--input,-i", input, "Raw detection records")->required();
  pipeline->add_option("--crops", crops, "Crops directory; when given, teams are re-classified");
  pipeline->add_option("--windows-out", windows_out, "Also write the play windows here");
  pipeline->add_option("--records-out", records_out, "Also write the assembled records here");
  pipeline->add_flag("--strict", strict, "Treat malformed input lines as fatal");
  pipeline->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  add_format(pipeline);
  ov.add_segmenter(pipeline);
  ov.add_assembly(pipeline);
  ov.add_log(pipeline);

  auto* focal = app.add_subcommand("focal-loss", "Focal loss of class distributions");
  add_common(focal, false);
  focal->add_option("--input,-i", input, "Lines of '<true index> <p_0> ... <p_N-1>'")->required();
  std::optional<double> gamma;
  focal->add_option("--gamma", gamma, "Focusing parameter (default from config, 2)")->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  argv.push_back("playindex");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitInputError;
  }

  try {
    if (parse_clock->parsed()) {
      auto cfg = detail::config_for(config, false);
      ov.apply(cfg);
      const auto r = windows_from_clock_text(io.read(input), cfg.segmenter, strict);
      io.report("parse-clock", r.diagnostics, "malformed line(s)");
      io.write(output, format_play_windows(r.windows));
    } else if (assemble->parsed()) {
      auto cfg = detail::config_for(config, false);
      ov.apply(cfg);
      auto dets = load_detections(io.read(input), strict);
      io.report("assemble", dets.diagnostics, "malformed record(s)");
      assemble_numbers(dets.frames, cfg.assembly, jobs);
      io.write(output, format_detections(dets.frames));
    } else if (classify->parsed()) {
      const auto cfg = detail::config_for(config, false);
      auto dets = load_detections(io.read(input), strict);
      io.report("classify-team", dets.diagnostics, "malformed record(s)");
      const auto missing = classify_teams(dets.frames, crops, cfg);
      io.report("classify-team", missing, "record(s) without crop");
      io.write(output, format_detections(dets.frames));
    } else if (log->parsed()) {
      auto cfg = detail::config_for(config, true);
      ov.apply(cfg);
      const auto wins = parse_play_windows(io.read(windows));
      const auto dets = load_detections(io.read(input), strict);
      io.report("log", dets.diagnostics, "malformed record(s)");
      const auto entries = build_game_log(wins, dets.frames, cfg);
      io.write(output, emit_game_log(entries, format == "structured" ? LogFormat::structured : LogFormat::delimited,
                                     cfg.log_team));
    } else if (evaluate->parsed()) {
      auto cfg = detail::config_for(config, false);
      ov.apply(cfg);
      const auto preds = load_detections(io.read(input), strict);
      const auto gts = load_detections(io.read(truth), strict);
      io.report("evaluate", preds.diagnostics, "malformed prediction record(s)");
      io.report("evaluate", gts.diagnostics, "malformed ground-truth record(s)");
      io.write(output, evaluate_records(preds.frames, gts.frames, cfg.assembly, match_iou).text);
    } else if (preprocess->parsed()) {
      const auto cfg = detail::config_for(config, false);
      const auto img = read_pnm_file(input);
      const auto ready = prepare_for_ocr(img, threshold.value_or(cfg.ocr_threshold));
      if (output.empty() || output == "-")
        io.write(output, encode_pnm(ready));
      else
        write_pnm_file(output, ready);
    } else if (augment->parsed()) {
      const auto img = read_pnm_file(input);
      const auto ext = detail::image_extension(img);
      write_pnm_file(fmt::format("{}_blur.{}", prefix, ext), gaussian_blur(img, sigma));
      write_pnm_file(fmt::format("{}_scale.{}", prefix, ext), scale(img, factor));
    } else if (synth->parsed()) {
      scfg.seed = *seed;
      const auto game = generate_game(scfg);
      const std::filesystem::path dir(output_dir);
      std::filesystem::create_directories(dir);
      GameConfig gc;
      gc.home_team = scfg.home_team;
      gc.away_team = scfg.away_team;
      gc.home_roster_path = "home_roster.txt";
      gc.away_roster_path = "away_roster.txt";
      write_text_file(dir / "clock.txt", game.clock_text);
      write_text_file(dir / "detections.txt", game.detection_text);
      write_text_file(dir / "home_roster.txt", format_roster(game.home_roster));
      write_text_file(dir / "away_roster.txt", format_roster(game.away_roster));
      write_text_file(dir / "game.cfg", format_game_config(gc));
      write_text_file(dir / "truth_windows.txt", format_play_windows(game.truth_windows));
      write_text_file(dir / "truth_log.csv", emit_game_log(game.truth, LogFormat::delimited));
      write_text_file(dir / "truth_log.jsonl", emit_game_log(game.truth, LogFormat::structured));
      err << fmt::format("synth: {} plays, {} clock lines ({} corrupted), {} detection records\n",
                         game.truth.size(), game.clock_lines, game.corrupted_clock_lines,
                         game.detection_records);
    } else if (pipeline->parsed()) {
      auto cfg = detail::config_for(config, true);
      ov.apply(cfg);
      PipelineOptions po;
      po.format = format == "structured" ? LogFormat::structured : LogFormat::delimited;
      po.strict = strict;
      po.jobs = jobs;
      po.crops_dir = crops;
      const auto r = run_pipeline(io.read(clock), io.read(input), cfg, po);
      io.report("pipeline", r.clock_diagnostics, "malformed line(s)");
      io.report("pipeline", r.record_diagnostics, "malformed record(s)");
      io.report("pipeline", r.crop_diagnostics, "record(s) without crop");
      if (!windows_out.empty()) write_text_file(windows_out, r.windows_text);
      if (!records_out.empty()) write_text_file(records_out, r.records_text);
      io.write(output, r.game_log);
    } else if (focal->parsed()) {
      const auto cfg = detail::config_for(config, false);
      const double g = gamma.value_or(cfg.focal_gamma);
      const auto text = io.read(input);
      const auto lines = playindex::detail::split_lines(text);
      std::string result;
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (playindex::detail::is_blank_or_comment(lines[i])) continue;
        const auto f = playindex::detail::split_ws(lines[i]);
        ClassDistribution d;
        d.gamma = g;
        const auto idx = f.empty() ? std::nullopt : playindex::detail::parse_int(f[0]);
        if (!idx || *idx < 0) throw ParseError(i + 1, "expected a true class index");
        d.true_index = static_cast<std::size_t>(*idx);
        for (std::size_t k = 1; k < f.size(); ++k) {
          const auto p = playindex::detail::parse_double(f[k]);
          if (!p) throw ParseError(i + 1, fmt::format("bad probability '{}'", f[k]));
          d.probs.push_back(*p);
        }
        double loss = 0.0;
        try {
          loss = focal_loss(d);
        } catch (const InvariantError& e) {
          throw ParseError(i + 1, e.what());
        }
        result += fmt::format("{:.9g}\n", loss);
        sum += loss;
        ++n;
      }
      result += fmt::format("# mean {:.9g} over {} example(s), gamma {}\n", n ? sum / static_cast<double>(n) : 0.0,
                            n, playindex::detail::format_double(g));
      io.write(output, result);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace playindex::cli
