#pragma once

// Run configuration: a flat "key = value" file with '#' comments. Roster
// paths are resolved relative to the configuration file.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "playindex/clock.hpp"
#include "playindex/core_model.hpp"
#include "playindex/gamelog.hpp"
#include "playindex/jersey.hpp"
#include "playindex/team.hpp"

namespace playindex {

struct GameConfig {
  std::string home_team;
  std::string away_team;
  std::string home_roster_path;
  std::string away_roster_path;
  Roster home_roster;
  Roster away_roster;
  TeamColorProfile home_colors{Team::home, ColorMode::dominant_channel, Channel::red, 30.0};
  TeamColorProfile away_colors{Team::away, ColorMode::no_dominant, std::nullopt, 30.0};
  double strip_height_fraction = 0.2;
  double strip_width_fraction = 0.6;
  SegmenterConfig segmenter;
  AssemblyConfig assembly;
  int min_appearances = 1;
  Team log_team = Team::home;
  double focal_gamma = 2.0;
  int ocr_threshold = 128;

  const Roster& logged_roster() const { return log_team == Team::away ? away_roster : home_roster; }
  SyncOptions sync_options() const { return {home_team, away_team, log_team, min_appearances}; }
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank_or_comment(lines[i])) continue;
    const auto eq = lines[i].find('=');
    if (eq == std::string_view::npos) throw ParseError(i + 1, "expected 'key = value'");
    const std::string key(detail::trim(lines[i].substr(0, eq)));
    if (key.empty()) throw ParseError(i + 1, "empty key");
    if (kv.contains(key)) throw ParseError(i + 1, fmt::format("duplicate key '{}'", key));
    kv.emplace(key, std::string(detail::trim(lines[i].substr(eq + 1))));
  }
  return kv;
}

namespace detail {

inline TeamColorProfile parse_profile(Team label, const std::string& mode, const std::string& channel,
                                      double margin) {
  TeamColorProfile p;
  p.label = label;
  p.dominance_margin = margin;
  if (mode == "dominant") {
    p.mode = ColorMode::dominant_channel;
    p.channel = parse_channel(channel);
    if (!p.channel) throw InputError(fmt::format("config: bad colour channel '{}'", channel));
  } else if (mode == "none") {
    p.mode = ColorMode::no_dominant;
    p.channel.reset();
  } else {
    throw InputError(fmt::format("config: colour mode must be 'dominant' or 'none', got '{}'", mode));
  }
  validate(p);
  return p;
}

}  // namespace detail

/// Parses configuration text. Rosters are loaded from `base_dir` unless
/// `load_rosters` is false.
inline GameConfig parse_game_config(std::string_view text, const std::filesystem::path& base_dir,
                                    bool load_rosters = true) {
  auto kv = parse_key_values(text);
  GameConfig c;
  auto take = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_double = [&](const char* key, double fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const auto d = detail::parse_double(*v);
    if (!d) throw InputError(fmt::format("config: '{}' is not a number: '{}'", key, *v));
    return *d;
  };
  auto take_int = [&](const char* key, int fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    const auto d = detail::parse_int(*v);
    if (!d) throw InputError(fmt::format("config: '{}' is not an integer: '{}'", key, *v));
    return static_cast<int>(*d);
  };

  c.home_team = take("home_team").value_or("");
  c.away_team = take("away_team").value_or("");
  c.home_roster_path = take("home_roster").value_or("");
  c.away_roster_path = take("away_roster").value_or("");

  const auto home_mode = take("home_color_mode").value_or("dominant");
  const auto home_channel = take("home_color_channel").value_or("red");
  const double home_margin = take_double("home_color_margin", 30.0);
  const auto away_mode = take("away_color_mode").value_or("none");
  const auto away_channel = take("away_color_channel").value_or("");
  const double away_margin = take_double("away_color_margin", 30.0);
  c.home_colors = detail::parse_profile(Team::home, home_mode, home_channel, home_margin);
  c.away_colors = detail::parse_profile(Team::away, away_mode, away_channel, away_margin);

  c.strip_height_fraction = take_double("strip_height_fraction", c.strip_height_fraction);
  c.strip_width_fraction = take_double("strip_width_fraction", c.strip_width_fraction);
  c.assembly.iou_suppress_threshold = take_double("digit_iou_threshold", c.assembly.iou_suppress_threshold);
  c.assembly.confidence_threshold =
      take_double("digit_confidence_threshold", c.assembly.confidence_threshold);
  c.assembly.max_digits = take_int("max_digits", c.assembly.max_digits);
  c.segmenter.play_clock_reset_jump = take_int("play_clock_reset_jump", c.segmenter.play_clock_reset_jump);
  c.segmenter.game_clock_gap = take_int("game_clock_gap", c.segmenter.game_clock_gap);
  c.segmenter.quarter_start = take_int("quarter_start", c.segmenter.quarter_start);
  c.segmenter.quarter_rearm_below = take_int("quarter_rearm_below", c.segmenter.quarter_rearm_below);
  c.segmenter.min_play_frames = take_int("min_play_frames", c.segmenter.min_play_frames);
  c.min_appearances = take_int("min_appearances", c.min_appearances);
  c.focal_gamma = take_double("focal_gamma", c.focal_gamma);
  c.ocr_threshold = take_int("ocr_threshold", c.ocr_threshold);
  if (const auto t = take("log_team")) {
    const auto team = parse_team(*t);
    if (!team || *team == Team::unknown) throw InputError("config: log_team must be home or away");
    c.log_team = *team;
  }

  if (!kv.empty()) throw InputError(fmt::format("config: unknown key '{}'", kv.begin()->first));

  validate(c.assembly);
  validate(c.segmenter);
  if (c.home_team.empty() || c.away_team.empty())
    throw InputError("config: home_team and away_team are required");
  if (c.home_team == c.away_team) throw InputError("config: team names must differ");
  if (!(c.focal_gamma >= 0.0)) throw InputError("config: focal_gamma must be >= 0");
  if (c.ocr_threshold < 0 || c.ocr_threshold > 255)
    throw InputError("config: ocr_threshold must lie in [0, 255]");
  if (c.min_appearances < 1) throw InputError("config: min_appearances must be >= 1");

  if (load_rosters) {
    if (c.home_roster_path.empty() || c.away_roster_path.empty())
      throw InputError("config: home_roster and away_roster are required");
    c.home_roster = load_roster(read_text_file(base_dir / c.home_roster_path), c.home_team);
    c.away_roster = load_roster(read_text_file(base_dir / c.away_roster_path), c.away_team);
  }
  return c;
}

inline GameConfig load_game_config(const std::filesystem::path& path) {
  return parse_game_config(read_text_file(path), path.parent_path());
}

/// Writes every key, so a run's settings are fully recorded.
inline std::string format_game_config(const GameConfig& c) {
  using detail::format_double;
  auto mode = [](const TeamColorProfile& p) {
    return p.mode == ColorMode::dominant_channel ? "dominant" : "none";
  };
  auto channel = [](const TeamColorProfile& p) {
    return p.channel ? std::string(to_string(*p.channel)) : std::string();
  };
  std::string out;
  out += fmt::format("home_team = {}\n", c.home_team);
  out += fmt::format("away_team = {}\n", c.away_team);
  out += fmt::format("home_roster = {}\n", c.home_roster_path);
  out += fmt::format("away_roster = {}\n", c.away_roster_path);
  out += fmt::format("home_color_mode = {}\n", mode(c.home_colors));
  out += fmt::format("home_color_channel = {}\n", channel(c.home_colors));
  out += fmt::format("home_color_margin = {}\n", format_double(c.home_colors.dominance_margin));
  out += fmt::format("away_color_mode = {}\n", mode(c.away_colors));
  out += fmt::format("away_color_channel = {}\n", channel(c.away_colors));
  out += fmt::format("away_color_margin = {}\n", format_double(c.away_colors.dominance_margin));
  out += fmt::format("strip_height_fraction = {}\n", format_double(c.strip_height_fraction));
  out += fmt::format("strip_width_fraction = {}\n", format_double(c.strip_width_fraction));
  out += fmt::format("digit_iou_threshold = {}\n", format_double(c.assembly.iou_suppress_threshold));
  out += fmt::format("digit_confidence_threshold = {}\n", format_double(c.assembly.confidence_threshold));
  out += fmt::format("max_digits = {}\n", c.assembly.max_digits);
  out += fmt::format("play_clock_reset_jump = {}\n", c.segmenter.play_clock_reset_jump);
  out += fmt::format("game_clock_gap = {}\n", c.segmenter.game_clock_gap);
  out += fmt::format("quarter_start = {}\n", c.segmenter.quarter_start);
  out += fmt::format("quarter_rearm_below = {}\n", c.segmenter.quarter_rearm_below);
  out += fmt::format("min_play_frames = {}\n", c.segmenter.min_play_frames);
  out += fmt::format("min_appearances = {}\n", c.min_appearances);
  out += fmt::format("log_team = {}\n", to_string(c.log_team));
  out += fmt::format("focal_gamma = {}\n", format_double(c.focal_gamma));
  out += fmt::format("ocr_threshold = {}\n", c.ocr_threshold);
  return out;
}

}  // namespace playindex
