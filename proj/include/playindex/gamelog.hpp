#pragma once

// Rosters, detection records, and the per-play game log.
//
// Detection record (one per detected player per frame, whitespace separated):
//
//   <frame> <x> <y> <w> <h> <score> <team> <number> <k> [<digit> <conf> <x> <y> <w> <h>] x k
//
// The player box is in frame pixels, digit boxes in crop pixels, both corner
// form. <team> is home, away or unknown. <number> is the assembled jersey
// number or '-' when none has been read yet.
//
// Roster line: "<number>: <name>[; <name>]...". '#' starts a comment line.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "playindex/clock.hpp"
#include "playindex/core_model.hpp"
#include "playindex/detail/text.hpp"

namespace playindex {

// ---------------------------------------------------------------------------
// Rosters

inline Roster load_roster(std::string_view text, std::string team_name = {}) {
  Roster roster;
  roster.team_name = std::move(team_name);
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank_or_comment(lines[i])) continue;
    const auto line = detail::trim(lines[i]);
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(i + 1, "roster line needs 'N: name'");
    const auto num_text = detail::trim(line.substr(0, colon));
    if (!detail::all_digits(num_text) || num_text.size() > 3)
      throw ParseError(i + 1, fmt::format("bad jersey number '{}'", num_text));
    const int number = static_cast<int>(*detail::parse_int(num_text));
    if (number > 99) throw ParseError(i + 1, fmt::format("jersey number {} outside 0-99", number));
    auto& names = roster.entries[number];
    for (auto part : detail::split(line.substr(colon + 1), ';')) {
      const std::string name(detail::trim(part));
      if (name.empty()) throw ParseError(i + 1, "empty player name");
      if (std::find(names.begin(), names.end(), name) != names.end())
        throw ParseError(i + 1, fmt::format("duplicate roster entry {}: {}", number, name));
      names.push_back(name);
    }
  }
  return roster;
}

inline std::string format_roster(const Roster& roster) {
  std::string out;
  if (!roster.team_name.empty()) out += fmt::format("# {}\n", roster.team_name);
  for (const auto& [number, names] : roster.entries)
    out += fmt::format("{}: {}\n", number, fmt::join(names, "; "));
  return out;
}

/// Names joined by " or "; "#N (unrostered)" when the number is unknown.
inline std::string resolve_names(int number, const Roster& roster) {
  const auto it = roster.entries.find(number);
  if (it == roster.entries.end() || it->second.empty())
    return fmt::format("#{} (unrostered)", number);
  return fmt::format("{}", fmt::join(it->second, " or "));
}

// ---------------------------------------------------------------------------
// Detection records

inline std::string format_detection_record(const PlayerDetection& d) {
  using detail::format_double;
  std::string out = fmt::format("{} {} {} {} {} {} {} {} {}", d.frame_index, format_double(d.box.x),
                                format_double(d.box.y), format_double(d.box.w),
                                format_double(d.box.h), format_double(d.score), to_string(d.team),
                                d.number ? fmt::format("{}", *d.number) : "-", d.digits.size());
  for (const auto& g : d.digits)
    out += fmt::format(" {} {} {} {} {} {}", g.digit, format_double(g.confidence),
                       format_double(g.box.x), format_double(g.box.y), format_double(g.box.w),
                       format_double(g.box.h));
  return out;
}

inline PlayerDetection parse_detection_record(std::string_view line, std::size_t line_number = 0) {
  const auto f = detail::split_ws(line);
  if (f.size() < 9) throw ParseError(line_number, "detection record needs at least 9 fields");
  auto num = [&](std::size_t i) {
    const auto v = detail::parse_double(f[i]);
    if (!v) throw ParseError(line_number, fmt::format("bad number '{}'", f[i]));
    return *v;
  };
  auto integer = [&](std::size_t i) {
    const auto v = detail::parse_int(f[i]);
    if (!v) throw ParseError(line_number, fmt::format("bad integer '{}'", f[i]));
    return *v;
  };

  PlayerDetection d;
  d.frame_index = integer(0);
  d.box = {num(1), num(2), num(3), num(4)};
  d.score = num(5);
  const auto team = parse_team(f[6]);
  if (!team) throw ParseError(line_number, fmt::format("bad team '{}'", f[6]));
  d.team = *team;
  if (f[7] != "-") d.number = static_cast<int>(integer(7));
  const auto k = integer(8);
  if (k < 0 || f.size() != 9 + 6 * static_cast<std::size_t>(k))
    throw ParseError(line_number, fmt::format("digit count {} does not match field count", k));
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
    const std::size_t b = 9 + 6 * j;
    DigitDetection g;
    g.digit = static_cast<int>(integer(b));
    g.confidence = num(b + 1);
    g.box = {num(b + 2), num(b + 3), num(b + 4), num(b + 5)};
    d.digits.push_back(g);
  }
  try {
    validate_detection(d);
  } catch (const InvariantError& e) {
    throw ParseError(line_number, e.what());
  }
  return d;
}

using DetectionsByFrame = std::map<std::int64_t, std::vector<PlayerDetection>>;

struct DetectionSet {
  DetectionsByFrame frames;
  std::vector<Diagnostic> diagnostics;
  std::size_t record_count = 0;
};

/// Groups records by frame, keeping their order within a frame. Malformed
/// records are skipped with a diagnostic unless `strict`.
inline DetectionSet load_detections(std::string_view text, bool strict = false) {
  DetectionSet out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank_or_comment(lines[i])) continue;
    try {
      auto d = parse_detection_record(lines[i], i + 1);
      out.frames[d.frame_index].push_back(std::move(d));
      ++out.record_count;
    } catch (const ParseError& e) {
      if (strict) throw;
      out.diagnostics.push_back({i + 1, e.reason()});
    }
  }
  return out;
}

inline std::string format_detections(const DetectionsByFrame& frames) {
  std::string out;
  for (const auto& [frame, dets] : frames)
    for (const auto& d : dets) {
      out += format_detection_record(d);
      out += '\n';
    }
  return out;
}

// ---------------------------------------------------------------------------
// Synchronization

struct SyncOptions {
  std::string home_team;
  std::string away_team;
  Team log_team = Team::home;  // whose participants are listed
  int min_appearances = 1;     // frames a number must appear in within the play
};

/// Participants of each play: numbers seen on `opts.log_team` players in at
/// least min_appearances frames of the window, named through `roster`.
inline std::vector<GameLogEntry> synchronize(const std::vector<PlayWindow>& windows,
                                             const DetectionsByFrame& detections,
                                             const Roster& roster, const SyncOptions& opts = {}) {
  if (opts.min_appearances < 1) throw InvariantError("min_appearances >= 1 violated");
  std::vector<GameLogEntry> entries;
  entries.reserve(windows.size());
  for (const auto& w : windows) {
    std::map<int, int> frames_seen;
    const auto first = detections.lower_bound(w.frame_start);
    const auto last = detections.upper_bound(w.frame_end);
    for (auto it = first; it != last; ++it) {
      std::set<int> in_frame;
      for (const auto& d : it->second)
        if (d.team == opts.log_team && d.number) in_frame.insert(*d.number);
      for (int n : in_frame) ++frames_seen[n];
    }
    GameLogEntry e;
    e.play_number = w.play_number;
    e.quarter = w.quarter;
    e.start_time = w.start_time;
    e.end_time = w.end_time;
    e.home_team = opts.home_team;
    e.away_team = opts.away_team;
    for (const auto& [n, count] : frames_seen)
      if (count >= opts.min_appearances) e.participants.emplace(n, resolve_names(n, roster));
    entries.push_back(std::move(e));
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Game log output

enum class LogFormat { delimited, structured };

inline constexpr std::string_view kGameLogHeader =
    "Play number,Quarter,Start time,End time,Home,Away,Participating players of Home team";

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string render_participants(const std::map<int, std::string>& participants) {
  std::vector<std::string> parts;
  for (const auto& [n, names] : participants) parts.push_back(fmt::format("{}: {}", n, names));
  return fmt::format("{}", fmt::join(parts, "; "));
}

}  // namespace detail

/// `listed` only changes the last header column; entries are emitted as given.
inline std::string emit_game_log(const std::vector<GameLogEntry>& entries,
                                 LogFormat format = LogFormat::delimited,
                                 Team listed = Team::home) {
  std::string out;
  if (format == LogFormat::delimited) {
    if (listed == Team::away)
      out += "Play number,Quarter,Start time,End time,Home,Away,Participating players of Away team";
    else
      out += kGameLogHeader;
    out += '\n';
    for (const auto& e : entries)
      out += fmt::format("{},{},{},{},{},{},{}\n", e.play_number, e.quarter,
                         format_mmss(e.start_time), format_mmss(e.end_time),
                         detail::csv_field(e.home_team), detail::csv_field(e.away_team),
                         detail::csv_field(detail::render_participants(e.participants)));
    return out;
  }
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["play_number"] = e.play_number;
    j["quarter"] = e.quarter;
    j["start_time"] = format_mmss(e.start_time);
    j["end_time"] = format_mmss(e.end_time);
    j["home"] = e.home_team;
    j["away"] = e.away_team;
    j["participants"] = nlohmann::ordered_json::array();
    for (const auto& [n, names] : e.participants)
      j["participants"].push_back({{"number", n}, {"players", names}});
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Reads the structured (one JSON object per line) game log back.
inline std::vector<GameLogEntry> parse_game_log_structured(std::string_view text) {
  std::vector<GameLogEntry> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      GameLogEntry e;
      e.play_number = j.at("play_number").get<int>();
      e.quarter = j.at("quarter").get<int>();
      const auto st = parse_mmss(j.at("start_time").get<std::string>());
      const auto et = parse_mmss(j.at("end_time").get<std::string>());
      if (!st || !et) throw ParseError(i + 1, "bad mm:ss time");
      e.start_time = *st;
      e.end_time = *et;
      e.home_team = j.at("home").get<std::string>();
      e.away_team = j.at("away").get<std::string>();
      for (const auto& p : j.at("participants"))
        e.participants.emplace(p.at("number").get<int>(), p.at("players").get<std::string>());
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(i + 1, ex.what());
    }
  }
  return out;
}

}  // namespace playindex
