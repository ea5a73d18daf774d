#pragma once

// Scoreboard clock stream: OCR text lines -> readings -> quarters -> play windows.
//
// Clock line: "<frame> <game> <play>", whitespace separated. <game> is mm:ss
// (or m:ss) seconds remaining, <play> is whole seconds. A literal 0 in either
// clock field means the clock could not be read in that frame. Lines starting
// with '#' are comments.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "playindex/core_model.hpp"
#include "playindex/detail/text.hpp"

namespace playindex {

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError(line == 0 ? what : fmt::format("line {}: {}", line, what)), line_(line),
        reason_(what) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

struct SegmenterConfig {
  int play_clock_reset_jump = 5;  // seconds the play clock must jump up to open a play
  int game_clock_gap = 40;        // seconds between consecutive game-clock readings
  int quarter_start = 900;
  int quarter_rearm_below = 120;
  int min_play_frames = 2;
};

inline void validate(const SegmenterConfig& c) {
  if (c.play_clock_reset_jump <= 0 || c.game_clock_gap <= 0 || c.quarter_start <= 0 ||
      c.quarter_rearm_below <= 0 || c.min_play_frames <= 0)
    throw InvariantError("segmenter config: all values positive violated");
  if (c.quarter_rearm_below >= c.quarter_start)
    throw InvariantError("segmenter config: quarter_rearm_below < quarter_start violated");
}

inline ClockReading parse_clock_line(std::string_view line, std::size_t line_number = 0) {
  const auto fields = detail::split_ws(line);
  if (fields.size() != 3)
    throw ParseError(line_number, fmt::format("expected 3 fields, found {}", fields.size()));

  ClockReading r;
  if (!detail::all_digits(fields[0]))
    throw ParseError(line_number, fmt::format("bad frame index '{}'", fields[0]));
  const auto frame = detail::parse_int(fields[0]);
  if (!frame) throw ParseError(line_number, fmt::format("bad frame index '{}'", fields[0]));
  r.frame_index = *frame;

  if (fields[1] != "0") {
    const auto secs = parse_mmss(fields[1]);
    if (!secs) throw ParseError(line_number, fmt::format("bad game clock '{}'", fields[1]));
    if (*secs > kMaxGameClock)
      throw ParseError(line_number, fmt::format("game clock '{}' above 15:00", fields[1]));
    r.game_clock = *secs;
  }

  if (fields[2] != "0") {
    if (!detail::all_digits(fields[2]) || fields[2].size() > 3)
      throw ParseError(line_number, fmt::format("bad play clock '{}'", fields[2]));
    const auto secs = *detail::parse_int(fields[2]);
    if (secs > kMaxPlayClock)
      throw ParseError(line_number, fmt::format("play clock '{}' above 40", fields[2]));
    if (secs > 0) r.play_clock = static_cast<int>(secs);
  }
  return r;
}

/// Inverse of parse_clock_line. A present play clock of 0 cannot be
/// represented and is written as absent.
inline std::string format_clock_line(const ClockReading& r) {
  return fmt::format("{} {} {}", r.frame_index, r.game_clock ? format_mmss(*r.game_clock) : "0",
                     r.play_clock ? fmt::format("{}", *r.play_clock) : "0");
}

struct ClockStream {
  std::vector<ClockReading> readings;
  std::vector<Diagnostic> diagnostics;  // one per skipped line
};

/// Malformed lines are skipped and reported unless `strict`. Frame indices
/// must strictly increase; a violation is always an error.
inline ClockStream parse_clock_stream(std::string_view text, bool strict = false) {
  ClockStream out;
  const auto lines = detail::split_lines(text);
  std::optional<std::size_t> prev_line;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank_or_comment(lines[i])) continue;
    ClockReading r;
    try {
      r = parse_clock_line(lines[i], i + 1);
    } catch (const ParseError& e) {
      if (strict) throw;
      out.diagnostics.push_back({i + 1, e.reason()});
      continue;
    }
    if (!out.readings.empty() && r.frame_index <= out.readings.back().frame_index)
      throw ParseError(i + 1, fmt::format("frame index {} (line {}) not after frame {} (line {})",
                                          r.frame_index, i + 1, out.readings.back().frame_index,
                                          *prev_line));
    out.readings.push_back(r);
    prev_line = i + 1;
  }
  return out;
}

/// Quarter number per reading. The quarter advances when the game clock
/// reaches quarter_start - 1 or more after it has been seen below
/// quarter_rearm_below since the previous advance. Readings without a game
/// clock keep the current quarter.
inline std::vector<int> label_quarters(const std::vector<ClockReading>& readings,
                                       const SegmenterConfig& cfg = {}) {
  validate(cfg);
  std::vector<int> quarters;
  quarters.reserve(readings.size());
  int quarter = 1;
  bool armed = false;
  for (const auto& r : readings) {
    if (r.game_clock) {
      if (armed && *r.game_clock >= cfg.quarter_start - 1) {
        if (quarter == 4)
          throw InputError(fmt::format("quarter transition after the 4th quarter at frame {} "
                                       "(overtime is not supported)",
                                       r.frame_index));
        ++quarter;
        armed = false;
      }
      if (*r.game_clock < cfg.quarter_rearm_below) armed = true;
    }
    quarters.push_back(quarter);
  }
  return quarters;
}

/// Splits labelled readings into plays. A play opens on the first readable
/// frame and whenever the play clock jumps up by play_clock_reset_jump or
/// more, the game clock moves by game_clock_gap or more, the quarter changes,
/// or clocks reappear after unreadable frames. Plays with fewer than
/// min_play_frames readable frames, or without any game-clock reading, are
/// dropped.
inline std::vector<PlayWindow> segment_plays(const std::vector<ClockReading>& readings,
                                             const std::vector<int>& quarters,
                                             const SegmenterConfig& cfg = {}) {
  validate(cfg);
  if (quarters.size() != readings.size())
    throw InputError("segment_plays: one quarter label per reading required");

  struct Open {
    std::int64_t frame_start = 0;
    std::int64_t frame_end = 0;
    int quarter = 1;
    std::optional<int> max_game;
    std::optional<int> min_game;
    int frames = 0;
  };

  std::vector<PlayWindow> windows;
  std::optional<Open> open;
  std::optional<int> last_play;
  std::optional<int> last_game;
  bool gap_since_last = false;

  auto close = [&] {
    if (!open) return;
    if (open->frames >= cfg.min_play_frames && open->max_game) {
      PlayWindow w;
      w.play_number = static_cast<int>(windows.size()) + 1;
      w.quarter = open->quarter;
      w.frame_start = open->frame_start;
      w.frame_end = open->frame_end;
      w.start_time = *open->max_game;
      w.end_time = *open->min_game;
      windows.push_back(w);
    }
    open.reset();
  };

  for (std::size_t i = 0; i < readings.size(); ++i) {
    const auto& r = readings[i];
    if (!r.any_present()) {
      if (open) gap_since_last = true;
      continue;
    }
    bool trigger = !open;
    if (open) {
      if (gap_since_last) trigger = true;
      if (quarters[i] != open->quarter) trigger = true;
      if (r.play_clock && last_play && *r.play_clock - *last_play >= cfg.play_clock_reset_jump)
        trigger = true;
      if (r.game_clock && last_game && std::abs(*last_game - *r.game_clock) >= cfg.game_clock_gap)
        trigger = true;
    }
    if (trigger) {
      close();
      open = Open{r.frame_index, r.frame_index, quarters[i], {}, {}, 0};
    }
    open->frame_end = r.frame_index;
    ++open->frames;
    if (r.game_clock) {
      open->max_game = open->max_game ? std::max(*open->max_game, *r.game_clock) : *r.game_clock;
      open->min_game = open->min_game ? std::min(*open->min_game, *r.game_clock) : *r.game_clock;
      last_game = r.game_clock;
    }
    if (r.play_clock) last_play = r.play_clock;
    gap_since_last = false;
  }
  close();
  return windows;
}

inline std::vector<PlayWindow> segment_plays(const std::vector<ClockReading>& readings,
                                             const SegmenterConfig& cfg = {}) {
  return segment_plays(readings, label_quarters(readings, cfg), cfg);
}

/// "<play> <quarter> <frame start> <frame end> <start mm:ss> <end mm:ss>" per line.
inline std::string format_play_windows(const std::vector<PlayWindow>& windows) {
  std::string out;
  for (const auto& w : windows)
    out += fmt::format("{} {} {} {} {} {}\n", w.play_number, w.quarter, w.frame_start,
                       w.frame_end, format_mmss(w.start_time), format_mmss(w.end_time));
  return out;
}

inline std::vector<PlayWindow> parse_play_windows(std::string_view text) {
  std::vector<PlayWindow> out;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_blank_or_comment(lines[i])) continue;
    const auto f = detail::split_ws(lines[i]);
    if (f.size() != 6) throw ParseError(i + 1, "play window needs 6 fields");
    const auto play = detail::parse_int(f[0]);
    const auto quarter = detail::parse_int(f[1]);
    const auto fs = detail::parse_int(f[2]);
    const auto fe = detail::parse_int(f[3]);
    const auto st = parse_mmss(f[4]);
    const auto et = parse_mmss(f[5]);
    if (!play || !quarter || !fs || !fe || !st || !et)
      throw ParseError(i + 1, "malformed play window");
    PlayWindow w{static_cast<int>(*play), static_cast<int>(*quarter), *fs, *fe, *st, *et};
    try {
      validate(w);
    } catch (const InvariantError& e) {
      throw ParseError(i + 1, e.what());
    }
    if (!out.empty() && (w.play_number <= out.back().play_number ||
                         w.frame_start <= out.back().frame_end))
      throw ParseError(i + 1, "play windows must be ordered and non-overlapping");
    out.push_back(w);
  }
  return out;
}

}  // namespace playindex
