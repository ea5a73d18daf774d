#pragma once

// Domain values shared by every stage of the play-indexing pipeline.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "playindex/detail/text.hpp"

namespace playindex {

/// Malformed or out-of-contract input. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value failed one of its type invariants; the message names the field.
class InvariantError : public InputError {
 public:
  using InputError::InputError;
};

/// A skipped input line and the reason it was skipped.
struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string message;

  std::string to_string() const {
    return line == 0 ? message : fmt::format("line {}: {}", line, message);
  }
};

/// Axis-aligned box in corner form. Origin is the top-left of the image.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  BoundingBox translated(double dx, double dy) const { return {x + dx, y + dy, w, h}; }

  /// Converts a detector's center-form output (cx, cy, w, h).
  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - w / 2.0, cy - h / 2.0, w, h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline void validate(const BoundingBox& b, std::string_view field = "box") {
  if (!(b.w > 0.0) || !std::isfinite(b.w))
    throw InvariantError(fmt::format("{}: w > 0 violated", field));
  if (!(b.h > 0.0) || !std::isfinite(b.h))
    throw InvariantError(fmt::format("{}: h > 0 violated", field));
  if (!std::isfinite(b.x) || b.x < 0.0)
    throw InvariantError(fmt::format("{}: x finite and >= 0 violated", field));
  if (!std::isfinite(b.y) || b.y < 0.0)
    throw InvariantError(fmt::format("{}: y finite and >= 0 violated", field));
}

enum class Team { home, away, unknown };

inline std::string_view to_string(Team t) {
  switch (t) {
    case Team::home: return "home";
    case Team::away: return "away";
    case Team::unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<Team> parse_team(std::string_view s) {
  if (s == "home") return Team::home;
  if (s == "away") return Team::away;
  if (s == "unknown") return Team::unknown;
  return std::nullopt;
}

/// One digit found inside a player crop. The box is in crop coordinates.
struct DigitDetection {
  BoundingBox box;
  int digit = 0;
  double confidence = 0.0;

  friend bool operator==(const DigitDetection&, const DigitDetection&) = default;
};

struct PlayerDetection {
  std::int64_t frame_index = 0;
  BoundingBox box;
  double score = 0.0;
  std::vector<DigitDetection> digits;
  std::optional<int> number;
  Team team = Team::unknown;

  friend bool operator==(const PlayerDetection&, const PlayerDetection&) = default;
};

/// Returns `d` unchanged when every invariant holds, otherwise throws
/// InvariantError naming the first failing field.
inline const PlayerDetection& validate_detection(const PlayerDetection& d) {
  if (d.frame_index < 0) throw InvariantError("frame_index >= 0 violated");
  validate(d.box, "box");
  if (!(d.score >= 0.0 && d.score <= 1.0)) throw InvariantError("score in [0,1] violated");
  for (std::size_t i = 0; i < d.digits.size(); ++i) {
    const auto& g = d.digits[i];
    if (g.digit < 0 || g.digit > 9)
      throw InvariantError(fmt::format("digits[{}].digit in 0-9 violated", i));
    if (!(g.confidence >= 0.0 && g.confidence <= 1.0))
      throw InvariantError(fmt::format("digits[{}].confidence in [0,1] violated", i));
    validate(g.box, fmt::format("digits[{}].box", i));
  }
  if (d.number && (*d.number < 0 || *d.number > 99))
    throw InvariantError("number in 0-99 violated");
  return d;
}

inline constexpr int kMaxGameClock = 900;  // one 15:00 quarter
inline constexpr int kMaxPlayClock = 40;

/// One line of OCR output. Absent clocks mean the scoreboard was unreadable.
struct ClockReading {
  std::int64_t frame_index = 0;
  std::optional<int> game_clock;  // seconds remaining in the quarter
  std::optional<int> play_clock;  // seconds

  bool any_present() const { return game_clock.has_value() || play_clock.has_value(); }

  friend bool operator==(const ClockReading&, const ClockReading&) = default;
};

inline void validate(const ClockReading& r) {
  if (r.frame_index < 0) throw InvariantError("frame_index >= 0 violated");
  if (r.game_clock && (*r.game_clock < 0 || *r.game_clock > kMaxGameClock))
    throw InvariantError("game_clock in [0,900] violated");
  if (r.play_clock && (*r.play_clock < 0 || *r.play_clock > kMaxPlayClock))
    throw InvariantError("play_clock in [0,40] violated");
}

struct PlayWindow {
  int play_number = 0;
  int quarter = 1;
  std::int64_t frame_start = 0;
  std::int64_t frame_end = 0;
  int start_time = 0;  // game-clock seconds remaining
  int end_time = 0;

  friend bool operator==(const PlayWindow&, const PlayWindow&) = default;
};

inline void validate(const PlayWindow& w) {
  if (w.play_number < 1) throw InvariantError("play_number >= 1 violated");
  if (w.quarter < 1 || w.quarter > 4) throw InvariantError("quarter in 1-4 violated");
  if (w.frame_start < 0 || w.frame_start > w.frame_end)
    throw InvariantError("frame_start <= frame_end violated");
  if (w.start_time < w.end_time) throw InvariantError("start_time >= end_time violated");
  if (w.end_time < 0 || w.start_time > kMaxGameClock)
    throw InvariantError("times in [0,900] violated");
}

/// Jersey number to player names. A number may carry several names when
/// offense and defense share it.
struct Roster {
  std::string team_name;
  std::map<int, std::vector<std::string>> entries;

  friend bool operator==(const Roster&, const Roster&) = default;
};

struct GameLogEntry {
  int play_number = 0;
  int quarter = 1;
  int start_time = 0;
  int end_time = 0;
  std::string home_team;
  std::string away_team;
  std::map<int, std::string> participants;  // ascending by jersey number

  friend bool operator==(const GameLogEntry&, const GameLogEntry&) = default;
};

/// mm:ss, zero padded. 61 -> "01:01".
inline std::string format_mmss(int seconds) {
  if (seconds < 0) throw InvariantError("clock seconds >= 0 violated");
  return fmt::format("{:02d}:{:02d}", seconds / 60, seconds % 60);
}

/// Parses m:ss or mm:ss. Seconds must be two digits below 60.
inline std::optional<int> parse_mmss(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const auto mm = s.substr(0, colon);
  const auto ss = s.substr(colon + 1);
  if (mm.empty() || mm.size() > 2 || !detail::all_digits(mm)) return std::nullopt;
  if (ss.size() != 2 || !detail::all_digits(ss)) return std::nullopt;
  const int minutes = static_cast<int>(*detail::parse_int(mm));
  const int secs = static_cast<int>(*detail::parse_int(ss));
  if (secs >= 60) return std::nullopt;
  return minutes * 60 + secs;
}

/// Row-major 8-bit raster; 3-channel samples are interleaved R, G, B.
class PixelImage {
 public:
  PixelImage() = default;

  PixelImage(int width, int height, int channels, std::uint8_t fill = 0)
      : PixelImage(width, height, channels,
                   std::vector<std::uint8_t>(checked_size(width, height, channels), fill)) {}

  PixelImage(int width, int height, int channels, std::vector<std::uint8_t> samples)
      : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
    if (samples_.size() != checked_size(width, height, channels))
      throw InvariantError("sample buffer length == width*height*channels violated");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }

  const std::vector<std::uint8_t>& samples() const { return samples_; }
  std::vector<std::uint8_t>& samples() { return samples_; }

  std::uint8_t at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;

 private:
  static std::size_t checked_size(int width, int height, int channels) {
    if (width <= 0) throw InvariantError("width > 0 violated");
    if (height <= 0) throw InvariantError("height > 0 violated");
    if (channels != 1 && channels != 3) throw InvariantError("channels in {1,3} violated");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
           static_cast<std::size_t>(channels);
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

}  // namespace playindex
