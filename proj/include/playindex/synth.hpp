#pragma once

// Seeded synthetic games: a ground-truth log together with the clock text
// and detection records an upstream system would have produced for it.
//
// Every random event draws its uniforms unconditionally, so the same seed
// visits the same schedule for any corruption rate and a higher rate corrupts
// a superset of the events corrupted at a lower one.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "playindex/clock.hpp"
#include "playindex/core_model.hpp"
#include "playindex/gamelog.hpp"

namespace playindex {

struct SynthConfig {
  std::uint64_t seed = 0;
  int quarters = 4;
  int plays_per_quarter = 4;
  int frames_per_second = 30;
  int min_players = 8;  // home participants per play
  int max_players = 12;
  int away_players = 4;  // away players visible per play
  double ocr_corruption_rate = 0.0;
  double digit_error_rate = 0.0;
  double detection_drop_rate = 0.0;
  std::string home_team = "Home";
  std::string away_team = "Away";
};

inline void validate(const SynthConfig& c) {
  if (c.quarters < 1 || c.quarters > 4) throw InvariantError("quarters in 1-4 violated");
  if (c.plays_per_quarter < 1) throw InvariantError("plays_per_quarter >= 1 violated");
  if (c.frames_per_second < 1) throw InvariantError("frames_per_second >= 1 violated");
  if (c.min_players < 1 || c.max_players < c.min_players || c.max_players > 30)
    throw InvariantError("players per play: 1 <= min <= max <= 30 violated");
  if (c.away_players < 0 || c.away_players > 30) throw InvariantError("away_players in 0-30 violated");
  for (double r : {c.ocr_corruption_rate, c.digit_error_rate, c.detection_drop_rate})
    if (!(r >= 0.0 && r < 1.0)) throw InvariantError("rates in [0,1) violated");
  if (c.home_team.empty() || c.away_team.empty() || c.home_team == c.away_team)
    throw InvariantError("team names must be non-empty and distinct");
}

struct SyntheticGame {
  std::vector<GameLogEntry> truth;
  std::vector<PlayWindow> truth_windows;
  std::map<std::int64_t, int> truth_quarter;  // every emitted clock frame
  Roster home_roster;
  Roster away_roster;
  std::string clock_text;
  std::string detection_text;
  std::size_t clock_lines = 0;
  std::size_t corrupted_clock_lines = 0;
  std::size_t detection_records = 0;
};

namespace detail {

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(integer(0, static_cast<int>(i) - 1))]);
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::array<const char*, 24> kFirstNames{
    "Aaron", "Blake", "Caleb", "Dante", "Elijah", "Felix", "Grant", "Hunter",
    "Isaac", "Jalen", "Kendall", "Landon", "Malik", "Nolan", "Owen", "Preston",
    "Quinn", "Reid", "Silas", "Tyrell", "Uriah", "Vince", "Wesley", "Xavier"};
inline constexpr std::array<const char*, 24> kLastNames{
    "Adams", "Brooks", "Carter", "Dawson", "Ellis", "Foster", "Graves", "Hayes",
    "Irving", "Jenkins", "Keller", "Lawson", "Mercer", "Nash", "Ortiz", "Pierce",
    "Ramsey", "Sutton", "Tatum", "Underwood", "Vaughn", "Walsh", "Young", "Zeller"};

inline Roster make_roster(SynthRng& rng, const std::string& team, int size) {
  std::vector<int> numbers(100);
  for (int i = 0; i < 100; ++i) numbers[static_cast<std::size_t>(i)] = i;
  rng.shuffle(numbers);
  std::vector<std::string> names;
  for (const char* f : kFirstNames)
    for (const char* l : kLastNames) names.push_back(fmt::format("{} {}", f, l));
  rng.shuffle(names);
  Roster r;
  r.team_name = team;
  std::size_t next_name = 0;
  for (int i = 0; i < size; ++i) {
    auto& entry = r.entries[numbers[static_cast<std::size_t>(i)]];
    entry.push_back(names[next_name++]);
    if (rng.chance(0.2)) entry.push_back(names[next_name++]);  // offense/defense share the number
  }
  return r;
}

struct SynthPlayer {
  int number = 0;
  Team team = Team::home;
  BoundingBox box;
  double score = 0.9;
};

inline std::vector<DigitDetection> spell_number(SynthRng& rng, int number, const BoundingBox& player) {
  const double w = player.w;
  const double h = player.h;
  std::vector<DigitDetection> digits;
  auto digit_box = [&](double left_fraction) {
    return BoundingBox{left_fraction * w, 0.3 * h, 0.25 * w, 0.2 * h};
  };
  if (number >= 10) {
    digits.push_back({digit_box(0.2), number / 10, rng.uniform(0.975, 1.0)});
    digits.push_back({digit_box(0.55), number % 10, rng.uniform(0.975, 1.0)});
  } else {
    digits.push_back({digit_box(0.375), number, rng.uniform(0.975, 1.0)});
  }
  // near-duplicate of the first digit, removed by suppression
  const bool duplicate = rng.chance(0.1);
  const double dup_conf = rng.uniform(0.97, 0.975);
  if (duplicate)
    digits.push_back({digits.front().box.translated(0.02 * w, 0.0), digits.front().digit, dup_conf});
  // low-confidence clutter, removed by the confidence threshold
  const bool clutter = rng.chance(0.1);
  const int clutter_digit = rng.integer(0, 9);
  const double clutter_conf = rng.uniform(0.2, 0.9);
  if (clutter) digits.push_back({BoundingBox{0.1 * w, 0.6 * h, 0.2 * w, 0.2 * h}, clutter_digit, clutter_conf});
  if (rng.chance(0.5)) std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace detail

/// Builds one game. Plays in a quarter start at 15:00 and count down in
/// whole seconds, each displayed for frames_per_second frames; the play clock
/// resets to 40 at every play start. Plays are separated by cuts, optionally
/// with unreadable-clock frames in between.
inline SyntheticGame generate_game(const SynthConfig& cfg) {
  validate(cfg);
  if (cfg.quarters > 1 && cfg.plays_per_quarter < 2)
    throw InputError("synth: plays_per_quarter must be at least 2 when quarters > 1");

  detail::SynthRng rng(cfg.seed);
  SyntheticGame game;
  game.home_roster = detail::make_roster(rng, cfg.home_team, std::max(40, cfg.max_players + 5));
  game.away_roster = detail::make_roster(rng, cfg.away_team, std::max(40, cfg.away_players + 5));
  std::vector<int> home_numbers;
  for (const auto& [n, _] : game.home_roster.entries) home_numbers.push_back(n);
  std::vector<int> away_numbers;
  for (const auto& [n, _] : game.away_roster.entries) away_numbers.push_back(n);

  struct PlanPlay {
    int quarter;
    int start;
    int end;
  };
  std::vector<PlanPlay> plan;
  constexpr int kMinDuration = 6;
  constexpr int kMaxDuration = 20;
  for (int q = 1; q <= cfg.quarters; ++q) {
    const int n = cfg.plays_per_quarter;
    std::vector<int> durations(static_cast<std::size_t>(n));
    std::vector<int> gaps(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (auto& d : durations) d = rng.integer(kMinDuration, kMaxDuration);
    for (auto& g : gaps) g = rng.integer(1, 60);
    const bool rearm_needed = q < cfg.quarters;
    const int final_end = rng.integer(0, 100);
    int used = 0;
    for (int d : durations) used += d;
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) used += gaps[i];
    if (rearm_needed) {
      const int last_gap = 900 - final_end - used;
      if (last_gap < 1) throw InputError("synth: plays do not fit in a quarter");
      gaps.back() = last_gap;
    } else if (!gaps.empty() && used + gaps.back() > 900) {
      throw InputError("synth: plays do not fit in a quarter");
    } else if (gaps.empty() && used > 900) {
      throw InputError("synth: plays do not fit in a quarter");
    }
    int clock = 900;
    for (int i = 0; i < n; ++i) {
      const int start = clock;
      const int end = start - durations[static_cast<std::size_t>(i)];
      plan.push_back({q, start, end});
      if (i + 1 < n) clock = end - gaps[static_cast<std::size_t>(i)];
    }
  }

  std::int64_t frame = rng.integer(0, 200);
  const int fps = cfg.frames_per_second;
  std::string& clock = game.clock_text;
  std::string& records = game.detection_text;
  clock += "# frame game_clock play_clock\n";
  records += "# frame x y w h score team number k [digit conf x y w h]...\n";

  auto emit_clock = [&](const ClockReading& r, int quarter) {
    game.truth_quarter[r.frame_index] = quarter;
    ++game.clock_lines;
    const bool corrupt = rng.chance(cfg.ocr_corruption_rate);
    std::string line = format_clock_line(r);
    if (corrupt) {
      const auto space = line.find(' ');
      line.insert(space + 1, "?");
      ++game.corrupted_clock_lines;
    }
    clock += line;
    clock += '\n';
  };

  auto emit_player = [&](const detail::SynthPlayer& p, std::int64_t f) {
    const bool drop = rng.chance(cfg.detection_drop_rate);
    const bool misread = rng.chance(cfg.digit_error_rate);
    PlayerDetection d;
    d.frame_index = f;
    d.box = p.box.translated(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0));
    d.score = p.score;
    d.team = p.team;
    d.digits = detail::spell_number(rng, p.number, d.box);
    if (drop) return;
    if (misread)
      for (auto& g : d.digits) g.confidence = std::min(g.confidence, 0.5);
    records += format_detection_record(d);
    records += '\n';
    ++game.detection_records;
  };

  auto random_player = [&](int number, Team team) {
    detail::SynthPlayer p;
    p.number = number;
    p.team = team;
    p.box = {rng.uniform(0.0, 1180.0), rng.uniform(0.0, 500.0), rng.uniform(40.0, 90.0),
             rng.uniform(90.0, 200.0)};
    p.score = rng.uniform(0.7, 1.0);
    return p;
  };

  auto absence_run = [&](int quarter, int frames, bool with_players) {
    std::vector<detail::SynthPlayer> bystanders;
    if (with_players) {
      auto pool = home_numbers;
      rng.shuffle(pool);
      for (int i = 0; i < 3; ++i) bystanders.push_back(random_player(pool[static_cast<std::size_t>(i)], Team::home));
    }
    for (int i = 0; i < frames; ++i, ++frame) {
      emit_clock({frame, std::nullopt, std::nullopt}, quarter);
      for (const auto& b : bystanders) emit_player(b, frame);
    }
  };

  absence_run(1, fps, false);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const auto& pp = plan[k];
    if (k > 0 && rng.chance(0.5)) absence_run(plan[k - 1].quarter, rng.integer(fps / 2 + 1, 2 * fps), true);

    auto home_pool = home_numbers;
    rng.shuffle(home_pool);
    const int n_home = rng.integer(cfg.min_players, cfg.max_players);
    std::vector<detail::SynthPlayer> players;
    for (int i = 0; i < n_home; ++i)
      players.push_back(random_player(home_pool[static_cast<std::size_t>(i)], Team::home));
    auto away_pool = away_numbers;
    rng.shuffle(away_pool);
    for (int i = 0; i < cfg.away_players; ++i)
      players.push_back(random_player(away_pool[static_cast<std::size_t>(i)], Team::away));

    PlayWindow w;
    w.play_number = static_cast<int>(k) + 1;
    w.quarter = pp.quarter;
    w.frame_start = frame;
    w.start_time = pp.start;
    w.end_time = pp.end;
    for (int s = 0; s <= pp.start - pp.end; ++s) {
      const ClockReading shown{0, pp.start - s, kMaxPlayClock - s};
      for (int i = 0; i < fps; ++i, ++frame) {
        ClockReading r = shown;
        r.frame_index = frame;
        emit_clock(r, pp.quarter);
        for (const auto& p : players) emit_player(p, frame);
      }
    }
    w.frame_end = frame - 1;
    game.truth_windows.push_back(w);

    GameLogEntry e;
    e.play_number = w.play_number;
    e.quarter = w.quarter;
    e.start_time = w.start_time;
    e.end_time = w.end_time;
    e.home_team = cfg.home_team;
    e.away_team = cfg.away_team;
    for (int i = 0; i < n_home; ++i) {
      const int n = home_pool[static_cast<std::size_t>(i)];
      e.participants.emplace(n, resolve_names(n, game.home_roster));
    }
    game.truth.push_back(std::move(e));
  }
  absence_run(cfg.quarters, fps, false);
  return game;
}

}  // namespace playindex
