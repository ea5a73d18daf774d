#pragma once

// Home/away labelling from the colour of a strip across the middle of the
// player crop.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "playindex/core_model.hpp"

namespace playindex {

enum class Channel { red = 0, green = 1, blue = 2 };

inline std::optional<Channel> parse_channel(std::string_view s) {
  if (s == "red") return Channel::red;
  if (s == "green") return Channel::green;
  if (s == "blue") return Channel::blue;
  return std::nullopt;
}

inline std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::red: return "red";
    case Channel::green: return "green";
    case Channel::blue: return "blue";
  }
  return "red";
}

enum class ColorMode { dominant_channel, no_dominant };

/// How one team's jersey looks in channel means: either one channel beats
/// both others by `dominance_margin`, or all channel means lie within it.
struct TeamColorProfile {
  Team label = Team::home;
  ColorMode mode = ColorMode::dominant_channel;
  std::optional<Channel> channel = Channel::red;
  double dominance_margin = 30.0;
};

inline void validate(const TeamColorProfile& p) {
  if (p.label == Team::unknown) throw InvariantError("profile label must be home or away");
  if (p.mode == ColorMode::dominant_channel && !p.channel)
    throw InvariantError("dominant-channel profile requires a channel");
  if (!(p.dominance_margin > 0.0)) throw InvariantError("dominance_margin > 0 violated");
}

struct ChannelHistogram {
  std::array<std::array<std::uint64_t, 256>, 3> bins{};
  std::array<double, 3> mean{};
  std::uint64_t pixel_count = 0;
};

/// Centered sub-image of round(fraction * dimension) pixels, at least one.
inline PixelImage extract_strip(const PixelImage& crop, double strip_height_fraction = 0.2,
                                double strip_width_fraction = 0.6) {
  if (crop.channels() != 3) throw InputError("extract_strip: crop must have 3 channels");
  if (!(strip_height_fraction > 0.0 && strip_height_fraction <= 1.0) ||
      !(strip_width_fraction > 0.0 && strip_width_fraction <= 1.0))
    throw InputError("extract_strip: fractions must lie in (0, 1]");
  const int sw = std::max(1, static_cast<int>(std::lround(crop.width() * strip_width_fraction)));
  const int sh = std::max(1, static_cast<int>(std::lround(crop.height() * strip_height_fraction)));
  const int x0 = (crop.width() - sw) / 2;
  const int y0 = (crop.height() - sh) / 2;
  PixelImage strip(sw, sh, 3);
  for (int y = 0; y < sh; ++y)
    for (int x = 0; x < sw; ++x)
      for (int c = 0; c < 3; ++c) strip.at(x, y, c) = crop.at(x0 + x, y0 + y, c);
  return strip;
}

inline ChannelHistogram channel_histogram(const PixelImage& strip) {
  if (strip.channels() != 3) throw InputError("channel_histogram: strip must have 3 channels");
  ChannelHistogram h;
  std::array<std::uint64_t, 3> sum{};
  const auto& s = strip.samples();
  for (std::size_t i = 0; i < s.size(); i += 3) {
    for (std::size_t c = 0; c < 3; ++c) {
      ++h.bins[c][s[i + c]];
      sum[c] += s[i + c];
    }
  }
  h.pixel_count = s.size() / 3;
  for (std::size_t c = 0; c < 3; ++c)
    h.mean[c] = static_cast<double>(sum[c]) / static_cast<double>(h.pixel_count);
  return h;
}

namespace detail {

inline bool profile_matches(const ChannelHistogram& h, const TeamColorProfile& p) {
  const auto& m = h.mean;
  if (p.mode == ColorMode::dominant_channel) {
    const auto ch = static_cast<std::size_t>(*p.channel);
    for (std::size_t c = 0; c < 3; ++c)
      if (c != ch && m[ch] - m[c] < p.dominance_margin) return false;
    return true;
  }
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  return *hi - *lo < p.dominance_margin;
}

}  // namespace detail

/// Exactly one matching profile gives its label; none or both give unknown.
inline Team classify_team(const ChannelHistogram& h, const TeamColorProfile& home,
                          const TeamColorProfile& away) {
  validate(home);
  validate(away);
  if (home.mode == away.mode &&
      (home.mode == ColorMode::no_dominant || home.channel == away.channel))
    throw InputError("team colour profiles are indistinguishable");
  const bool home_hit = detail::profile_matches(h, home);
  const bool away_hit = detail::profile_matches(h, away);
  if (home_hit == away_hit) return Team::unknown;
  return home_hit ? Team::home : Team::away;
}

}  // namespace playindex
