#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "playindex/team.hpp"

using namespace playindex;

namespace {

const TeamColorProfile kHome{Team::home, ColorMode::dominant_channel, Channel::red, 30.0};
const TeamColorProfile kAway{Team::away, ColorMode::no_dominant, std::nullopt, 30.0};

PixelImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  PixelImage img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

}  // namespace

TEST(ExtractStrip, FullFractionsIsIdentity) {
  PixelImage img(7, 5, 3);
  for (std::size_t i = 0; i < img.samples().size(); ++i) img.samples()[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(extract_strip(img, 1.0, 1.0), img);
}

TEST(ExtractStrip, CenteredStripDimensions) {
  PixelImage img(100, 200, 3);
  img.at(20, 80, 0) = 9;  // top-left corner of the strip
  const auto s = extract_strip(img, 0.2, 0.6);
  EXPECT_EQ(s.width(), 60);
  EXPECT_EQ(s.height(), 40);
  EXPECT_EQ(s.at(0, 0, 0), 9);
}

TEST(ExtractStrip, SinglePixel) {
  const auto img = solid(1, 1, 1, 2, 3);
  EXPECT_EQ(extract_strip(img, 0.2, 0.6), img);
}

TEST(ExtractStrip, RejectsBadInput) {
  EXPECT_THROW(extract_strip(PixelImage(4, 4, 1), 0.5, 0.5), InputError);
  EXPECT_THROW(extract_strip(solid(4, 4, 0, 0, 0), 0.0, 0.5), InputError);
  EXPECT_THROW(extract_strip(solid(4, 4, 0, 0, 0), 0.5, 1.5), InputError);
}

TEST(ChannelHistogram, Examples) {
  auto h = channel_histogram(solid(4, 3, 255, 0, 0));
  EXPECT_EQ(h.mean[0], 255.0);
  EXPECT_EQ(h.mean[1], 0.0);
  EXPECT_EQ(h.mean[2], 0.0);
  EXPECT_EQ(h.bins[0][255], 12u);

  h = channel_histogram(solid(4, 3, 200, 200, 200));
  EXPECT_EQ(h.mean[0], 200.0);
  EXPECT_EQ(h.mean[1], 200.0);
  EXPECT_EQ(h.mean[2], 200.0);

  PixelImage half = solid(4, 2, 255, 0, 0);
  for (int x = 0; x < 4; ++x) {
    half.at(x, 1, 0) = 0;
    half.at(x, 1, 2) = 255;
  }
  h = channel_histogram(half);
  EXPECT_EQ(h.mean[0], 127.5);
  EXPECT_EQ(h.mean[1], 0.0);
  EXPECT_EQ(h.mean[2], 127.5);
}

TEST(ChannelHistogram, BinsSumToPixelCount) {
  std::mt19937_64 rng(6);
  PixelImage img(13, 7, 3);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(rng());
  const auto h = channel_histogram(img);
  EXPECT_EQ(h.pixel_count, 91u);
  for (const auto& ch : h.bins) {
    std::uint64_t total = 0;
    for (auto b : ch) total += b;
    EXPECT_EQ(total, 91u);
  }
}

TEST(ClassifyTeam, Examples) {
  EXPECT_EQ(classify_team(channel_histogram(solid(10, 4, 200, 40, 50)), kHome, kAway), Team::home);
  EXPECT_EQ(classify_team(channel_histogram(solid(10, 4, 230, 228, 231)), kHome, kAway), Team::away);
  // spread 35: not uniform enough for the away profile; red leads green by 20 only
  EXPECT_EQ(classify_team(channel_histogram(solid(10, 4, 120, 100, 85)), kHome, kAway), Team::unknown);
}

TEST(ClassifyTeam, BothProfilesMatchingIsUnknown) {
  const TeamColorProfile red{Team::home, ColorMode::dominant_channel, Channel::red, 30.0};
  const TeamColorProfile wide{Team::away, ColorMode::no_dominant, std::nullopt, 255.0};
  EXPECT_EQ(classify_team(channel_histogram(solid(2, 2, 200, 10, 10)), red, wide), Team::unknown);
}

TEST(ClassifyTeam, IndistinguishableProfilesAreAnError) {
  EXPECT_THROW(classify_team(channel_histogram(solid(2, 2, 1, 1, 1)), kHome, TeamColorProfile{Team::away}),
               InputError);
  EXPECT_THROW(classify_team(channel_histogram(solid(2, 2, 1, 1, 1)),
                             TeamColorProfile{Team::home, ColorMode::no_dominant, std::nullopt, 10}, kAway),
               InputError);
}

TEST(ClassifyTeam, ProfileValidation) {
  EXPECT_THROW(validate(TeamColorProfile{Team::home, ColorMode::dominant_channel, std::nullopt, 30}),
               InvariantError);
  EXPECT_THROW(validate(TeamColorProfile{Team::home, ColorMode::no_dominant, std::nullopt, 0}), InvariantError);
}

TEST(ClassifyTeam, InvariantUnderUniformBrightnessShift) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    PixelImage img(8, 4, 3);  // 32 pixels keep the means exact
    for (auto& s : img.samples()) s = static_cast<std::uint8_t>(60 + rng() % 120);
    if (trial % 2) {
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x) img.at(x, y, 0) = static_cast<std::uint8_t>(std::min(180, img.at(x, y, 0) + 60));
    }
    const Team base = classify_team(channel_histogram(img), kHome, kAway);
    for (int shift : {-50, -20, 30, 70}) {
      PixelImage moved = img;
      for (auto& s : moved.samples()) s = static_cast<std::uint8_t>(s + shift);
      EXPECT_EQ(classify_team(channel_histogram(moved), kHome, kAway), base);
    }
  }
}

TEST(ClassifyTeam, PixelOrderDoesNotMatter) {
  std::mt19937_64 rng(8);
  PixelImage img(8, 5, 3);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(rng());
  const auto h = channel_histogram(img);
  std::vector<std::array<std::uint8_t, 3>> px;
  for (std::size_t i = 0; i < img.samples().size(); i += 3)
    px.push_back({img.samples()[i], img.samples()[i + 1], img.samples()[i + 2]});
  std::shuffle(px.begin(), px.end(), rng);
  PixelImage shuffled(8, 5, 3);
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) shuffled.samples()[i * 3 + c] = px[i][c];
  const auto h2 = channel_histogram(shuffled);
  EXPECT_EQ(h.bins, h2.bins);
  EXPECT_EQ(h.mean, h2.mean);
  EXPECT_EQ(classify_team(h, kHome, kAway), classify_team(h2, kHome, kAway));
}

TEST(ClassifyTeam, PureChannelPicksMatchingDominantProfile) {
  for (int c = 0; c < 3; ++c)
    for (double margin : {1.0, 30.0, 128.0, 255.0}) {
      const TeamColorProfile dom{Team::home, ColorMode::dominant_channel, static_cast<Channel>(c), margin};
      const TeamColorProfile none{Team::away, ColorMode::no_dominant, std::nullopt, margin};
      PixelImage img(3, 3, 3);
      for (std::size_t i = static_cast<std::size_t>(c); i < img.samples().size(); i += 3) img.samples()[i] = 255;
      EXPECT_EQ(classify_team(channel_histogram(img), dom, none), Team::home) << c << " " << margin;
    }
}
