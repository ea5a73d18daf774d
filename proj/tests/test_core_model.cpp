#include <gtest/gtest.h>

#include "playindex/core_model.hpp"

using namespace playindex;

namespace {

PlayerDetection sample_detection() {
  PlayerDetection d;
  d.frame_index = 12;
  d.box = {10, 20, 40, 80};
  d.score = 0.9;
  d.digits = {{{5, 10, 10, 20}, 5, 0.99}, {{20, 10, 10, 20}, 1, 0.98}};
  d.number = 51;
  d.team = Team::home;
  return d;
}

}  // namespace

TEST(ValidateDetection, ZeroWidthBoxNamesTheField) {
  auto d = sample_detection();
  d.box.w = 0;
  try {
    validate_detection(d);
    FAIL() << "expected InvariantError";
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("w > 0 violated"), std::string::npos) << e.what();
  }
}

TEST(ValidateDetection, ValidDetectionIsReturnedUnchanged) {
  const auto d = sample_detection();
  EXPECT_EQ(validate_detection(d), d);
  EXPECT_EQ(&validate_detection(d), &d);
}

TEST(ValidateDetection, DigitClassTenIsRejected) {
  auto d = sample_detection();
  d.digits[1].digit = 10;
  EXPECT_THROW(validate_detection(d), InvariantError);
}

TEST(ValidateDetection, RejectsOutOfRangeFields) {
  auto d = sample_detection();
  d.score = 1.5;
  EXPECT_THROW(validate_detection(d), InvariantError);
  d = sample_detection();
  d.frame_index = -1;
  EXPECT_THROW(validate_detection(d), InvariantError);
  d = sample_detection();
  d.number = 100;
  EXPECT_THROW(validate_detection(d), InvariantError);
  d = sample_detection();
  d.digits[0].confidence = -0.1;
  EXPECT_THROW(validate_detection(d), InvariantError);
  d = sample_detection();
  d.box.x = -1;
  EXPECT_THROW(validate_detection(d), InvariantError);
}

TEST(ValidateDetection, Idempotent) {
  const auto d = sample_detection();
  EXPECT_EQ(validate_detection(validate_detection(d)), d);
}

TEST(BoundingBox, FieldRoundTripAndCenterConversion) {
  const BoundingBox b{1.5, 2.5, 3.0, 4.0};
  EXPECT_EQ(b.x, 1.5);
  EXPECT_EQ(b.y, 2.5);
  EXPECT_EQ(b.w, 3.0);
  EXPECT_EQ(b.h, 4.0);
  EXPECT_EQ(BoundingBox::from_center(b.center_x(), b.center_y(), b.w, b.h), b);
  EXPECT_EQ(b.translated(1, 1).translated(-1, -1), b);
}

TEST(ClockReading, ValidationBounds) {
  EXPECT_NO_THROW(validate(ClockReading{0, 900, 40}));
  EXPECT_NO_THROW(validate(ClockReading{0, std::nullopt, std::nullopt}));
  EXPECT_THROW(validate(ClockReading{0, 901, 10}), InvariantError);
  EXPECT_THROW(validate(ClockReading{0, 100, 41}), InvariantError);
  EXPECT_THROW(validate(ClockReading{-1, 100, 10}), InvariantError);
}

TEST(PlayWindow, Validation) {
  EXPECT_NO_THROW(validate(PlayWindow{1, 1, 100, 250, 900, 894}));
  EXPECT_THROW(validate(PlayWindow{1, 1, 250, 100, 900, 894}), InvariantError);
  EXPECT_THROW(validate(PlayWindow{1, 1, 100, 250, 894, 900}), InvariantError);
  EXPECT_THROW(validate(PlayWindow{0, 1, 100, 250, 900, 894}), InvariantError);
  EXPECT_THROW(validate(PlayWindow{1, 5, 100, 250, 900, 894}), InvariantError);
}

TEST(Mmss, FormatAndParse) {
  EXPECT_EQ(format_mmss(900), "15:00");
  EXPECT_EQ(format_mmss(61), "01:01");
  EXPECT_EQ(format_mmss(0), "00:00");
  EXPECT_EQ(parse_mmss("12:41"), 761);
  EXPECT_EQ(parse_mmss("0:05"), 5);
  EXPECT_EQ(parse_mmss("15:00"), 900);
  EXPECT_EQ(parse_mmss("15:01"), 901);  // range is checked by the clock parser
  EXPECT_FALSE(parse_mmss("1:60"));
  EXPECT_FALSE(parse_mmss("1:5"));
  EXPECT_FALSE(parse_mmss("a:05"));
  EXPECT_FALSE(parse_mmss("105"));
  for (int s = 0; s <= 900; ++s) EXPECT_EQ(parse_mmss(format_mmss(s)), s);
}

TEST(Team, StringRoundTrip) {
  for (auto t : {Team::home, Team::away, Team::unknown}) EXPECT_EQ(parse_team(to_string(t)), t);
  EXPECT_FALSE(parse_team("visitor"));
}

TEST(PixelImage, BufferLengthInvariant) {
  EXPECT_THROW(PixelImage(2, 2, 3, std::vector<std::uint8_t>(11)), InvariantError);
  EXPECT_THROW(PixelImage(0, 2, 1), InvariantError);
  EXPECT_THROW(PixelImage(2, 2, 2), InvariantError);
  PixelImage img(3, 2, 3, 7);
  EXPECT_EQ(img.samples().size(), 18u);
  img.at(2, 1, 0) = 200;
  EXPECT_EQ(img.samples()[(1 * 3 + 2) * 3], 200);
}
