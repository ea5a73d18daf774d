#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles/brute_force.hpp"
#include "playindex/geometry.hpp"

using namespace playindex;

TEST(Iou, Examples) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, {20, 20, 5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(iou(a, {5, 0, 10, 10}), 1.0 / 3.0);
}

TEST(Iou, TouchingEdgesDoNotOverlap) { EXPECT_EQ(iou({0, 0, 10, 10}, {10, 0, 10, 10}), 0.0); }

TEST(Iou, SymmetricSelfOneAndMatchesOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0, 50), len(0.5, 40);
  for (int i = 0; i < 5000; ++i) {
    const BoundingBox a{pos(rng), pos(rng), len(rng), len(rng)};
    const BoundingBox b{pos(rng), pos(rng), len(rng), len(rng)};
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_EQ(iou(a, a), 1.0);
    EXPECT_NEAR(iou(a, b), oracle::iou(a, b), 1e-12);
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
  }
}

TEST(SizeBucket, Examples) {
  EXPECT_EQ(size_bucket({0, 0, 32, 32}), SizeBucket::small);
  EXPECT_EQ(size_bucket({0, 0, 31, 31}), SizeBucket::excluded);
  EXPECT_EQ(size_bucket({0, 0, 100, 100}), SizeBucket::large);
}

TEST(SizeBucket, InclusiveUpperBoundOfSmall) {
  EXPECT_EQ(size_bucket({0, 0, 96, 96}), SizeBucket::small);
  EXPECT_EQ(size_bucket({0, 0, 96, 96.01}), SizeBucket::large);
  EXPECT_EQ(size_bucket({0, 0, 16, 64}), SizeBucket::small);  // area, not side length
}

TEST(Hungarian, Examples) {
  auto a = hungarian_assign(CostMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total_cost, 0.0);

  a = hungarian_assign(CostMatrix{{1, 2}, {2, 1}});
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total_cost, 2.0);

  a = hungarian_assign(CostMatrix{{4.25}});
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}}));
  EXPECT_EQ(a.total_cost, 4.25);
}

TEST(Hungarian, RejectsNonFiniteEntries) {
  EXPECT_THROW(hungarian_assign(CostMatrix{{0, std::numeric_limits<double>::infinity()}}), InputError);
  EXPECT_THROW(hungarian_assign(CostMatrix{{std::nan("")}}), InputError);
}

TEST(Hungarian, RectangularUsesMinDimensionPairs) {
  const auto wide = hungarian_assign(CostMatrix{{5, 1, 9}, {2, 8, 3}});
  EXPECT_EQ(wide.pairs.size(), 2u);
  EXPECT_EQ(wide.total_cost, 3.0);
  const auto tall = hungarian_assign(CostMatrix{{5, 2}, {1, 8}, {9, 3}});
  EXPECT_EQ(tall.pairs.size(), 2u);
  EXPECT_EQ(tall.total_cost, 3.0);
}

namespace {

void check_against_oracle(const oracle::Matrix& m, bool integer) {
  CostMatrix c(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) c(i, j) = m[i][j];
  const auto a = hungarian_assign(c);
  const double best = oracle::min_assignment_cost(m);
  if (integer)
    ASSERT_EQ(a.total_cost, best);
  else
    ASSERT_NEAR(a.total_cost, best, 1e-9);

  ASSERT_EQ(a.pairs.size(), std::min(m.size(), m[0].size()));
  std::set<std::size_t> rows, cols;
  double sum = 0.0;
  for (auto [r, col] : a.pairs) {
    ASSERT_TRUE(rows.insert(r).second);
    ASSERT_TRUE(cols.insert(col).second);
    sum += m[r][col];
  }
  ASSERT_EQ(sum, a.total_cost);
}

}  // namespace

TEST(Hungarian, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 7), cell(0, 20);
  std::uniform_real_distribution<double> real(-5.0, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const auto m = static_cast<std::size_t>(dim(rng));
    const bool integer = trial % 2 == 0;
    oracle::Matrix mat(n, std::vector<double>(m));
    for (auto& row : mat)
      for (auto& v : row) v = integer ? cell(rng) : real(rng);
    check_against_oracle(mat, integer);
  }
}

TEST(Hungarian, PositiveScalingKeepsPairs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> real(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    CostMatrix c(5, 6), s(5, 6);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        c(i, j) = real(rng);
        s(i, j) = c(i, j) * 3.5;
      }
    EXPECT_EQ(hungarian_assign(c).pairs, hungarian_assign(s).pairs);
  }
}

TEST(MatchDetections, Examples) {
  const BoundingBox g{0, 0, 10, 10};
  std::vector<ScoredBox> one{{g, 0.7}};
  std::vector<BoundingBox> gts{g};
  EXPECT_EQ(match_detections(one, gts, 0.5), (std::vector<std::optional<std::size_t>>{0}));

  std::vector<ScoredBox> many{{g, 0.9}, {{1, 0, 10, 10}, 0.5}};
  EXPECT_EQ(match_detections(many, std::vector<BoundingBox>{}, 0.5),
            (std::vector<std::optional<std::size_t>>{std::nullopt, std::nullopt}));

  // listed lower score first so that input order and score order disagree
  std::vector<ScoredBox> two{{{1, 0, 10, 10}, 0.8}, {{0, 1, 10, 10}, 0.9}};
  const auto m = match_detections(two, gts, 0.5);
  EXPECT_FALSE(m[0]);
  EXPECT_EQ(m[1], 0u);
}

TEST(MatchDetections, TieBreaks) {
  const BoundingBox g{0, 0, 10, 10};
  std::vector<BoundingBox> gts{g};
  // equal scores: lower prediction index wins
  std::vector<ScoredBox> preds{{g, 0.5}, {g, 0.5}};
  auto m = match_detections(preds, gts, 0.5);
  EXPECT_EQ(m[0], 0u);
  EXPECT_FALSE(m[1]);
  // equal IoU: lower gt index wins
  std::vector<BoundingBox> twins{g, g};
  m = match_detections(std::vector<ScoredBox>{{g, 0.9}}, twins, 0.5);
  EXPECT_EQ(m[0], 0u);
}

TEST(MatchDetections, ThresholdIsInclusive) {
  // IoU exactly 0.5: (0,0,30,30) vs (10,0,30,30) -> 600 / 1200
  std::vector<ScoredBox> p{{{10, 0, 30, 30}, 0.9}};
  std::vector<BoundingBox> g{{0, 0, 30, 30}};
  EXPECT_TRUE(match_detections(p, g, 0.5)[0]);
  EXPECT_FALSE(match_detections(p, g, 0.51)[0]);
}

TEST(MatchDetections, EachGtUsedAtMostOnce) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(0, 60), len(5, 30), score(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ScoredBox> preds(6);
    std::vector<BoundingBox> gts(static_cast<std::size_t>(trial % 5));
    for (auto& p : preds) p = {{pos(rng), pos(rng), len(rng), len(rng)}, score(rng)};
    for (auto& g : gts) g = {pos(rng), pos(rng), len(rng), len(rng)};
    const auto m = match_detections(preds, gts, 0.3);
    std::set<std::size_t> used;
    std::size_t matched = 0;
    for (const auto& x : m)
      if (x) {
        ++matched;
        EXPECT_TRUE(used.insert(*x).second);
        EXPECT_LT(*x, gts.size());
      }
    EXPECT_LE(matched, std::min(preds.size(), gts.size()));
  }
}
