#include <gtest/gtest.h>

#include "quakescore/error.hpp"
#include "quakescore/metrics.hpp"
#include "test_support.hpp"

namespace quakescore {
namespace {

using testing::Rng;
constexpr auto BG = DamageClass::Background;
constexpr auto US = DamageClass::Undamaged;
constexpr auto DS = DamageClass::Damaged;
constexpr auto DB = DamageClass::Debris;

TEST(ClassIouTest, IdenticalMasksGiveOne) {
  const SegMask m(3, 3, {US, DS, DB, BG, US, DS, DB, BG, US});
  for (DamageClass c : kAllClasses) EXPECT_EQ(class_iou(m, m, c), 1.0);
}

TEST(ClassIouTest, FourByFourPartialOverlap) {
  // Debris covers the top two rows of gt (8 px); pred keeps the first row
  // (4 of them) and adds two pixels in row 2.
  SegMask gt(4, 4, BG);
  SegMask pred(4, 4, BG);
  for (std::size_t x = 0; x < 4; ++x) {
    gt.set(x, 0, DB);
    gt.set(x, 1, DB);
    pred.set(x, 0, DB);
  }
  pred.set(0, 2, DB);
  pred.set(1, 2, DB);

  const auto oracle = testing::naive_set_iou(gt, pred, DB);
  ASSERT_EQ(oracle.intersection, 4u);
  ASSERT_EQ(oracle.union_, 10u);
  EXPECT_EQ(class_iou(gt, pred, DB), 0.4);
}

TEST(ClassIouTest, AbsentWhenUnionEmpty) {
  const SegMask a(2, 2, US);
  EXPECT_FALSE(class_iou(a, a, DB).has_value());
}

TEST(ClassIouTest, DimensionMismatchThrows) {
  EXPECT_THROW(class_iou(SegMask(2, 2, US), SegMask(2, 3, US), US), DimensionError);
  EXPECT_THROW(mean_iou(SegMask(2, 2, US), SegMask(3, 2, US)), DimensionError);
}

TEST(MeanIouTest, TwoByTwoWorkedExample) {
  const SegMask gt(2, 2, {US, US, DS, BG});
  const SegMask pred(2, 2, {US, DS, DS, BG});
  const IoUReport r = mean_iou(gt, pred);
  EXPECT_EQ(r.iou(BG), 1.0);
  EXPECT_EQ(r.iou(US), 0.5);
  EXPECT_EQ(r.iou(DS), 0.5);
  EXPECT_FALSE(r.iou(DB).has_value());
  EXPECT_EQ(r.included_count, 3u);
  EXPECT_NEAR(r.mean, 2.0 / 3.0, 1e-12);
}

TEST(MeanIouTest, DisjointClassesGiveZero) {
  const IoUReport r = mean_iou(SegMask(3, 3, US), SegMask(3, 3, DS));
  EXPECT_EQ(r.iou(US), 0.0);
  EXPECT_EQ(r.iou(DS), 0.0);
  EXPECT_FALSE(r.iou(BG));
  EXPECT_FALSE(r.iou(DB));
  EXPECT_EQ(r.included_count, 2u);
  EXPECT_EQ(r.mean, 0.0);
}

TEST(MeanIouTest, SelfComparisonIsExactlyOne) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const SegMask m = testing::random_mask(rng, 32);
    EXPECT_EQ(mean_iou(m, m).mean, 1.0);
  }
}

TEST(MeanIouTest, MatchesSetOracleAndIsSymmetric) {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const SegMask a = testing::random_mask(rng, 32);
    const SegMask b = testing::random_mask(rng, a.width(), a.height());
    const IoUReport r = mean_iou(a, b);
    double sum = 0.0;
    std::size_t n = 0;
    for (DamageClass c : kAllClasses) {
      const auto o = testing::naive_set_iou(a, b, c);
      const auto iou = class_iou(a, b, c);
      ASSERT_EQ(class_iou(b, a, c), iou);
      if (o.union_ == 0) {
        ASSERT_FALSE(iou);
        ASSERT_FALSE(r.iou(c));
        continue;
      }
      const double expected = double(o.intersection) / double(o.union_);
      ASSERT_EQ(iou, expected);
      ASSERT_EQ(r.iou(c), expected);
      ASSERT_GE(expected, 0.0);
      ASSERT_LE(expected, 1.0);
      sum += expected;
      ++n;
    }
    ASSERT_EQ(r.included_count, n);
    ASSERT_NEAR(r.mean, sum / n, 1e-15);
  }
}

TEST(MeanIouTest, FixingOnePixelNeverLowersThatClass) {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const SegMask gt = testing::random_mask(rng, 16);
    SegMask pred = testing::random_mask(rng, gt.width(), gt.height());
    std::vector<std::size_t> wrong;
    for (std::size_t p = 0; p < gt.pixel_count(); ++p)
      if (gt[p] != pred[p]) wrong.push_back(p);
    if (wrong.empty()) continue;
    const std::size_t p = wrong[rng() % wrong.size()];
    const DamageClass c = gt[p];
    const double before = class_iou(gt, pred, c).value();
    pred[p] = c;
    EXPECT_GE(class_iou(gt, pred, c).value(), before);
  }
}

TEST(DatasetMeanIouTest, SingleAndPairedCases) {
  const SegMask gt(2, 2, {US, US, DS, BG});
  const SegMask pred(2, 2, {US, DS, DS, BG});
  const std::vector<MaskPair> one{{gt, pred}};
  EXPECT_EQ(dataset_mean_iou(one), mean_iou(gt, pred).mean);

  const std::vector<MaskPair> two{{gt, gt}, {SegMask(2, 2, US), SegMask(2, 2, DS)}};
  EXPECT_EQ(dataset_mean_iou(two), 0.5);
}

TEST(DatasetMeanIouTest, EqualsIndependentRecomputation) {
  Rng rng(8);
  std::vector<MaskPair> pairs;
  double expected = 0.0;
  for (int i = 0; i < 20; ++i) {
    SegMask a = testing::random_mask(rng, 24);
    SegMask b = testing::random_mask(rng, a.width(), a.height());
    double sum = 0.0;
    int n = 0;
    for (DamageClass c : kAllClasses) {
      const auto o = testing::naive_set_iou(a, b, c);
      if (o.union_ == 0) continue;
      sum += double(o.intersection) / double(o.union_);
      ++n;
    }
    expected += sum / n;
    pairs.emplace_back(std::move(a), std::move(b));
  }
  expected /= 20.0;
  EXPECT_NEAR(dataset_mean_iou(pairs), expected, 1e-12);
}

TEST(DatasetMeanIouTest, Errors) {
  EXPECT_THROW(dataset_mean_iou({}), InputError);
  const std::vector<MaskPair> bad{{SegMask(1, 1, US), SegMask(1, 2, US)}};
  EXPECT_THROW(dataset_mean_iou(bad), DimensionError);
}

}  // namespace
}  // namespace quakescore
