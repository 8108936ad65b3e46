#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "patchsearch/components.hpp"
#include "patchsearch/errors.hpp"
#include "patchsearch/feature_map.hpp"
#include "patchsearch/similarity.hpp"

using namespace patchsearch;
namespace pt = patchsearch::testing;

TEST(Cosine, IdenticalVectorsGiveOne) {
  EXPECT_NEAR(cosine_similarity({1.0, 0.0}, {1.0, 0.0}), 1.0, 1e-12);
}

TEST(Cosine, OrthogonalVectorsGiveZero) {
  EXPECT_NEAR(cosine_similarity({1.0, 0.0}, {0.0, 1.0}), 0.0, 1e-12);
}

TEST(Cosine, DiagonalAgainstAxis) {
  EXPECT_NEAR(cosine_similarity({1.0, 1.0}, {1.0, 0.0}), 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(Cosine, ZeroNormThrows) {
  EXPECT_THROW(cosine_similarity({0.0, 0.0}, {1.0, 0.0}), DegenerateInput);
  EXPECT_THROW(cosine_similarity({1.0, 2.0}, {0.0, 0.0}), DegenerateInput);
}

TEST(Cosine, LengthMismatchThrows) {
  EXPECT_THROW(cosine_similarity({1.0, 0.0}, {1.0, 0.0, 0.0}), InvalidArgument);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform_index(32));
    std::vector<double> u(dim), v(dim);
    for (int i = 0; i < dim; ++i) {
      u[i] = rng.normal();
      v[i] = rng.normal();
    }
    const double a = 0.01 + 100.0 * rng.uniform01();
    const double b = 0.01 + 100.0 * rng.uniform01();
    std::vector<double> au(u), bv(v);
    for (double& x : au) x *= a;
    for (double& x : bv) x *= b;
    const double s = cosine_similarity(u, v);
    EXPECT_NEAR(s, cosine_similarity(v, u), 1e-12);
    EXPECT_NEAR(s, cosine_similarity(au, bv), 1e-12);
    EXPECT_NEAR(s, pt::naive_cosine(u, v), 1e-12);
    EXPECT_LE(std::abs(s), 1.0 + 1e-12);
  }
}

TEST(Cosine, MixedPrecisionSpans) {
  const std::vector<float> f{3.0f, 4.0f};
  const std::vector<double> d{4.0, 3.0};
  EXPECT_NEAR(cosine_similarity(std::span<const float>(f), std::span<const double>(d)), 24.0 / 25.0, 1e-12);
}

TEST(Percentile, Extremes) {
  const std::vector<double> v{3, 1, 2};
  EXPECT_EQ(percentile(v, 0), 1);
  EXPECT_EQ(percentile(v, 100), 3);
}

TEST(Percentile, LowerNearestRank) {
  const std::vector<double> v{10, 20, 30, 40};
  EXPECT_EQ(percentile(v, 95), 30);
  EXPECT_EQ(percentile(v, 50), 20);
}

TEST(Percentile, SingleElement) {
  const std::vector<double> v{7.5};
  for (double p : {0.0, 5.0, 95.0, 100.0}) EXPECT_EQ(percentile(v, p), 7.5);
}

TEST(Percentile, EmptyThrows) {
  const std::vector<double> v;
  EXPECT_THROW(percentile(v, 50), InvalidArgument);
}

TEST(Percentile, MonotoneInPAndBoundedByData) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + rng.uniform_index(40));
    for (double& x : v) x = rng.normal();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double prev = -INFINITY;
    for (int p = 0; p <= 100; ++p) {
      const double q = percentile(v, p);
      EXPECT_GE(q, prev);
      EXPECT_GE(q, *lo);
      EXPECT_LE(q, *hi);
      EXPECT_NE(std::find(v.begin(), v.end(), q), v.end());
      prev = q;
    }
  }
}

TEST(PatchSetTest, BoundsAreChecked) {
  PatchSet s(4);
  EXPECT_THROW(s.insert({4, 0}), InvalidArgument);
  EXPECT_THROW(s.insert({0, -1}), InvalidArgument);
  EXPECT_THROW(PatchSet::from_bbox({0, 0, 4, 1}, 4), InvalidArgument);
}

TEST(PatchSetTest, MembersAreRowMajor) {
  const std::vector<Patch> ps{{2, 1}, {0, 3}, {2, 0}, {1, 1}};
  const PatchSet s = PatchSet::from_patches(4, ps);
  const std::vector<Patch> expected{{0, 3}, {1, 1}, {2, 0}, {2, 1}};
  EXPECT_EQ(s.members(), expected);
}

TEST(PatchSetTest, SetAlgebraMatchesStdSet) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    const PatchSet a = pt::random_mask(n, 0.4, rng);
    const PatchSet b = pt::random_mask(n, 0.4, rng);
    const auto ca = pt::to_cells(a), cb = pt::to_cells(b);
    pt::CellSet u, i, d;
    std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(u, u.end()));
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(i, i.end()));
    std::set_difference(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(d, d.end()));
    EXPECT_EQ(pt::to_cells(a | b), u);
    EXPECT_EQ(pt::to_cells(a & b), i);
    EXPECT_EQ(pt::to_cells(a - b), d);
    EXPECT_EQ(a.intersects(b), !i.empty());
    EXPECT_EQ(a.subset_of(b), d.empty());
    EXPECT_EQ(a.size(), ca.size());
  }
}

TEST(PatchSetTest, MixedGridsThrow) {
  EXPECT_THROW((void)(PatchSet(3) | PatchSet(4)), InvalidArgument);
}

TEST(FeatureMapTest, RejectsBadShapeAndNonFinite) {
  EXPECT_THROW(FeatureMap(2, 3, std::vector<float>(11)), InvalidArgument);
  std::vector<float> data(12, 1.0f);
  data[5] = NAN;
  EXPECT_THROW(FeatureMap(2, 3, data), InvalidArgument);
  data[5] = INFINITY;
  EXPECT_THROW(FeatureMap(2, 3, data), InvalidArgument);
}

TEST(FeatureMapTest, RowMajorAccess) {
  std::vector<float> data(2 * 2 * 3);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(i);
  const FeatureMap m(2, 3, data);
  EXPECT_EQ(m.at(1, 0)[0], 6.0f);
  EXPECT_EQ(m.at(0, 1)[2], 5.0f);
  EXPECT_EQ(m.at(3)[1], 10.0f);
}

TEST(Components, TwoSeparateGroups) {
  const std::vector<Patch> ps{{0, 0}, {0, 1}, {5, 5}};
  const auto comps = connected_components(PatchSet::from_patches(8, ps));
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 2u);
  EXPECT_TRUE(comps[0].contains({0, 0}) && comps[0].contains({0, 1}));
  EXPECT_EQ(comps[1].size(), 1u);
  EXPECT_TRUE(comps[1].contains({5, 5}));
}

TEST(Components, DiagonalNeighboursAreSeparate) {
  const std::vector<Patch> ps{{0, 0}, {1, 1}};
  EXPECT_EQ(connected_components(PatchSet::from_patches(3, ps)).size(), 2u);
}

TEST(Components, EmptyMaskHasNoComponents) {
  EXPECT_TRUE(connected_components(PatchSet(6)).empty());
}

TEST(Components, FullGridIsOneComponent) {
  const auto comps = connected_components(PatchSet::full(9));
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].size(), 81u);
}

TEST(Components, RandomMasksMatchFloodFill) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const PatchSet mask = pt::random_mask(16, rng.uniform01(), rng);
    const auto comps = connected_components(mask);
    const auto expected = pt::flood_fill_components(pt::to_cells(mask));
    ASSERT_EQ(comps.size(), expected.size());
    PatchSet united(16);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      EXPECT_EQ(pt::to_cells(comps[i]), expected[i]);
      EXPECT_FALSE(united.intersects(comps[i]));
      united |= comps[i];
    }
    EXPECT_EQ(united, mask);
  }
}

TEST(BBoxOf, SinglePatch) {
  const std::vector<Patch> ps{{2, 3}};
  EXPECT_EQ(bbox_of(PatchSet::from_patches(8, ps)), (BBox{3, 2, 3, 2}));
}

TEST(BBoxOf, TwoCorners) {
  const std::vector<Patch> ps{{1, 1}, {4, 7}};
  EXPECT_EQ(bbox_of(PatchSet::from_patches(8, ps)), (BBox{1, 1, 7, 4}));
}

TEST(BBoxOf, EmptyThrows) { EXPECT_THROW(bbox_of(PatchSet(4)), InvalidArgument); }

TEST(BBoxOf, TightOnRandomMasks) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const PatchSet mask = pt::random_mask(12, 0.05 + 0.3 * rng.uniform01(), rng);
    if (mask.empty()) continue;
    int x0 = 99, y0 = 99, x1 = -1, y1 = -1;
    for (const auto& [r, c] : pt::to_cells(mask)) {
      x0 = std::min(x0, c);
      x1 = std::max(x1, c);
      y0 = std::min(y0, r);
      y1 = std::max(y1, r);
    }
    const BBox box = bbox_of(mask);
    EXPECT_EQ(box, (BBox{x0, y0, x1, y1}));
    EXPECT_TRUE(mask.subset_of(PatchSet::from_bbox(box, 12)));
  }
}
