#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "patchsearch/errors.hpp"
#include "patchsearch/kmeans.hpp"

using namespace patchsearch;
namespace pt = patchsearch::testing;

namespace {

double recomputed_cost(const PointMatrix& pts, const Clustering& c) {
  double cost = 0.0;
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    cost += squared_distance(pts.row(i), c.centroids.row(static_cast<std::size_t>(c.assignments[i])));
  }
  return cost;
}

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n, std::size_t dim, double scale = 1.0) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts) {
    for (double& x : p) x = scale * rng.normal();
  }
  return pts;
}

}  // namespace

TEST(KMeans, DistinctPointsWithMatchingKHaveZeroCost) {
  const auto pts = PointMatrix::from_rows({{0, 0}, {5, 0}, {0, 5}});
  const Clustering c = kmeans(pts, {.k = 3});
  EXPECT_EQ(c.k(), 3);
  EXPECT_DOUBLE_EQ(c.cost, 0.0);
  std::vector<int> sorted = c.assignments;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2}));
}

TEST(KMeans, KIsClampedToDistinctPoints) {
  const auto pts = PointMatrix::from_rows(std::vector<std::vector<double>>(100, {1.5, -2.0, 3.0}));
  const Clustering c = kmeans(pts, {.k = 5});
  EXPECT_EQ(c.k(), 1);
  EXPECT_DOUBLE_EQ(c.cost, 0.0);
  for (int a : c.assignments) EXPECT_EQ(a, 0);
}

TEST(KMeans, CountDistinctRows) {
  const auto pts = PointMatrix::from_rows({{1, 2}, {1, 2}, {2, 1}, {1, 2}});
  EXPECT_EQ(count_distinct_rows(pts), 2u);
}

TEST(KMeans, SingleClusterCentroidIsMean) {
  Rng rng(1);
  const auto rows = random_points(rng, 30, 4);
  const Clustering c = kmeans(PointMatrix::from_rows(rows), {.k = 1});
  for (std::size_t d = 0; d < 4; ++d) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[d];
    EXPECT_NEAR(c.centroids.row(0)[d], mean / 30.0, 1e-12);
  }
}

TEST(KMeans, InvalidArgumentsThrow) {
  const auto pts = PointMatrix::from_rows({{0.0}, {1.0}});
  EXPECT_THROW(kmeans(PointMatrix(), {.k = 1}), InvalidArgument);
  EXPECT_THROW(kmeans(pts, {.k = 0}), InvalidArgument);
  EXPECT_THROW(kmeans(pts, {.k = 1, .max_iters = 0}), InvalidArgument);
  EXPECT_THROW(kmeans(pts, {.k = 1, .tol = -1.0}), InvalidArgument);
  EXPECT_THROW(PointMatrix::from_rows({{0.0, 1.0}, {1.0}}), InvalidArgument);
}

TEST(KMeans, EightSeparatedPointsReachExhaustiveOptimum) {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 8; ++i) rows.push_back({(i < 4 ? 0.0 : 20.0) + rng.normal(), rng.normal()});
    const double best = pt::best_two_partition_cost(rows);
    const Clustering c = kmeans(PointMatrix::from_rows(rows), {.k = 2, .seed = static_cast<std::uint64_t>(t)});
    EXPECT_NEAR(c.cost, best, 1e-9);
  }
}

TEST(KMeans, EightRandomPointsNeverBeatOptimumAndEndAtFixpoint) {
  Rng rng(78);
  for (int t = 0; t < 40; ++t) {
    const auto rows = random_points(rng, 8, 2);
    const auto pts = PointMatrix::from_rows(rows);
    const Clustering c = kmeans(pts, {.k = 2, .seed = static_cast<std::uint64_t>(t), .tol = 0.0});
    EXPECT_GE(c.cost, pt::best_two_partition_cost(rows) - 1e-9);
    for (std::size_t i = 0; i < 8; ++i) {
      const auto own = static_cast<std::size_t>(c.assignments[i]);
      EXPECT_LE(squared_distance(pts.row(i), c.centroids.row(own)),
                squared_distance(pts.row(i), c.centroids.row(1 - own)));
    }
  }
}

TEST(KMeans, CostHistoryIsMonotoneAndCostIsConsistent) {
  Rng rng(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 5 + rng.uniform_index(60);
    const auto rows = random_points(rng, n, 3);
    const auto pts = PointMatrix::from_rows(rows);
    const int k = 1 + static_cast<int>(rng.uniform_index(8));
    const Clustering c = kmeans(pts, {.k = k, .seed = static_cast<std::uint64_t>(t), .tol = 0.0});
    ASSERT_FALSE(c.cost_history.empty());
    for (std::size_t i = 1; i < c.cost_history.size(); ++i) {
      EXPECT_LE(c.cost_history[i], c.cost_history[i - 1] + 1e-9);
    }
    EXPECT_NEAR(c.cost, recomputed_cost(pts, c), 1e-9 * (1.0 + c.cost));
    EXPECT_EQ(c.k(), std::min<int>(k, static_cast<int>(n)));
    for (int a : c.assignments) {
      EXPECT_GE(a, 0);
      EXPECT_LT(a, c.k());
    }
  }
}

TEST(KMeans, AssignmentsAreNearestCentroid) {
  Rng rng(21);
  const auto pts = PointMatrix::from_rows(random_points(rng, 80, 2));
  const Clustering c = kmeans(pts, {.k = 6, .seed = 3, .tol = 0.0});
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    const double own = squared_distance(pts.row(i), c.centroids.row(static_cast<std::size_t>(c.assignments[i])));
    for (int j = 0; j < c.k(); ++j) {
      EXPECT_LE(own, squared_distance(pts.row(i), c.centroids.row(static_cast<std::size_t>(j))) + 1e-9);
    }
  }
}

TEST(KMeans, DeterministicForFixedSeed) {
  Rng rng(4);
  const auto pts = PointMatrix::from_rows(random_points(rng, 200, 5));
  const Clustering a = kmeans(pts, {.k = 7, .seed = 123});
  const Clustering b = kmeans(pts, {.k = 7, .seed = 123});
  EXPECT_EQ(a, b);
}

TEST(KMeans, CostInvariantUnderPermutationForSeparatedBlobs) {
  Rng rng(6);
  std::vector<std::vector<double>> rows;
  const double centres[3][2] = {{0, 0}, {100, 0}, {0, 100}};
  for (const auto& ctr : centres) {
    for (int i = 0; i < 10; ++i) rows.push_back({ctr[0] + rng.normal(), ctr[1] + rng.normal()});
  }
  const double base = kmeans(PointMatrix::from_rows(rows), {.k = 3, .seed = 1}).cost;
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<double>> shuffled = rows;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);
    const double cost = kmeans(PointMatrix::from_rows(shuffled), {.k = 3, .seed = static_cast<std::uint64_t>(t)}).cost;
    EXPECT_NEAR(cost, base, 1e-6);
  }
}

TEST(Augment, ZeroWeightAppendsZeros) {
  const FeatureMap m = pt::make_map(4, 2, [](int r, int c) { return std::vector<float>{float(r), float(c)}; });
  const PointMatrix p = augment_with_coords(m, 0.0);
  ASSERT_EQ(p.dim(), 4u);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    EXPECT_EQ(p.row(i)[2], 0.0);
    EXPECT_EQ(p.row(i)[3], 0.0);
  }
}

TEST(Augment, CoordinateColumns) {
  const FeatureMap m = pt::make_map(32, 3, [](int, int) { return std::vector<float>{1, 2, 3}; });
  const PointMatrix p = augment_with_coords(m, 200.0);
  const auto row = p.row(16 * 32 + 8);
  EXPECT_DOUBLE_EQ(row[3], 100.0);
  EXPECT_DOUBLE_EQ(row[4], 50.0);
  EXPECT_DOUBLE_EQ(row[0], 1.0);
  EXPECT_THROW(augment_with_coords(m, -1.0), InvalidArgument);
}

TEST(Gather, RowMajorSubset) {
  const FeatureMap m = pt::make_map(3, 1, [](int r, int c) { return std::vector<float>{float(r * 3 + c)}; });
  const std::vector<Patch> ps{{2, 2}, {0, 1}};
  const PointMatrix g = gather_features(m, PatchSet::from_patches(3, ps));
  ASSERT_EQ(g.rows(), 2u);
  EXPECT_EQ(g.row(0)[0], 1.0);
  EXPECT_EQ(g.row(1)[0], 8.0);
}
