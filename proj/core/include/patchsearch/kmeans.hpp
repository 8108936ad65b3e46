#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch {

/// Dense row-major matrix of points, one point per row.
class PointMatrix {
public:
  PointMatrix() = default;
  PointMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}
  PointMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

  /// Throws InvalidArgument if the rows do not all share one dimension.
  static PointMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }

  friend bool operator==(const PointMatrix&, const PointMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct KMeansConfig {
  int k = 1;
  int max_iters = 100;
  std::uint64_t seed = 0;
  /// Stop once (previous_cost - cost) < tol * previous_cost.
  double tol = 1e-4;
};

struct Clustering {
  std::vector<int> assignments;
  PointMatrix centroids;
  /// Sum of squared Euclidean distances from each point to its assigned centroid.
  double cost = 0.0;
  /// Cost after the seeding assignment, then after every Lloyd iteration.
  std::vector<double> cost_history;

  int k() const noexcept { return static_cast<int>(centroids.rows()); }

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

std::size_t count_distinct_rows(const PointMatrix& points);

/// k-means++ seeding followed by Lloyd iterations.
///
/// k is clamped to the number of distinct points. Seeding draws from a
/// patchsearch::Rng seeded with `config.seed`: the first centre uniformly,
/// each further centre with probability proportional to the squared distance
/// to the nearest chosen centre. Lloyd stops at an assignment fixpoint, when
/// the relative cost improvement drops below `tol`, or after `max_iters`.
/// A cluster that empties is re-seeded at the point farthest from its
/// assigned centroid. Assignment ties go to the lowest centroid index.
///
/// Throws InvalidArgument for empty input, k < 1, max_iters < 1 or tol < 0.
Clustering kmeans(const PointMatrix& points, const KMeansConfig& config);

/// Per-patch features with (alpha_co * row / n, alpha_co * col / n) appended.
/// Row i * n + j of the result is patch (i, j).
PointMatrix augment_with_coords(const FeatureMap& fmap, double alpha_co);

/// Features of the patches in `mask`, row-major, widened to double.
PointMatrix gather_features(const FeatureMap& fmap, const PatchSet& mask);

}  // namespace patchsearch
