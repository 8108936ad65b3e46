#include "patchsearch/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "patchsearch/errors.hpp"
#include "patchsearch/rng.hpp"

namespace patchsearch {

PointMatrix::PointMatrix(std::size_t rows, std::size_t dim, std::vector<double> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (data_.size() != rows * dim) throw InvalidArgument("PointMatrix: data size does not match shape");
}

PointMatrix PointMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw InvalidArgument("PointMatrix: rows differ in dimension");
    data.insert(data.end(), r.begin(), r.end());
  }
  return PointMatrix(rows.size(), dim, std::move(data));
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t count_distinct_rows(const PointMatrix& points) {
  if (points.rows() == 0) return 0;
  std::vector<std::size_t> order(points.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = points.row(a), rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto prev = points.row(order[i - 1]), cur = points.row(order[i]);
    if (!std::equal(prev.begin(), prev.end(), cur.begin())) ++distinct;
  }
  return distinct;
}

namespace {

PointMatrix seed_plus_plus(const PointMatrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  PointMatrix centroids(k, points.dim());

  std::size_t first = rng.uniform_index(n);
  std::ranges::copy(points.row(first), centroids.row(0).begin());

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points.row(i), centroids.row(0));

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    // k never exceeds the distinct count, so some point is still uncovered.
    const double target = rng.uniform01() * total;
    std::size_t pick = n;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      last_positive = i;
      cumulative += nearest[i];
      if (cumulative > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) pick = last_positive;

    std::ranges::copy(points.row(pick), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

// Returns the total cost; fills assignments and per-point squared distances.
double assign(const PointMatrix& points, const PointMatrix& centroids, std::vector<int>& assignments,
              std::vector<double>& distances) {
  double cost = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    assignments[i] = best;
    distances[i] = best_d;
    cost += best_d;
  }
  return cost;
}

void update_centroids(const PointMatrix& points, const std::vector<int>& assignments, PointMatrix& centroids) {
  const std::size_t k = centroids.rows();
  const std::size_t dim = points.dim();
  PointMatrix sums(k, dim);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto dst = sums.row(static_cast<std::size_t>(assignments[i]));
    auto src = points.row(i);
    for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
    ++counts[static_cast<std::size_t>(assignments[i])];
  }

  std::vector<std::size_t> empty;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      empty.push_back(c);
      continue;
    }
    auto dst = centroids.row(c);
    auto src = sums.row(c);
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t d = 0; d < dim; ++d) dst[d] = src[d] * inv;
  }
  if (empty.empty()) return;

  // Farthest-point re-seeding, measured against the freshly updated centroids.
  std::vector<double> spread(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    spread[i] = squared_distance(points.row(i), centroids.row(static_cast<std::size_t>(assignments[i])));
  }
  for (std::size_t c : empty) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < spread.size(); ++i) {
      if (spread[i] > spread[far]) far = i;
    }
    std::ranges::copy(points.row(far), centroids.row(c).begin());
    spread[far] = -1.0;
  }
}

}  // namespace

Clustering kmeans(const PointMatrix& points, const KMeansConfig& config) {
  if (points.rows() == 0) throw InvalidArgument("kmeans: no points");
  if (points.dim() == 0) throw InvalidArgument("kmeans: zero-dimensional points");
  if (config.k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (config.max_iters < 1) throw InvalidArgument("kmeans: max_iters must be >= 1");
  if (!(config.tol >= 0.0)) throw InvalidArgument("kmeans: tol must be >= 0");

  const std::size_t k = std::min(static_cast<std::size_t>(config.k), count_distinct_rows(points));
  Rng rng(config.seed);

  Clustering result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignments.assign(points.rows(), 0);
  std::vector<double> distances(points.rows());
  result.cost = assign(points, result.centroids, result.assignments, distances);
  result.cost_history.push_back(result.cost);

  std::vector<int> previous;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    previous = result.assignments;
    const double previous_cost = result.cost;
    update_centroids(points, result.assignments, result.centroids);
    result.cost = assign(points, result.centroids, result.assignments, distances);
    result.cost_history.push_back(result.cost);
    if (result.assignments == previous) break;
    if (previous_cost - result.cost < config.tol * previous_cost) break;
  }
  return result;
}

PointMatrix augment_with_coords(const FeatureMap& fmap, double alpha_co) {
  if (!(alpha_co >= 0.0)) throw InvalidArgument("augment_with_coords: alpha_co must be >= 0");
  const int n = fmap.n_patches();
  const auto dim = static_cast<std::size_t>(fmap.dim());
  PointMatrix out(fmap.patch_count(), dim + 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>(i) * n + j;
      auto dst = out.row(idx);
      auto src = fmap.at(idx);
      for (std::size_t d = 0; d < dim; ++d) dst[d] = src[d];
      dst[dim] = alpha_co * i / n;
      dst[dim + 1] = alpha_co * j / n;
    }
  }
  return out;
}

PointMatrix gather_features(const FeatureMap& fmap, const PatchSet& mask) {
  if (mask.n_patches() != fmap.n_patches()) throw InvalidArgument("gather_features: grid size mismatch");
  const auto idx = mask.indices();
  const auto dim = static_cast<std::size_t>(fmap.dim());
  PointMatrix out(idx.size(), dim);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    std::ranges::copy(fmap.at(idx[r]), out.row(r).begin());
  }
  return out;
}

}  // namespace patchsearch
