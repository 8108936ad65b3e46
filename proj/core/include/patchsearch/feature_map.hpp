#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace patchsearch {

/// Grid coordinate of one patch. `row` counts from the top, `col` from the left.
struct Patch {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Patch&, const Patch&) = default;
};

/// Inclusive box in patch-grid coordinates. x is the column axis, y the row axis.
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  bool contains(Patch p) const noexcept {
    return p.col >= x_min && p.col <= x_max && p.row >= y_min && p.row <= y_max;
  }
  bool within(int n_patches) const noexcept {
    return x_min >= 0 && y_min >= 0 && x_min <= x_max && y_min <= y_max &&
           x_max < n_patches && y_max < n_patches;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Set of patches on an n x n grid, stored as a row-major bitmask.
///
/// Iteration and `members()` are always row-major, which is the order every
/// tie-break in the pipeline relies on.
class PatchSet {
public:
  PatchSet() = default;
  explicit PatchSet(int n_patches);

  static PatchSet full(int n_patches);
  /// All patches covered by `box`. Throws InvalidArgument if the box leaves the grid.
  static PatchSet from_bbox(const BBox& box, int n_patches);
  static PatchSet from_patches(int n_patches, std::span<const Patch> patches);

  int n_patches() const noexcept { return n_; }
  std::size_t capacity() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  bool test(std::size_t index) const noexcept { return (words_[index >> 6] >> (index & 63)) & 1U; }
  void set(std::size_t index) noexcept { words_[index >> 6] |= std::uint64_t{1} << (index & 63); }
  void reset(std::size_t index) noexcept { words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63)); }

  bool contains(Patch p) const;
  void insert(Patch p);
  void erase(Patch p);

  std::size_t size() const noexcept;
  bool empty() const noexcept;
  bool intersects(const PatchSet& other) const;

  std::vector<Patch> members() const;
  std::vector<std::size_t> indices() const;

  PatchSet& operator|=(const PatchSet& other);
  PatchSet& operator&=(const PatchSet& other);
  PatchSet& operator-=(const PatchSet& other);
  friend PatchSet operator|(PatchSet a, const PatchSet& b) { return a |= b; }
  friend PatchSet operator&(PatchSet a, const PatchSet& b) { return a &= b; }
  friend PatchSet operator-(PatchSet a, const PatchSet& b) { return a -= b; }

  friend bool operator==(const PatchSet&, const PatchSet&) = default;

  /// True when every member of this set is also in `other`.
  bool subset_of(const PatchSet& other) const;

private:
  void require_same_grid(const PatchSet& other) const;
  void check_bounds(Patch p) const;

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// An n_patches x n_patches grid of dim-dimensional patch features, row-major
/// over (row, col, channel). Immutable once constructed; the constructor
/// rejects non-finite values.
class FeatureMap {
public:
  FeatureMap(int n_patches, int dim, std::vector<float> data);

  int n_patches() const noexcept { return n_; }
  int dim() const noexcept { return dim_; }
  std::size_t patch_count() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  std::span<const float> at(int row, int col) const noexcept {
    return at(static_cast<std::size_t>(row) * n_ + col);
  }
  std::span<const float> at(std::size_t index) const noexcept {
    return {data_.data() + index * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const float> data() const noexcept { return data_; }

private:
  int n_;
  int dim_;
  std::vector<float> data_;
};

}  // namespace patchsearch
