#include "patchsearch/feature_map.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "patchsearch/errors.hpp"

namespace patchsearch {

PatchSet::PatchSet(int n_patches) : n_(n_patches) {
  if (n_patches < 1) throw InvalidArgument("PatchSet: n_patches must be >= 1");
  words_.assign((capacity() + 63) / 64, 0);
}

PatchSet PatchSet::full(int n_patches) {
  PatchSet s(n_patches);
  for (std::size_t i = 0; i < s.capacity(); ++i) s.set(i);
  return s;
}

PatchSet PatchSet::from_bbox(const BBox& box, int n_patches) {
  if (!box.within(n_patches)) throw InvalidArgument("bbox outside the patch grid");
  PatchSet s(n_patches);
  for (int r = box.y_min; r <= box.y_max; ++r) {
    for (int c = box.x_min; c <= box.x_max; ++c) s.insert({r, c});
  }
  return s;
}

PatchSet PatchSet::from_patches(int n_patches, std::span<const Patch> patches) {
  PatchSet s(n_patches);
  for (Patch p : patches) s.insert(p);
  return s;
}

void PatchSet::check_bounds(Patch p) const {
  if (p.row < 0 || p.col < 0 || p.row >= n_ || p.col >= n_) {
    throw InvalidArgument("patch (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                          ") outside " + std::to_string(n_) + "x" + std::to_string(n_) + " grid");
  }
}

bool PatchSet::contains(Patch p) const {
  check_bounds(p);
  return test(static_cast<std::size_t>(p.row) * n_ + p.col);
}

void PatchSet::insert(Patch p) {
  check_bounds(p);
  set(static_cast<std::size_t>(p.row) * n_ + p.col);
}

void PatchSet::erase(Patch p) {
  check_bounds(p);
  reset(static_cast<std::size_t>(p.row) * n_ + p.col);
}

std::size_t PatchSet::size() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool PatchSet::empty() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

void PatchSet::require_same_grid(const PatchSet& other) const {
  if (n_ != other.n_) throw InvalidArgument("PatchSet: grid sizes differ");
}

bool PatchSet::intersects(const PatchSet& other) const {
  require_same_grid(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

bool PatchSet::subset_of(const PatchSet& other) const {
  require_same_grid(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

std::vector<std::size_t> PatchSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<Patch> PatchSet::members() const {
  std::vector<Patch> out;
  for (auto idx : indices()) {
    out.push_back({static_cast<int>(idx / n_), static_cast<int>(idx % n_)});
  }
  return out;
}

PatchSet& PatchSet::operator|=(const PatchSet& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

PatchSet& PatchSet::operator&=(const PatchSet& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

PatchSet& PatchSet::operator-=(const PatchSet& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

FeatureMap::FeatureMap(int n_patches, int dim, std::vector<float> data)
    : n_(n_patches), dim_(dim), data_(std::move(data)) {
  if (n_patches < 1 || dim < 1) throw InvalidArgument("FeatureMap: n_patches and dim must be >= 1");
  const auto expected = static_cast<std::size_t>(n_patches) * n_patches * dim;
  if (data_.size() != expected) {
    throw InvalidArgument("FeatureMap: expected " + std::to_string(expected) + " values, got " +
                          std::to_string(data_.size()));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("FeatureMap: non-finite feature value");
  }
}

}  // namespace patchsearch
