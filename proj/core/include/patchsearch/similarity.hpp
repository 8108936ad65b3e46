#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "patchsearch/errors.hpp"

namespace patchsearch {

/// u.v / (|u| |v|), accumulated in double. Throws DegenerateInput on a zero
/// norm and InvalidArgument on a length mismatch.
template <class T, class U>
double cosine_similarity(std::span<const T> u, std::span<const U> v) {
  if (u.size() != v.size() || u.empty()) {
    throw InvalidArgument("cosine_similarity: vectors must have equal non-zero length");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = static_cast<double>(u[i]);
    const double b = static_cast<double>(v[i]);
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) {
    throw DegenerateInput("cosine_similarity: zero-norm vector");
  }
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

inline double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
  return cosine_similarity(std::span<const double>(u), std::span<const double>(v));
}

/// Lower nearest-rank percentile: the element at index floor(p/100 * (n-1)) of
/// the ascending sort. p is clamped to [0, 100]; empty input throws.
double percentile(std::span<const double> values, double p);

}  // namespace patchsearch
