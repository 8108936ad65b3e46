#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace patchsearch {

/// Seedable generator with a platform-independent stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std distributions are implementation-defined, so the
/// transforms below are spelled out:
///   uniform01()      = (next() >> 11) * 2^-53, in [0, 1)
///   uniform_index(n) = floor(uniform01() * n)
///   normal()         = Box-Muller cosine branch over two uniform01() draws
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::size_t uniform_index(std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
  }

  /// Integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
  }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace patchsearch
