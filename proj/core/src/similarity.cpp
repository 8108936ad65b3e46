#include "patchsearch/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace patchsearch {

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  p = std::clamp(p, 0.0, 100.0);
  const double pos = p * static_cast<double>(sorted.size() - 1) / 100.0;
  auto idx = static_cast<std::size_t>(std::floor(pos));
  return sorted[std::min(idx, sorted.size() - 1)];
}

}  // namespace patchsearch
