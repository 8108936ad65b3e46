#include "patchsearch/components.hpp"

#include <algorithm>

#include "patchsearch/errors.hpp"

namespace patchsearch {

std::vector<PatchSet> connected_components(const PatchSet& mask) {
  std::vector<PatchSet> out;
  const int n = mask.n_patches();
  if (n == 0) return out;

  PatchSet seen(n);
  std::vector<std::size_t> stack;
  // Row-major seeding makes each component's first member its lexicographic minimum.
  for (std::size_t seed : mask.indices()) {
    if (seen.test(seed)) continue;
    PatchSet component(n);
    seen.set(seed);
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      component.set(cur);
      const int r = static_cast<int>(cur / n);
      const int c = static_cast<int>(cur % n);
      const Patch neighbours[4] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (Patch q : neighbours) {
        if (q.row < 0 || q.col < 0 || q.row >= n || q.col >= n) continue;
        const auto idx = static_cast<std::size_t>(q.row) * n + q.col;
        if (mask.test(idx) && !seen.test(idx)) {
          seen.set(idx);
          stack.push_back(idx);
        }
      }
    }
    out.push_back(std::move(component));
  }
  return out;
}

BBox bbox_of(const PatchSet& mask) {
  if (mask.n_patches() == 0 || mask.empty()) throw InvalidArgument("bbox_of: empty mask");
  const int n = mask.n_patches();
  BBox box{n, n, -1, -1};
  for (Patch p : mask.members()) {
    box.x_min = std::min(box.x_min, p.col);
    box.x_max = std::max(box.x_max, p.col);
    box.y_min = std::min(box.y_min, p.row);
    box.y_max = std::max(box.y_max, p.row);
  }
  return box;
}

}  // namespace patchsearch
