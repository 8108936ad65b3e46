#pragma once

#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch {

/// Maximal 4-connected components of `mask`, ordered by their row-major first member.
std::vector<PatchSet> connected_components(const PatchSet& mask);

/// Tightest box around a non-empty mask.
BBox bbox_of(const PatchSet& mask);

}  // namespace patchsearch
