#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch {

inline constexpr int kDefaultSupportClusters = 5;

/// Location prompt for one support image: a box or a patch mask.
struct SupportPrompt {
  std::variant<BBox, PatchSet> location;
  std::string label;
  int class_index = 0;

  bool is_bbox() const noexcept { return std::holds_alternative<BBox>(location); }
};

/// One enrolled personal class.
struct ClassModel {
  int class_index = 0;
  std::string label;
  std::vector<double> prototype;
  /// Similarity cutoff; a query patch matches when sim(patch, prototype) >= threshold.
  double threshold = 0.0;
  PatchSet support_seg;

  friend bool operator==(const ClassModel&, const ClassModel&) = default;
};

struct BoxPatches {
  PatchSet inside;
  PatchSet border;
};

/// Patches covered by `box` and the ring of patches 8-adjacent to it, clipped to the grid.
BoxPatches bbox_patches(const BBox& box, int n_patches);

/// Approximate object mask inside a support box.
///
/// Features of the box and its border ring are clustered into `k_s` groups
/// (plain features, no coordinates); clusters that reach the border are
/// discarded and the rest, restricted to the box, form the mask. When every
/// cluster touches the border the whole box is returned and a warning is logged.
PatchSet seg_from_bbox(const FeatureMap& fmap, const BBox& box, int k_s, std::uint64_t seed);

/// Element-wise mean of the features in `seg`.
std::vector<double> build_prototype(const FeatureMap& fmap, const PatchSet& seg);

/// Positive and negative similarity cutoffs of a support image.
struct ThresholdParts {
  double positive = 0.0;          ///< 5th percentile of in-segment similarities.
  std::optional<double> negative; ///< 95th percentile of out-of-segment similarities.
  double threshold = 0.0;         ///< max(positive, negative).
};

ThresholdParts threshold_from_similarities(std::span<const double> positive_sims,
                                           std::span<const double> negative_sims);

ThresholdParts adaptive_threshold_parts(const FeatureMap& fmap, const PatchSet& seg,
                                        std::span<const double> prototype);

double adaptive_threshold(const FeatureMap& fmap, const PatchSet& seg, std::span<const double> prototype);

ClassModel enroll(const FeatureMap& fmap, const SupportPrompt& prompt, int k_s = kDefaultSupportClusters,
                  std::uint64_t seed = 0);

}  // namespace patchsearch
