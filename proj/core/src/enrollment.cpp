#include "patchsearch/enrollment.hpp"

#include <algorithm>
#include <string>

#include "patchsearch/errors.hpp"
#include "patchsearch/kmeans.hpp"
#include "patchsearch/log.hpp"
#include "patchsearch/similarity.hpp"

namespace patchsearch {

BoxPatches bbox_patches(const BBox& box, int n_patches) {
  BoxPatches out{PatchSet::from_bbox(box, n_patches), PatchSet(n_patches)};
  const BBox ring{std::max(box.x_min - 1, 0), std::max(box.y_min - 1, 0),
                  std::min(box.x_max + 1, n_patches - 1), std::min(box.y_max + 1, n_patches - 1)};
  out.border = PatchSet::from_bbox(ring, n_patches) - out.inside;
  return out;
}

PatchSet seg_from_bbox(const FeatureMap& fmap, const BBox& box, int k_s, std::uint64_t seed) {
  if (k_s < 2) throw InvalidArgument("seg_from_bbox: k_s must be >= 2");
  const int n = fmap.n_patches();
  const auto [inside, border] = bbox_patches(box, n);
  const PatchSet region = inside | border;
  const auto region_idx = region.indices();

  KMeansConfig config;
  config.k = k_s;
  config.seed = seed;
  const Clustering clusters = kmeans(gather_features(fmap, region), config);

  std::vector<char> touches_border(static_cast<std::size_t>(clusters.k()), 0);
  for (std::size_t r = 0; r < region_idx.size(); ++r) {
    if (border.test(region_idx[r])) touches_border[static_cast<std::size_t>(clusters.assignments[r])] = 1;
  }

  PatchSet seg(n);
  for (std::size_t r = 0; r < region_idx.size(); ++r) {
    if (!touches_border[static_cast<std::size_t>(clusters.assignments[r])]) seg.set(region_idx[r]);
  }
  seg &= inside;

  if (seg.empty()) {
    warn("seg_from_bbox: every cluster reaches the box border; using the whole box");
    return inside;
  }
  return seg;
}

std::vector<double> build_prototype(const FeatureMap& fmap, const PatchSet& seg) {
  if (seg.n_patches() != fmap.n_patches()) throw InvalidArgument("build_prototype: grid size mismatch");
  if (seg.empty()) throw InvalidArgument("build_prototype: empty segmentation");
  std::vector<double> sum(static_cast<std::size_t>(fmap.dim()), 0.0);
  const auto idx = seg.indices();
  for (auto i : idx) {
    auto f = fmap.at(i);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += f[d];
  }
  for (double& v : sum) v /= static_cast<double>(idx.size());
  return sum;
}

ThresholdParts threshold_from_similarities(std::span<const double> positive_sims,
                                           std::span<const double> negative_sims) {
  ThresholdParts parts;
  parts.positive = percentile(positive_sims, 5.0);
  parts.threshold = parts.positive;
  if (!negative_sims.empty()) {
    parts.negative = percentile(negative_sims, 95.0);
    parts.threshold = std::max(parts.positive, *parts.negative);
  }
  return parts;
}

ThresholdParts adaptive_threshold_parts(const FeatureMap& fmap, const PatchSet& seg,
                                        std::span<const double> prototype) {
  if (seg.n_patches() != fmap.n_patches()) throw InvalidArgument("adaptive_threshold: grid size mismatch");
  if (seg.empty()) throw InvalidArgument("adaptive_threshold: empty segmentation");
  std::vector<double> positive, negative;
  for (std::size_t i = 0; i < fmap.patch_count(); ++i) {
    const double s = cosine_similarity(fmap.at(i), prototype);
    (seg.test(i) ? positive : negative).push_back(s);
  }
  return threshold_from_similarities(positive, negative);
}

double adaptive_threshold(const FeatureMap& fmap, const PatchSet& seg, std::span<const double> prototype) {
  return adaptive_threshold_parts(fmap, seg, prototype).threshold;
}

ClassModel enroll(const FeatureMap& fmap, const SupportPrompt& prompt, int k_s, std::uint64_t seed) {
  PatchSet seg;
  if (const auto* box = std::get_if<BBox>(&prompt.location)) {
    if (!box->within(fmap.n_patches())) throw InvalidArgument("enroll: support bbox outside the grid");
    seg = seg_from_bbox(fmap, *box, k_s, seed);
  } else {
    seg = std::get<PatchSet>(prompt.location);
    if (seg.n_patches() != fmap.n_patches()) throw InvalidArgument("enroll: mask grid size mismatch");
    if (seg.empty()) throw InvalidArgument("enroll: empty support mask");
  }

  ClassModel model;
  model.class_index = prompt.class_index;
  model.label = prompt.label;
  model.prototype = build_prototype(fmap, seg);
  model.threshold = adaptive_threshold(fmap, seg, model.prototype);
  model.support_seg = std::move(seg);
  return model;
}

}  // namespace patchsearch
