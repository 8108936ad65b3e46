#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "patchsearch/enrollment.hpp"
#include "patchsearch/feature_map.hpp"
#include "patchsearch/kmeans.hpp"

namespace patchsearch {

struct SearchConfig {
  int k_q = 30;
  double alpha_co = 200.0;
  bool refine = false;
  std::uint64_t seed = 0;
  /// Open-set cutoff on the class score. Unset means every class is reported.
  std::optional<double> class_threshold;
  /// Classes searched concurrently after the shared prepass. Results do not depend on it.
  int workers = 1;
};

struct Candidate {
  PatchSet mask;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct SearchResult {
  int class_index = 0;
  double score = 0.0;
  PatchSet raw_mask;
  std::optional<PatchSet> refined_mask;
  std::optional<BBox> bbox;
  std::optional<bool> accepted;
  std::vector<Candidate> candidates;

  /// The located region: refined mask when available, raw best candidate otherwise.
  const PatchSet& mask() const noexcept { return refined_mask ? *refined_mask : raw_mask; }
  /// False only when a class threshold was configured and the score fell at or below it.
  bool located() const noexcept { return accepted.value_or(true); }

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

/// Class-agnostic clustering of the query map on coordinate-augmented features.
Clustering query_prepass(const FeatureMap& fmap, const SearchConfig& config);

/// Patches whose similarity to the prototype reaches the class threshold.
/// Falls back to the single most similar patch (row-major first on ties).
PatchSet match_patches(const FeatureMap& fmap, const ClassModel& model);

/// Splits `raw` into 4-connected components and scores each by the similarity
/// of its mean feature to the prototype.
std::vector<Candidate> score_candidates(const FeatureMap& fmap, const ClassModel& model, const PatchSet& raw);

/// Highest-scoring candidate; the earliest one wins ties.
const Candidate& select_best(std::span<const Candidate> candidates);

/// Union of every prepass cluster that intersects `raw_best`.
PatchSet refine_mask(const PatchSet& raw_best, const Clustering& prepass);

SearchResult search_class(const FeatureMap& fmap, const ClassModel& model, const SearchConfig& config,
                          const Clustering* prepass);

/// Full per-query pipeline; one result per model, in model order. The prepass
/// runs once and is shared by every class.
std::vector<SearchResult> search_query(const FeatureMap& fmap, std::span<const ClassModel> models,
                                       const SearchConfig& config);

}  // namespace patchsearch
