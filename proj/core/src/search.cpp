#include "patchsearch/search.hpp"

#include <algorithm>
#include <string>

#include "patchsearch/components.hpp"
#include "patchsearch/errors.hpp"
#include "patchsearch/parallel.hpp"
#include "patchsearch/similarity.hpp"

namespace patchsearch {

Clustering query_prepass(const FeatureMap& fmap, const SearchConfig& config) {
  if (config.k_q < 1) throw InvalidArgument("query_prepass: k_q must be >= 1");
  KMeansConfig km;
  km.k = config.k_q;
  km.seed = config.seed;
  return kmeans(augment_with_coords(fmap, config.alpha_co), km);
}

namespace {

void require_dims(const FeatureMap& fmap, const ClassModel& model) {
  if (model.prototype.size() != static_cast<std::size_t>(fmap.dim())) {
    throw InvalidArgument("class " + std::to_string(model.class_index) + ": prototype dimension " +
                          std::to_string(model.prototype.size()) + " does not match feature dimension " +
                          std::to_string(fmap.dim()));
  }
}

}  // namespace

PatchSet match_patches(const FeatureMap& fmap, const ClassModel& model) {
  require_dims(fmap, model);
  const std::span<const double> proto(model.prototype);
  PatchSet raw(fmap.n_patches());
  std::size_t best = 0;
  double best_sim = -2.0;
  for (std::size_t i = 0; i < fmap.patch_count(); ++i) {
    const double s = cosine_similarity(fmap.at(i), proto);
    if (s >= model.threshold) raw.set(i);
    if (s > best_sim) {
      best_sim = s;
      best = i;
    }
  }
  if (raw.empty()) raw.set(best);
  return raw;
}

std::vector<Candidate> score_candidates(const FeatureMap& fmap, const ClassModel& model, const PatchSet& raw) {
  require_dims(fmap, model);
  if (raw.empty()) throw InvalidArgument("score_candidates: empty raw mask");
  std::vector<Candidate> out;
  for (PatchSet& component : connected_components(raw)) {
    const auto mean = build_prototype(fmap, component);
    const double score = cosine_similarity(mean, model.prototype);
    out.push_back({std::move(component), score});
  }
  return out;
}

const Candidate& select_best(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw InvalidArgument("select_best: no candidates");
  const Candidate* best = &candidates.front();
  for (const Candidate& c : candidates) {
    if (c.score > best->score) best = &c;
  }
  return *best;
}

PatchSet refine_mask(const PatchSet& raw_best, const Clustering& prepass) {
  if (prepass.assignments.size() != raw_best.capacity()) {
    throw InvalidArgument("refine_mask: prepass was computed on a different grid");
  }
  std::vector<char> hit(static_cast<std::size_t>(prepass.k()), 0);
  for (auto i : raw_best.indices()) hit[static_cast<std::size_t>(prepass.assignments[i])] = 1;
  PatchSet out(raw_best.n_patches());
  for (std::size_t i = 0; i < prepass.assignments.size(); ++i) {
    if (hit[static_cast<std::size_t>(prepass.assignments[i])]) out.set(i);
  }
  return out;
}

SearchResult search_class(const FeatureMap& fmap, const ClassModel& model, const SearchConfig& config,
                          const Clustering* prepass) {
  SearchResult result;
  result.class_index = model.class_index;
  const PatchSet raw = match_patches(fmap, model);
  result.candidates = score_candidates(fmap, model, raw);
  const Candidate& best = select_best(result.candidates);
  result.raw_mask = best.mask;
  result.score = best.score;
  if (config.refine) {
    if (prepass == nullptr) throw InvalidArgument("search_class: refinement requested without a prepass");
    result.refined_mask = refine_mask(result.raw_mask, *prepass);
  }
  result.bbox = bbox_of(result.mask());
  if (config.class_threshold) result.accepted = result.score > *config.class_threshold;
  return result;
}

std::vector<SearchResult> search_query(const FeatureMap& fmap, std::span<const ClassModel> models,
                                       const SearchConfig& config) {
  std::vector<SearchResult> results(models.size());
  if (models.empty()) return results;

  std::optional<Clustering> prepass;
  if (config.refine) prepass = query_prepass(fmap, config);
  const Clustering* shared = prepass ? &*prepass : nullptr;

  parallel_for(models.size(), config.workers,
               [&](std::size_t c) { results[c] = search_class(fmap, models[c], config, shared); });
  return results;
}

}  // namespace patchsearch
