#include "patchsearch/io/workbench.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "patchsearch/components.hpp"
#include "patchsearch/errors.hpp"
#include "patchsearch/io/feature_file.hpp"
#include "patchsearch/parallel.hpp"

namespace patchsearch::io {

int workers_from_env(int fallback) {
  const char* raw = std::getenv("PATCHSEARCH_WORKERS");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw ValidationError(std::string("PATCHSEARCH_WORKERS must be an integer in [1, 1024], got '") + raw + "'");
  }
  return static_cast<int>(v);
}

EnrolledStore enroll_manifest(const DatasetManifest& manifest, int k_s, std::uint64_t seed, int workers) {
  std::vector<const SupportEntry*> supports;
  for (const auto& s : manifest.supports) supports.push_back(&s);
  std::sort(supports.begin(), supports.end(),
            [](const SupportEntry* a, const SupportEntry* b) { return a->class_index < b->class_index; });

  EnrolledStore store;
  store.manifest_version = manifest.version;
  store.n_patches = manifest.n_patches;
  store.dim = manifest.dim;
  store.k_s = k_s;
  store.seed = seed;
  store.models.resize(supports.size());

  parallel_for(supports.size(), workers, [&](std::size_t i) {
    const SupportEntry& s = *supports[i];
    const FeatureMap fmap = load_feature_file(manifest.resolve(s.feature_file));
    if (fmap.n_patches() != manifest.n_patches || fmap.dim() != manifest.dim) {
      throw ValidationError(manifest.resolve(s.feature_file).string() + ": shape does not match the manifest");
    }
    SupportPrompt prompt{s.prompt, manifest.label_of(s.class_index), s.class_index};
    store.models[i] = enroll(fmap, prompt, k_s, seed);
  });
  return store;
}

std::vector<QueryFile> manifest_queries(const DatasetManifest& manifest) {
  std::vector<QueryFile> out;
  for (const auto& q : manifest.queries) out.push_back({q.query_id, manifest.resolve(q.feature_file)});
  return out;
}

ResultsDocument search_files(const EnrolledStore& store, const std::vector<QueryFile>& queries, SearchConfig config,
                             int workers) {
  std::set<std::string> ids;
  for (const auto& q : queries) {
    if (!ids.insert(q.query_id).second) throw ValidationError("duplicate query id '" + q.query_id + "'");
  }

  ResultsDocument doc;
  doc.manifest_version = store.manifest_version;
  doc.n_patches = store.n_patches;
  for (const auto& m : store.models) doc.classes.push_back({m.class_index, m.label});
  config.workers = 1;
  doc.config = config;
  doc.queries.resize(queries.size());

  parallel_for(queries.size(), workers, [&](std::size_t i) {
    const FeatureMap fmap = load_feature_file(queries[i].path);
    if (fmap.n_patches() != store.n_patches || fmap.dim() != store.dim) {
      throw ValidationError(queries[i].path.string() + ": shape does not match the enrolled store");
    }
    doc.queries[i].query_id = queries[i].query_id;
    doc.queries[i].results = search_query(fmap, store.models, config);
  });
  return doc;
}

std::vector<EvalRecord> manifest_records(const DatasetManifest& manifest) {
  std::vector<EvalRecord> records;
  for (const auto& q : manifest.queries) {
    for (const auto& t : q.truths) {
      records.push_back({q.query_id, t.class_index, rasterize(t.gt, manifest.n_patches), std::nullopt});
    }
  }
  return records;
}

MetricsReport evaluate_results(const DatasetManifest& manifest, const ResultsDocument& results, EvalMode mode) {
  if (results.manifest_version != manifest.version) {
    throw ValidationError("results were produced for manifest version " + std::to_string(results.manifest_version) +
                          " but the manifest is version " + std::to_string(manifest.version));
  }
  if (results.n_patches != manifest.n_patches) throw ValidationError("results and manifest disagree on n_patches");

  std::set<std::string> known;
  for (const auto& q : manifest.queries) known.insert(q.query_id);
  for (const auto& q : results.queries) {
    if (!known.count(q.query_id)) throw ValidationError("results contain query '" + q.query_id + "' not in the manifest");
  }
  auto records = manifest_records(manifest);
  if (records.empty()) throw ValidationError("manifest has no ground-truth records to evaluate");
  const auto by_query = results.by_query();
  for (const auto& r : records) {
    if (!by_query.count(r.query_id)) throw ValidationError("no results for query '" + r.query_id + "'");
  }
  return evaluate(std::move(records), by_query, mode);
}

std::vector<StageTiming> bench_pipeline(const DatasetManifest& manifest, const EnrolledStore& store,
                                        const SearchConfig& config, int warmup, int iters) {
  std::vector<FeatureMap> maps;
  for (const auto& q : manifest.queries) maps.push_back(load_feature_file(manifest.resolve(q.feature_file)));
  if (maps.empty()) throw ValidationError("bench: manifest has no queries");
  const auto& models = store.models;

  std::vector<Clustering> prepasses(maps.size());
  std::vector<std::vector<PatchSet>> raw(maps.size(), std::vector<PatchSet>(models.size()));
  std::vector<std::vector<PatchSet>> best(maps.size(), std::vector<PatchSet>(models.size()));
  std::vector<std::vector<BBox>> boxes(maps.size(), std::vector<BBox>(models.size()));

  const std::vector<Stage> stages{
      {"prepass",
       [&] {
         for (std::size_t q = 0; q < maps.size(); ++q) prepasses[q] = query_prepass(maps[q], config);
       }},
      {"match",
       [&] {
         for (std::size_t q = 0; q < maps.size(); ++q) {
           for (std::size_t c = 0; c < models.size(); ++c) raw[q][c] = match_patches(maps[q], models[c]);
         }
       }},
      {"score",
       [&] {
         for (std::size_t q = 0; q < maps.size(); ++q) {
           for (std::size_t c = 0; c < models.size(); ++c) {
             const auto candidates = score_candidates(maps[q], models[c], raw[q][c]);
             best[q][c] = select_best(candidates).mask;
           }
         }
       }},
      {"refine",
       [&] {
         for (std::size_t q = 0; q < maps.size(); ++q) {
           for (std::size_t c = 0; c < models.size(); ++c) {
             boxes[q][c] = bbox_of(refine_mask(best[q][c], prepasses[q]));
           }
         }
       }},
  };
  return benchmark(stages, warmup, iters);
}

}  // namespace patchsearch::io
