#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "patchsearch/evaluation.hpp"
#include "patchsearch/io/manifest.hpp"
#include "patchsearch/io/results.hpp"
#include "patchsearch/io/store.hpp"
#include "patchsearch/search.hpp"

namespace patchsearch::io {

/// Worker count from PATCHSEARCH_WORKERS, or `fallback` when unset. Throws ValidationError on junk.
int workers_from_env(int fallback = 1);

/// Enrolls one model per manifest support, in class-index order.
EnrolledStore enroll_manifest(const DatasetManifest& manifest, int k_s, std::uint64_t seed, int workers);

struct QueryFile {
  std::string query_id;
  std::filesystem::path path;
};

std::vector<QueryFile> manifest_queries(const DatasetManifest& manifest);

/// Searches every file against every model in `store`. Output order follows
/// `queries` regardless of the worker count. `config.workers` is ignored;
/// parallelism is across queries.
ResultsDocument search_files(const EnrolledStore& store, const std::vector<QueryFile>& queries,
                             SearchConfig config, int workers);

/// One record per (query, truth) pair of the manifest, gt rasterized to the patch grid.
std::vector<EvalRecord> manifest_records(const DatasetManifest& manifest);

/// Cross-checks versions and grids, then computes the metric suite.
MetricsReport evaluate_results(const DatasetManifest& manifest, const ResultsDocument& results, EvalMode mode);

/// Times the engine stages (prepass, match, score, refine) over every manifest query.
std::vector<StageTiming> bench_pipeline(const DatasetManifest& manifest, const EnrolledStore& store,
                                        const SearchConfig& config, int warmup, int iters);

}  // namespace patchsearch::io
