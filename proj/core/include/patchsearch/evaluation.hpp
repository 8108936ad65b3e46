#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchsearch/feature_map.hpp"
#include "patchsearch/search.hpp"

namespace patchsearch {

enum class EvalMode { Mask, BBox };

/// One (query image, ground-truth object) pair.
struct EvalRecord {
  std::string query_id;
  int class_index = 0;
  PatchSet gt_mask;
  /// Result for `class_index` on this query; empty when the class was not searched.
  std::optional<SearchResult> predicted;
};

using ResultsByQuery = std::map<std::string, std::vector<SearchResult>>;

struct ScoredLabel {
  double score = 0.0;
  bool positive = false;
};

struct CprecResult {
  double cprec = 0.0;
  /// Indexed like the input map's iteration order; empty for classes without positives.
  std::vector<std::optional<double>> per_class_ap;
  std::vector<int> class_indices;
};

struct StageTiming {
  std::string stage;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  std::vector<double> samples_ms;
};

struct MetricsReport {
  double miou = 0.0;
  double acc = 0.0;
  double cprec = 0.0;
  std::vector<int> class_indices;
  std::vector<std::optional<double>> per_class_ap;
  std::size_t n_records = 0;
  std::vector<StageTiming> timing;
};

/// |a ∩ b| / |a ∪ b|; two empty sets count as a perfect match.
double iou(const PatchSet& a, const PatchSet& b);

double compute_miou(std::span<const EvalRecord> records, EvalMode mode);

/// Score of the candidate with the largest overlap with `gt` (first on ties), or 0 if none overlaps.
double localized_score(std::span<const Candidate> candidates, const PatchSet& gt);

/// Fraction of records whose ground-truth class has the strictly largest
/// localized score among all classes searched on that query.
double compute_acc(std::span<const EvalRecord> records, const ResultsByQuery& results);

/// Step-wise average precision over the descending ranking, equal scores
/// grouped into a single rank step. Returns nullopt when there are no positives.
std::optional<double> average_precision(std::span<const ScoredLabel> ranking);

CprecResult compute_cprec(const std::map<int, std::vector<ScoredLabel>>& by_class);

/// Per-class score/label lists over every query in `results`: images holding
/// the class contribute its localized score against the gt mask (max over
/// instances), other images contribute the class score.
std::map<int, std::vector<ScoredLabel>> collect_class_scores(std::span<const EvalRecord> records,
                                                             const ResultsByQuery& results);

/// mIoU, ACC and cPREC in one pass. `records[i].predicted` is filled from `results` when unset.
MetricsReport evaluate(std::vector<EvalRecord> records, const ResultsByQuery& results, EvalMode mode);

struct Stage {
  std::string name;
  std::function<void()> run;
};

/// Runs every stage in order per iteration, timing each with a monotonic clock.
/// The first `warmup` iterations are discarded.
std::vector<StageTiming> benchmark(std::span<const Stage> stages, int warmup, int iters);

}  // namespace patchsearch
