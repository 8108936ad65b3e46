#include "patchsearch/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "patchsearch/errors.hpp"
#include "patchsearch/log.hpp"
#include "patchsearch/similarity.hpp"

namespace patchsearch {

double iou(const PatchSet& a, const PatchSet& b) {
  const std::size_t uni = (a | b).size();
  if (uni == 0) return 1.0;
  return static_cast<double>((a & b).size()) / static_cast<double>(uni);
}

double compute_miou(std::span<const EvalRecord> records, EvalMode mode) {
  if (records.empty()) throw InvalidArgument("compute_miou: no records");
  double sum = 0.0;
  for (const EvalRecord& r : records) {
    if (!r.predicted) continue;
    if (mode == EvalMode::Mask) {
      sum += iou(r.predicted->mask(), r.gt_mask);
    } else {
      PatchSet region(r.gt_mask.n_patches());
      if (r.predicted->bbox) region = PatchSet::from_bbox(*r.predicted->bbox, r.gt_mask.n_patches());
      sum += iou(region, r.gt_mask);
    }
  }
  return sum / static_cast<double>(records.size());
}

double localized_score(std::span<const Candidate> candidates, const PatchSet& gt) {
  const Candidate* best = nullptr;
  std::size_t best_overlap = 0;
  for (const Candidate& c : candidates) {
    const std::size_t overlap = (c.mask & gt).size();
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = &c;
    }
  }
  return best ? best->score : 0.0;
}

namespace {

const std::vector<SearchResult>& results_for(const ResultsByQuery& results, const std::string& query_id) {
  auto it = results.find(query_id);
  if (it == results.end()) throw InvalidArgument("no search results for query '" + query_id + "'");
  return it->second;
}

}  // namespace

double compute_acc(std::span<const EvalRecord> records, const ResultsByQuery& results) {
  if (records.empty()) throw InvalidArgument("compute_acc: no records");
  std::size_t correct = 0;
  for (const EvalRecord& r : records) {
    const auto& per_class = results_for(results, r.query_id);
    std::optional<double> truth;
    double best_other = -std::numeric_limits<double>::infinity();
    for (const SearchResult& res : per_class) {
      const double s = localized_score(res.candidates, r.gt_mask);
      if (res.class_index == r.class_index) {
        truth = s;
      } else {
        best_other = std::max(best_other, s);
      }
    }
    if (!truth) {
      throw InvalidArgument("query '" + r.query_id + "' has no result for class " + std::to_string(r.class_index));
    }
    if (*truth > best_other) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

std::optional<double> average_precision(std::span<const ScoredLabel> ranking) {
  std::vector<ScoredLabel> sorted(ranking.begin(), ranking.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });
  const auto positives = static_cast<std::size_t>(
      std::count_if(sorted.begin(), sorted.end(), [](const ScoredLabel& s) { return s.positive; }));
  if (positives == 0) return std::nullopt;

  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      if (sorted[j].positive) ++tp;
      ++j;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(j);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

CprecResult compute_cprec(const std::map<int, std::vector<ScoredLabel>>& by_class) {
  CprecResult out;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [cls, ranking] : by_class) {
    if (ranking.empty()) throw InvalidArgument("compute_cprec: class " + std::to_string(cls) + " has no scores");
    auto ap = average_precision(ranking);
    if (ap) {
      sum += *ap;
      ++counted;
    } else {
      warn("compute_cprec: class " + std::to_string(cls) + " has no positives; excluded from cPREC");
    }
    out.class_indices.push_back(cls);
    out.per_class_ap.push_back(ap);
  }
  if (counted == 0) {
    warn("compute_cprec: no class has positives; cPREC reported as 0");
    return out;
  }
  out.cprec = sum / static_cast<double>(counted);
  return out;
}

std::map<int, std::vector<ScoredLabel>> collect_class_scores(std::span<const EvalRecord> records,
                                                             const ResultsByQuery& results) {
  std::map<std::string, std::vector<const EvalRecord*>> truths;
  for (const EvalRecord& r : records) truths[r.query_id].push_back(&r);

  std::map<int, std::vector<ScoredLabel>> out;
  for (const auto& [query_id, per_class] : results) {
    auto it = truths.find(query_id);
    for (const SearchResult& res : per_class) {
      std::optional<double> positive;
      if (it != truths.end()) {
        for (const EvalRecord* r : it->second) {
          if (r->class_index != res.class_index) continue;
          const double s = localized_score(res.candidates, r->gt_mask);
          positive = positive ? std::max(*positive, s) : s;
        }
      }
      out[res.class_index].push_back(positive ? ScoredLabel{*positive, true} : ScoredLabel{res.score, false});
    }
  }
  return out;
}

MetricsReport evaluate(std::vector<EvalRecord> records, const ResultsByQuery& results, EvalMode mode) {
  for (EvalRecord& r : records) {
    if (r.predicted) continue;
    const auto& per_class = results_for(results, r.query_id);
    auto it = std::find_if(per_class.begin(), per_class.end(),
                           [&](const SearchResult& s) { return s.class_index == r.class_index; });
    if (it != per_class.end()) r.predicted = *it;
  }

  MetricsReport report;
  report.n_records = records.size();
  report.miou = compute_miou(records, mode);
  report.acc = compute_acc(records, results);
  auto cprec = compute_cprec(collect_class_scores(records, results));
  report.cprec = cprec.cprec;
  report.class_indices = std::move(cprec.class_indices);
  report.per_class_ap = std::move(cprec.per_class_ap);
  return report;
}

std::vector<StageTiming> benchmark(std::span<const Stage> stages, int warmup, int iters) {
  if (iters < 1) throw InvalidArgument("benchmark: iters must be >= 1");
  if (warmup < 0) throw InvalidArgument("benchmark: warmup must be >= 0");
  using clock = std::chrono::steady_clock;

  std::vector<StageTiming> out(stages.size());
  for (std::size_t s = 0; s < stages.size(); ++s) out[s].stage = stages[s].name;

  for (int it = 0; it < warmup + iters; ++it) {
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const auto start = clock::now();
      stages[s].run();
      const auto stop = clock::now();
      if (it >= warmup) {
        out[s].samples_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
      }
    }
  }

  for (StageTiming& t : out) {
    t.mean_ms = std::accumulate(t.samples_ms.begin(), t.samples_ms.end(), 0.0) /
                static_cast<double>(t.samples_ms.size());
    t.p50_ms = percentile(t.samples_ms, 50.0);
    t.p95_ms = percentile(t.samples_ms, 95.0);
  }
  return out;
}

}  // namespace patchsearch
