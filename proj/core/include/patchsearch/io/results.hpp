#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patchsearch/evaluation.hpp"
#include "patchsearch/io/manifest.hpp"
#include "patchsearch/search.hpp"

namespace patchsearch::io {

inline constexpr int kResultsVersion = 1;
inline constexpr std::string_view kResultsSchema = "patchsearch.results";

struct QueryResults {
  std::string query_id;
  std::vector<SearchResult> results;
};

/// Line-delimited JSON: a header line, then one line per query holding exactly
/// one entry per enrolled class. Rejected classes carry `"location": null`.
struct ResultsDocument {
  int version = kResultsVersion;
  int manifest_version = 0;
  int n_patches = 0;
  std::vector<ClassEntry> classes;
  SearchConfig config;
  std::vector<QueryResults> queries;

  ResultsByQuery by_query() const;
};

std::string serialize_results(const ResultsDocument& doc);
ResultsDocument parse_results(std::string_view text);
void save_results(const std::filesystem::path& path, const ResultsDocument& doc);
ResultsDocument load_results(const std::filesystem::path& path);

inline constexpr int kReportVersion = 1;
inline constexpr std::string_view kReportSchema = "patchsearch.report";

/// Line-delimited JSON metrics report: header, metrics, one line per class, one per timed stage.
std::string serialize_report(const MetricsReport& report, std::string_view mode,
                             const std::vector<ClassEntry>& classes);
void save_report(const std::filesystem::path& path, const MetricsReport& report, std::string_view mode,
                 const std::vector<ClassEntry>& classes);

}  // namespace patchsearch::io
