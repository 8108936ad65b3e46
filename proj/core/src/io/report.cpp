#include <map>
#include <sstream>

#include "json_util.hpp"
#include "patchsearch/io/atomic_write.hpp"
#include "patchsearch/io/results.hpp"

namespace patchsearch::io {

using detail::Json;

std::string serialize_report(const MetricsReport& report, std::string_view mode,
                             const std::vector<ClassEntry>& classes) {
  std::map<int, std::string> labels;
  for (const auto& c : classes) labels[c.class_index] = c.label;

  std::ostringstream out;
  out << Json{{"schema", kReportSchema}, {"version", kReportVersion}, {"mode", mode}}.dump() << '\n';
  out << Json{{"metrics",
               {{"miou", report.miou}, {"acc", report.acc}, {"cprec", report.cprec}, {"n_records", report.n_records}}}}
             .dump()
      << '\n';
  for (std::size_t i = 0; i < report.class_indices.size(); ++i) {
    const int c = report.class_indices[i];
    Json line{{"class_index", c}, {"label", labels[c]}};
    line["ap"] = report.per_class_ap[i] ? Json(*report.per_class_ap[i]) : Json(nullptr);
    out << line.dump() << '\n';
  }
  for (const auto& t : report.timing) {
    out << Json{{"stage", t.stage}, {"mean_ms", t.mean_ms}, {"p50_ms", t.p50_ms}, {"p95_ms", t.p95_ms}}.dump() << '\n';
  }
  return out.str();
}

void save_report(const std::filesystem::path& path, const MetricsReport& report, std::string_view mode,
                 const std::vector<ClassEntry>& classes) {
  write_file_atomic(path, serialize_report(report, mode, classes));
}

}  // namespace patchsearch::io
