#include "patchsearch/io/results.hpp"

#include <map>
#include <sstream>

#include "json_util.hpp"
#include "patchsearch/io/atomic_write.hpp"

namespace patchsearch::io {

using detail::Json;

ResultsByQuery ResultsDocument::by_query() const {
  ResultsByQuery out;
  for (const auto& q : queries) out[q.query_id] = q.results;
  return out;
}

namespace {

Json config_to_json(const SearchConfig& c) {
  Json j{{"k_q", c.k_q}, {"alpha_co", c.alpha_co}, {"refine", c.refine}, {"seed", c.seed}};
  j["class_threshold"] = c.class_threshold ? Json(*c.class_threshold) : Json(nullptr);
  return j;
}

SearchConfig config_from_json(const Json& j) {
  SearchConfig c;
  c.k_q = detail::get<int>(j, "k_q", "results config");
  c.alpha_co = detail::get<double>(j, "alpha_co", "results config");
  c.refine = detail::get<bool>(j, "refine", "results config");
  c.seed = detail::get<std::uint64_t>(j, "seed", "results config");
  const Json& t = detail::field(j, "class_threshold", "results config");
  if (!t.is_null()) c.class_threshold = t.get<double>();
  return c;
}

Json result_to_json(const SearchResult& r, const std::string& label) {
  Json j;
  j["class_index"] = r.class_index;
  j["label"] = label;
  j["score"] = r.score;
  if (r.accepted) j["accepted"] = *r.accepted;
  if (r.located()) {
    Json loc{{"mask", encode_mask(r.mask())}};
    loc["bbox"] = r.bbox ? detail::bbox_to_json(*r.bbox) : Json(nullptr);
    j["location"] = loc;
  } else {
    j["location"] = nullptr;
  }
  j["raw_mask"] = encode_mask(r.raw_mask);
  j["refined_mask"] = r.refined_mask ? Json(encode_mask(*r.refined_mask)) : Json(nullptr);
  j["bbox"] = r.bbox ? detail::bbox_to_json(*r.bbox) : Json(nullptr);
  Json candidates = Json::array();
  for (const Candidate& c : r.candidates) candidates.push_back({{"mask", encode_mask(c.mask)}, {"score", c.score}});
  j["candidates"] = candidates;
  return j;
}

SearchResult result_from_json(const Json& j, int n_patches, const std::string& where) {
  SearchResult r;
  r.class_index = detail::get<int>(j, "class_index", where);
  r.score = detail::get<double>(j, "score", where);
  if (j.contains("accepted")) r.accepted = detail::get<bool>(j, "accepted", where);
  r.raw_mask = decode_mask(detail::get<std::string>(j, "raw_mask", where), n_patches);
  const Json& refined = detail::field(j, "refined_mask", where);
  if (!refined.is_null()) r.refined_mask = decode_mask(refined.get<std::string>(), n_patches);
  const Json& bbox = detail::field(j, "bbox", where);
  if (!bbox.is_null()) r.bbox = detail::bbox_from_json(bbox, where);
  for (const Json& c : detail::field(j, "candidates", where)) {
    r.candidates.push_back({decode_mask(detail::get<std::string>(c, "mask", where), n_patches),
                            detail::get<double>(c, "score", where)});
  }
  return r;
}

}  // namespace

std::string serialize_results(const ResultsDocument& doc) {
  std::map<int, std::string> labels;
  Json classes = Json::array();
  for (const auto& c : doc.classes) {
    labels[c.class_index] = c.label;
    classes.push_back({{"class_index", c.class_index}, {"label", c.label}});
  }

  std::ostringstream out;
  Json header{{"schema", kResultsSchema},
              {"version", doc.version},
              {"manifest_version", doc.manifest_version},
              {"n_patches", doc.n_patches},
              {"classes", classes},
              {"config", config_to_json(doc.config)}};
  out << header.dump() << '\n';
  for (const auto& q : doc.queries) {
    Json line{{"query_id", q.query_id}};
    Json results = Json::array();
    for (const auto& r : q.results) results.push_back(result_to_json(r, labels[r.class_index]));
    line["results"] = results;
    out << line.dump() << '\n';
  }
  return out.str();
}

ResultsDocument parse_results(std::string_view text) {
  ResultsDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("results: empty document");
  const Json header = detail::parse_json(line, "results header");
  if (detail::get<std::string>(header, "schema", "results header") != kResultsSchema) {
    throw ValidationError("results: not a patchsearch results document");
  }
  doc.version = detail::get<int>(header, "version", "results header");
  if (doc.version != kResultsVersion) {
    throw ValidationError("results version " + std::to_string(doc.version) + " is not supported (expected " +
                          std::to_string(kResultsVersion) + ")");
  }
  doc.manifest_version = detail::get<int>(header, "manifest_version", "results header");
  doc.n_patches = detail::get<int>(header, "n_patches", "results header");
  if (doc.n_patches < 1) throw ValidationError("results: n_patches must be >= 1");
  for (const Json& c : detail::field(header, "classes", "results header")) {
    doc.classes.push_back({detail::get<int>(c, "class_index", "results class"),
                           detail::get<std::string>(c, "label", "results class")});
  }
  doc.config = config_from_json(detail::field(header, "config", "results header"));

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const Json j = detail::parse_json(line, "results line " + std::to_string(line_no));
    QueryResults q;
    q.query_id = detail::get<std::string>(j, "query_id", "results line");
    const std::string where = "results for '" + q.query_id + "'";
    for (const Json& r : detail::field(j, "results", where)) q.results.push_back(result_from_json(r, doc.n_patches, where));
    if (q.results.size() != doc.classes.size()) {
      throw ValidationError(where + ": expected " + std::to_string(doc.classes.size()) + " class entries, got " +
                            std::to_string(q.results.size()));
    }
    doc.queries.push_back(std::move(q));
  }
  return doc;
}

void save_results(const std::filesystem::path& path, const ResultsDocument& doc) {
  write_file_atomic(path, serialize_results(doc));
}

ResultsDocument load_results(const std::filesystem::path& path) { return parse_results(read_text_file(path)); }

}  // namespace patchsearch::io
