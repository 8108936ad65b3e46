#include "patchsearch/io/manifest.hpp"

#include <map>
#include <set>

#include "json_util.hpp"
#include "patchsearch/io/atomic_write.hpp"

namespace patchsearch::io {

using detail::Json;

PatchSet rasterize(const Location& location, int n_patches) {
  if (const auto* b = std::get_if<BBox>(&location)) return PatchSet::from_bbox(*b, n_patches);
  const auto& mask = std::get<PatchSet>(location);
  if (mask.n_patches() != n_patches) throw ValidationError("mask grid size does not match the manifest");
  return mask;
}

const std::string& DatasetManifest::label_of(int class_index) const {
  for (const auto& c : classes) {
    if (c.class_index == class_index) return c.label;
  }
  throw ValidationError("unknown class index " + std::to_string(class_index));
}

void validate(const DatasetManifest& m, bool check_files) {
  if (m.version != kManifestVersion) {
    throw ValidationError("manifest version " + std::to_string(m.version) + " is not supported (expected " +
                          std::to_string(kManifestVersion) + ")");
  }
  if (m.n_patches < 1) throw ValidationError("manifest: n_patches must be >= 1");
  if (m.dim < 1) throw ValidationError("manifest: dim must be >= 1");

  std::set<int> classes;
  for (const auto& c : m.classes) {
    if (c.class_index < 0) throw ValidationError("manifest: negative class_index");
    if (!classes.insert(c.class_index).second) {
      throw ValidationError("manifest: class_index " + std::to_string(c.class_index) + " listed twice");
    }
  }

  auto check_location = [&](const Location& loc, const std::string& where) {
    if (const auto* b = std::get_if<BBox>(&loc)) {
      if (!b->within(m.n_patches)) throw ValidationError(where + ": bbox outside the patch grid");
    } else {
      const auto& mask = std::get<PatchSet>(loc);
      if (mask.n_patches() != m.n_patches) throw ValidationError(where + ": mask grid size mismatch");
      if (mask.empty()) throw ValidationError(where + ": empty mask");
    }
  };
  auto check_file = [&](const std::filesystem::path& p, const std::string& where) {
    if (check_files && !std::filesystem::exists(m.resolve(p))) {
      throw ValidationError(where + ": feature file " + m.resolve(p).string() + " does not exist");
    }
  };

  std::set<int> supported;
  for (const auto& s : m.supports) {
    const std::string where = "support for class " + std::to_string(s.class_index);
    if (!classes.count(s.class_index)) throw ValidationError(where + ": class is not declared");
    if (!supported.insert(s.class_index).second) {
      throw ValidationError(where + ": duplicate support (one support image per class)");
    }
    check_location(s.prompt, where);
    check_file(s.feature_file, where);
  }
  for (int c : classes) {
    if (!supported.count(c)) throw ValidationError("class " + std::to_string(c) + " has no support image");
  }

  std::set<std::string> ids;
  for (const auto& q : m.queries) {
    const std::string where = "query '" + q.query_id + "'";
    if (q.query_id.empty()) throw ValidationError("query with empty query_id");
    if (!ids.insert(q.query_id).second) throw ValidationError(where + ": duplicate query_id");
    check_file(q.feature_file, where);
    for (const auto& t : q.truths) {
      if (!classes.count(t.class_index)) {
        throw ValidationError(where + ": truth references undeclared class " + std::to_string(t.class_index));
      }
      check_location(t.gt, where);
    }
  }
}

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  const Json j = detail::parse_json(json_text, "manifest");
  DatasetManifest m;
  m.base_dir = base_dir;
  m.version = detail::get<int>(j, "version", "manifest");
  if (m.version != kManifestVersion) {
    throw ValidationError("manifest version " + std::to_string(m.version) + " is not supported (expected " +
                          std::to_string(kManifestVersion) + ")");
  }
  m.n_patches = detail::get<int>(j, "n_patches", "manifest");
  m.dim = detail::get<int>(j, "dim", "manifest");
  if (m.n_patches < 1) throw ValidationError("manifest: n_patches must be >= 1");

  for (const Json& c : detail::field(j, "classes", "manifest")) {
    m.classes.push_back({detail::get<int>(c, "class_index", "class"), detail::get<std::string>(c, "label", "class")});
  }
  for (const Json& s : detail::field(j, "supports", "manifest")) {
    SupportEntry e;
    e.class_index = detail::get<int>(s, "class_index", "support");
    const std::string where = "support for class " + std::to_string(e.class_index);
    e.feature_file = detail::get<std::string>(s, "feature_file", where);
    e.prompt = detail::location_from_json(detail::field(s, "prompt", where), m.n_patches, where);
    m.supports.push_back(std::move(e));
  }
  for (const Json& q : detail::field(j, "queries", "manifest")) {
    QueryEntry e;
    e.query_id = detail::get<std::string>(q, "query_id", "query");
    const std::string where = "query '" + e.query_id + "'";
    e.feature_file = detail::get<std::string>(q, "feature_file", where);
    if (q.contains("truths")) {
      for (const Json& t : q.at("truths")) {
        Truth truth;
        truth.class_index = detail::get<int>(t, "class_index", where);
        truth.gt = detail::location_from_json(detail::field(t, "gt", where), m.n_patches, where);
        e.truths.push_back(std::move(truth));
      }
    }
    m.queries.push_back(std::move(e));
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  auto m = parse_manifest(read_text_file(path), path.parent_path());
  validate(m);
  return m;
}

std::string serialize_manifest(const DatasetManifest& m) {
  Json j;
  j["version"] = m.version;
  j["n_patches"] = m.n_patches;
  j["dim"] = m.dim;
  j["classes"] = Json::array();
  for (const auto& c : m.classes) j["classes"].push_back({{"class_index", c.class_index}, {"label", c.label}});
  j["supports"] = Json::array();
  for (const auto& s : m.supports) {
    j["supports"].push_back({{"class_index", s.class_index},
                             {"feature_file", s.feature_file.generic_string()},
                             {"prompt", detail::location_to_json(s.prompt)}});
  }
  j["queries"] = Json::array();
  for (const auto& q : m.queries) {
    Json truths = Json::array();
    for (const auto& t : q.truths) {
      truths.push_back({{"class_index", t.class_index}, {"gt", detail::location_to_json(t.gt)}});
    }
    j["queries"].push_back(
        {{"query_id", q.query_id}, {"feature_file", q.feature_file.generic_string()}, {"truths", truths}});
  }
  return j.dump(2) + "\n";
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  write_file_atomic(path, serialize_manifest(manifest));
}

}  // namespace patchsearch::io
