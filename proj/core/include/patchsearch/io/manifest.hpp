#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch::io {

inline constexpr int kManifestVersion = 1;

/// A location in patch coordinates: a box, or a bit-packed mask.
using Location = std::variant<BBox, PatchSet>;

PatchSet rasterize(const Location& location, int n_patches);

struct ClassEntry {
  int class_index = 0;
  std::string label;
};

struct SupportEntry {
  int class_index = 0;
  std::filesystem::path feature_file;
  Location prompt;
};

struct Truth {
  int class_index = 0;
  Location gt;
};

struct QueryEntry {
  std::string query_id;
  std::filesystem::path feature_file;
  std::vector<Truth> truths;
};

/// Dataset description. Feature file paths are stored as written and resolved
/// against `base_dir` (the manifest's directory) by `resolve`.
struct DatasetManifest {
  int version = kManifestVersion;
  int n_patches = 0;
  int dim = 0;
  std::vector<ClassEntry> classes;
  std::vector<SupportEntry> supports;
  std::vector<QueryEntry> queries;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : base_dir / p;
  }
  const std::string& label_of(int class_index) const;
};

/// Checks class references, one support per class, grid bounds, unique query
/// ids and (when `check_files`) that every referenced feature file exists.
/// Throws ValidationError naming the first problem.
void validate(const DatasetManifest& manifest, bool check_files = true);

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(const DatasetManifest& manifest);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

}  // namespace patchsearch::io
