#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patchsearch/enrollment.hpp"

namespace patchsearch::io {

inline constexpr int kStoreVersion = 1;

/// Enrolled class models plus the settings that produced them.
struct EnrolledStore {
  int version = kStoreVersion;
  int manifest_version = 0;
  int n_patches = 0;
  int dim = 0;
  int k_s = kDefaultSupportClusters;
  std::uint64_t seed = 0;
  std::vector<ClassModel> models;

  friend bool operator==(const EnrolledStore&, const EnrolledStore&) = default;
};

std::string serialize_store(const EnrolledStore& store);
EnrolledStore parse_store(std::string_view json_text);
void save_store(const std::filesystem::path& path, const EnrolledStore& store);
EnrolledStore load_store(const std::filesystem::path& path);

}  // namespace patchsearch::io
