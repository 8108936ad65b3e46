#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch::io {

/// Binary patch feature file, little-endian throughout:
///
///   bytes 0..7   magic "PFMAP\0\x01" followed by a flags byte
///   bytes 8..11  n_patches (u32)
///   bytes 12..15 dim (u32)
///   payload      n_patches^2 * dim float32, row-major (row, col, channel)
///   [optional]   dim float32 class token, present when flags bit 0 is set
///
/// Any other flag bit is rejected as a bad magic.
inline constexpr std::uint8_t kFlagClassToken = 0x01;

struct FeatureFile {
  FeatureMap features;
  std::optional<std::vector<float>> class_token;
};

std::vector<std::uint8_t> encode_feature_file(const FeatureMap& fmap,
                                              std::optional<std::span<const float>> class_token = std::nullopt);

/// Throws FormatError whose kind() names the failing check.
FeatureFile decode_feature_file(std::span<const std::uint8_t> bytes);

FeatureMap load_feature_file(const std::filesystem::path& path);
FeatureFile read_feature_file(const std::filesystem::path& path);

void write_feature_file(const std::filesystem::path& path, const FeatureMap& fmap,
                        std::optional<std::span<const float>> class_token = std::nullopt);

}  // namespace patchsearch::io
