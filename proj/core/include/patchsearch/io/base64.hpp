#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchsearch/feature_map.hpp"

namespace patchsearch::io {

/// RFC 4648 base64 with '=' padding.
std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ValidationError on characters outside the alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Row-major bit-packed mask, most significant bit first within each byte, base64-encoded.
std::string encode_mask(const PatchSet& mask);
/// Throws ValidationError when the decoded length or trailing pad bits do not fit an n x n grid.
PatchSet decode_mask(std::string_view text, int n_patches);

}  // namespace patchsearch::io
