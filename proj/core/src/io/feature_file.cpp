#include "patchsearch/io/feature_file.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "patchsearch/errors.hpp"
#include "patchsearch/io/atomic_write.hpp"

namespace patchsearch::io {
namespace {

constexpr std::uint8_t kMagic[7] = {'P', 'F', 'M', 'A', 'P', 0x00, 0x01};
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | in[offset + static_cast<std::size_t>(b)];
  return v;
}

void put_f32(std::vector<std::uint8_t>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32(std::span<const std::uint8_t> in, std::size_t offset) {
  return std::bit_cast<float>(get_u32(in, offset));
}

}  // namespace

std::vector<std::uint8_t> encode_feature_file(const FeatureMap& fmap, std::optional<std::span<const float>> class_token) {
  if (class_token && class_token->size() != static_cast<std::size_t>(fmap.dim())) {
    throw InvalidArgument("class token length does not match feature dimension");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 4 * (fmap.data().size() + (class_token ? class_token->size() : 0)));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(class_token ? kFlagClassToken : 0);
  put_u32(out, static_cast<std::uint32_t>(fmap.n_patches()));
  put_u32(out, static_cast<std::uint32_t>(fmap.dim()));
  for (float f : fmap.data()) put_f32(out, f);
  if (class_token) {
    for (float f : *class_token) put_f32(out, f);
  }
  return out;
}

FeatureFile decode_feature_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError(FormatErrorKind::TruncatedHeader, "file shorter than the magic tag");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError(FormatErrorKind::BadMagic, "magic tag is not PFMAP\\0\\x01");
  }
  const std::uint8_t flags = bytes[7];
  if (flags & ~kFlagClassToken) {
    throw FormatError(FormatErrorKind::BadMagic, "unknown flag bits in magic byte 7");
  }
  if (bytes.size() < kHeaderSize) throw FormatError(FormatErrorKind::TruncatedHeader, "header needs 16 bytes");

  const std::uint32_t n = get_u32(bytes, 8);
  const std::uint32_t dim = get_u32(bytes, 12);
  if (n == 0 || n > 4096) throw FormatError(FormatErrorKind::BadHeader, "n_patches = " + std::to_string(n));
  if (dim == 0 || dim > (1U << 20)) throw FormatError(FormatErrorKind::BadHeader, "dim = " + std::to_string(dim));

  const std::size_t values = std::size_t{n} * n * dim;
  const std::size_t token_values = (flags & kFlagClassToken) ? dim : 0;
  const std::size_t expected = kHeaderSize + 4 * (values + token_values);
  if (bytes.size() < expected) {
    throw FormatError(FormatErrorKind::TruncatedPayload, "expected " + std::to_string(expected) + " bytes for n_patches=" +
                                                             std::to_string(n) + " dim=" + std::to_string(dim) +
                                                             ", got " + std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw FormatError(FormatErrorKind::TrailingBytes,
                      std::to_string(bytes.size() - expected) + " bytes after the declared payload");
  }

  std::vector<float> data(values);
  for (std::size_t i = 0; i < values; ++i) {
    data[i] = get_f32(bytes, kHeaderSize + 4 * i);
    if (!std::isfinite(data[i])) {
      throw FormatError(FormatErrorKind::NonFinite, "payload value " + std::to_string(i) + " is NaN or Inf");
    }
  }
  std::optional<std::vector<float>> token;
  if (token_values) {
    token.emplace(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      (*token)[i] = get_f32(bytes, kHeaderSize + 4 * (values + i));
      if (!std::isfinite((*token)[i])) throw FormatError(FormatErrorKind::NonFinite, "class token is NaN or Inf");
    }
  }
  return {FeatureMap(static_cast<int>(n), static_cast<int>(dim), std::move(data)), std::move(token)};
}

FeatureFile read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_feature_file(bytes);
  } catch (const FormatError& e) {
    throw FormatError(e.kind(), path.string() + ": " + e.detail());
  }
}

FeatureMap load_feature_file(const std::filesystem::path& path) { return read_feature_file(path).features; }

void write_feature_file(const std::filesystem::path& path, const FeatureMap& fmap,
                        std::optional<std::span<const float>> class_token) {
  write_file_atomic(path, encode_feature_file(fmap, class_token));
}

}  // namespace patchsearch::io
