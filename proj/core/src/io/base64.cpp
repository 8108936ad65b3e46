#include "patchsearch/io/base64.hpp"

#include <array>

#include "patchsearch/errors.hpp"

namespace patchsearch::io {
namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256> make_lookup() {
  std::array<int, 256> table{};
  for (int& v : table) v = -1;
  for (int i = 0; i < 64; ++i) table[static_cast<unsigned char>(kAlphabet[i])] = i;
  return table;
}

constexpr auto kLookup = make_lookup();

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ValidationError("base64: length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const char ch = text[i + j];
      if (ch == '=') {
        if (!last || j < 2) throw ValidationError("base64: misplaced padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw ValidationError("base64: data after padding");
      const int d = kLookup[static_cast<unsigned char>(ch)];
      if (d < 0) throw ValidationError("base64: invalid character");
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::string encode_mask(const PatchSet& mask) {
  std::vector<std::uint8_t> bytes((mask.capacity() + 7) / 8, 0);
  for (auto idx : mask.indices()) bytes[idx / 8] |= static_cast<std::uint8_t>(0x80U >> (idx % 8));
  return base64_encode(bytes);
}

PatchSet decode_mask(std::string_view text, int n_patches) {
  PatchSet mask(n_patches);
  const auto bytes = base64_decode(text);
  if (bytes.size() != (mask.capacity() + 7) / 8) {
    throw ValidationError("mask: expected " + std::to_string((mask.capacity() + 7) / 8) + " bytes for a " +
                          std::to_string(n_patches) + "x" + std::to_string(n_patches) + " grid, got " +
                          std::to_string(bytes.size()));
  }
  for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
    if (!(bytes[bit / 8] & (0x80U >> (bit % 8)))) continue;
    if (bit >= mask.capacity()) throw ValidationError("mask: padding bits set");
    mask.set(bit);
  }
  return mask;
}

}  // namespace patchsearch::io
