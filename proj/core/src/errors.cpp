#include "patchsearch/errors.hpp"

namespace patchsearch {

const char* to_string(FormatErrorKind kind) noexcept {
  switch (kind) {
    case FormatErrorKind::Io: return "io error";
    case FormatErrorKind::BadMagic: return "bad magic";
    case FormatErrorKind::TruncatedHeader: return "truncated header";
    case FormatErrorKind::BadHeader: return "bad header";
    case FormatErrorKind::TruncatedPayload: return "truncated payload";
    case FormatErrorKind::TrailingBytes: return "trailing bytes";
    case FormatErrorKind::NonFinite: return "non-finite value";
  }
  return "unknown";
}

}  // namespace patchsearch
