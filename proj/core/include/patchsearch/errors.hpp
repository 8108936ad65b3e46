#pragma once

#include <stdexcept>
#include <string>

namespace patchsearch {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad k, empty input, out of grid, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Numerically degenerate input, e.g. a zero-norm vector handed to cosine similarity.
class DegenerateInput : public Error {
public:
  using Error::Error;
};

/// Input data on disk failed validation (manifest, store, results).
class ValidationError : public Error {
public:
  using Error::Error;
};

enum class FormatErrorKind {
  Io,
  BadMagic,
  TruncatedHeader,
  BadHeader,
  TruncatedPayload,
  TrailingBytes,
  NonFinite,
};

const char* to_string(FormatErrorKind kind) noexcept;

/// A binary feature file could not be decoded. `kind()` names the failing check.
class FormatError : public ValidationError {
public:
  FormatError(FormatErrorKind kind, const std::string& what)
      : ValidationError(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  FormatErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  FormatErrorKind kind_;
  std::string detail_;
};

}  // namespace patchsearch
