#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fringe {

enum class ErrorKind {
  MissingFile,
  UnsupportedFormat,
  CorruptHeader,
  Unwritable,
  InvalidArgument,
  DimensionMismatch,
  Singular,
  Unfittable,
  InsufficientData,
  NoValidPixels,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. `kind()` lets callers
// distinguish e.g. a missing file from a corrupt one without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 protected:
  struct Verbatim {};
  Error(ErrorKind kind, const std::string& message, Verbatim);

 private:
  ErrorKind kind_;
};

// Raised by the pipeline; wraps an Error with the name of the failing stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace fringe
