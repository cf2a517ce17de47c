#include "fringe/error.hpp"

namespace fringe {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "missing file";
    case ErrorKind::UnsupportedFormat: return "unsupported format";
    case ErrorKind::CorruptHeader: return "corrupt header";
    case ErrorKind::Unwritable: return "unwritable path";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::Singular: return "singular matrix";
    case ErrorKind::Unfittable: return "unfittable";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::NoValidPixels: return "no valid pixels";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& message, Verbatim)
    : std::runtime_error(message), kind_(kind) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), "[" + stage + "] " + cause.what(), Verbatim{}), stage_(std::move(stage)) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fringe
