#pragma once

#include <stdexcept>
#include <string>

namespace aperio {

enum class ErrorKind {
  kInvalidArgument,
  kEmpty,
  kWindowExceedsPatch,
  kDimensionMismatch,
  kDuplicatePoint,
  kOutsideBox,
  kDegenerateBasis,
  kEmptyWindow,
  kBoxTooSmall,
  kUnassignedPoint,
  kClusterOverflow,
  kAmbiguousAnchors,
  kPatchTooSmall,
  kNotLattice,
  kGridTooCoarse,
  kOverflow,
  kMarginTooLarge,
  kNotAFrame,
  kUnknownColumn,
  kIo,
};

/// Raised by every operation of the library. The kind is stable and is what
/// tests and the CLI dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace aperio
