#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsedist {

enum class Errc {
  IndexOutOfBounds,
  NegativeOffset,
  NonMonotonicIndptr,
  InconsistentLengths,
  DimensionMismatch,
  UnknownMetric,
  MissingParam,
  InvalidParam,
  DomainError,
  KTooLarge,
  SizeOverflow,
  ParseError,
  UnsupportedField,
  InvalidSpec,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message names the offending row, line or parameter where there is one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sparsedist
