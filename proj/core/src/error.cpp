#include "sparsedist/error.hpp"

namespace sparsedist {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::NegativeOffset: return "NegativeOffset";
    case Errc::NonMonotonicIndptr: return "NonMonotonicIndptr";
    case Errc::InconsistentLengths: return "InconsistentLengths";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownMetric: return "UnknownMetric";
    case Errc::MissingParam: return "MissingParam";
    case Errc::InvalidParam: return "InvalidParam";
    case Errc::DomainError: return "DomainError";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::ParseError: return "ParseError";
    case Errc::UnsupportedField: return "UnsupportedField";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sparsedist
