#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qe {

enum class ErrorCode {
  NotAssociative,
  NoIdentity,
  NotInvertible,
  UnsupportedFamily,
  ParamOutOfRange,
  LengthMismatch,
  TrivialGroup,
  NoConstructionRoute,
  NotUnitary,
  NotHermitian,
  IncompleteIrreps,
  InvalidIrreps,
  ModeUnavailable,
  NonZeroTrace,
  EmptyBlocks,
  NotPrime,
  PTooSmall,
  NotGenerating,
  NotSymmetric,
  ContainsIdentity,
  EmptySpace,
  BasisMismatch,
  ValidationFailed,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TrivialGroup: return "TrivialGroup";
    case ErrorCode::NoConstructionRoute: return "NoConstructionRoute";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::IncompleteIrreps: return "IncompleteIrreps";
    case ErrorCode::InvalidIrreps: return "InvalidIrreps";
    case ErrorCode::ModeUnavailable: return "ModeUnavailable";
    case ErrorCode::NonZeroTrace: return "NonZeroTrace";
    case ErrorCode::EmptyBlocks: return "EmptyBlocks";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::PTooSmall: return "PTooSmall";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ContainsIdentity: return "ContainsIdentity";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code; the
/// message always starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace qe
