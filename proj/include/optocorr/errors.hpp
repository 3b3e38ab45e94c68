#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optocorr {

/// Every failure the library can report. Each kind maps to exactly one
/// process exit code (see exit_code()).
enum class ErrorKind {
  NonPhysicalInput,
  DomainError,
  DegenerateMeasuredMode,
  InvalidParameter,
  UnstableDrift,
  SingularSystem,
  ToleranceNotMet,
  InvalidSpec,
  NotBracketed,
  UnknownPreset,
  ParseError,
  UnitError,
  UnknownKey,
  MissingKey,
  IoError,
};

inline constexpr ErrorKind kAllErrorKinds[] = {
    ErrorKind::NonPhysicalInput, ErrorKind::DomainError,
    ErrorKind::DegenerateMeasuredMode, ErrorKind::InvalidParameter,
    ErrorKind::UnstableDrift, ErrorKind::SingularSystem,
    ErrorKind::ToleranceNotMet, ErrorKind::InvalidSpec,
    ErrorKind::NotBracketed, ErrorKind::UnknownPreset,
    ErrorKind::ParseError, ErrorKind::UnitError,
    ErrorKind::UnknownKey, ErrorKind::MissingKey,
    ErrorKind::IoError,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error kind. 0 is success and 1 is reserved for
/// unexpected (non-library) failures.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace optocorr
