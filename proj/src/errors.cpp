#include "optocorr/errors.hpp"

namespace optocorr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPhysicalInput: return "NonPhysicalInput";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateMeasuredMode: return "DegenerateMeasuredMode";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::UnstableDrift: return "UnstableDrift";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NotBracketed: return "NotBracketed";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnitError: return "UnitError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return 2;
    case ErrorKind::UnitError: return 3;
    case ErrorKind::UnknownKey: return 4;
    case ErrorKind::MissingKey: return 5;
    case ErrorKind::InvalidSpec: return 6;
    case ErrorKind::UnknownPreset: return 7;
    case ErrorKind::IoError: return 8;
    case ErrorKind::InvalidParameter: return 9;
    case ErrorKind::UnstableDrift: return 10;
    case ErrorKind::SingularSystem: return 11;
    case ErrorKind::ToleranceNotMet: return 12;
    case ErrorKind::NonPhysicalInput: return 13;
    case ErrorKind::DomainError: return 14;
    case ErrorKind::DegenerateMeasuredMode: return 15;
    case ErrorKind::NotBracketed: return 16;
  }
  return 1;
}

}  // namespace optocorr
