#include "chtheta/errors.hpp"

namespace chtheta {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OddBranchCount: return "OddBranchCount";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::NonFiniteBranchPoint: return "NonFiniteBranchPoint";
    case ErrorKind::UntaggedBranchPoint: return "UntaggedBranchPoint";
    case ErrorKind::BranchPointEvaluation: return "BranchPointEvaluation";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::SingularAPeriodMatrix: return "SingularAPeriodMatrix";
    case ErrorKind::NotNegativeDefinite: return "NotNegativeDefinite";
    case ErrorKind::ENotBranchPoint: return "ENotBranchPoint";
    case ErrorKind::EIndexOutOfRange: return "EIndexOutOfRange";
    case ErrorKind::NotMCurve: return "NotMCurve";
    case ErrorKind::SingularCharacteristics: return "SingularCharacteristics";
    case ErrorKind::VanishingDenominator: return "VanishingDenominator";
    case ErrorKind::SingularDenominatorOnProbe: return "SingularDenominatorOnProbe";
    case ErrorKind::NonRealX: return "NonRealX";
    case ErrorKind::CuspAtPoint: return "CuspAtPoint";
    case ErrorKind::NotBracketed: return "NotBracketed";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::CuspedFieldRejected: return "CuspedFieldRejected";
    case ErrorKind::NonMonotoneX: return "NonMonotoneX";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace chtheta
