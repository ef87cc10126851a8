#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chtheta {

/// Every hard failure the library can raise. The enumerator names double as
/// the stable identifiers printed by the CLI.
enum class ErrorKind {
  OddBranchCount,
  TooFewPoints,
  DuplicatePoint,
  NonFiniteBranchPoint,
  UntaggedBranchPoint,
  BranchPointEvaluation,
  QuadratureNotConverged,
  SingularAPeriodMatrix,
  NotNegativeDefinite,
  ENotBranchPoint,
  EIndexOutOfRange,
  NotMCurve,
  SingularCharacteristics,
  VanishingDenominator,
  SingularDenominatorOnProbe,
  NonRealX,
  CuspAtPoint,
  NotBracketed,
  NonMonotone,
  CuspedFieldRejected,
  NonMonotoneX,
  InvalidArgument,
  ConfigParse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chtheta
