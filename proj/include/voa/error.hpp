#pragma once

#include <stdexcept>
#include <string>

namespace voa {

enum class ErrorCode {
  DivisionByZero,
  PoleAtPoint,
  MissingParameter,
  Parse,
  UnknownGenerator,
  SectorMismatch,
  UnsupportedSector,
  NotLocal,
  InvalidLieData,
  InvalidAlgebra,
  InfiniteDimensional,
  NonInvertibleLinearTerm,
  NotPrimary,
  TruncationMismatch,
  Usage,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace voa
