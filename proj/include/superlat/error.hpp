#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace superlat {

enum class ErrorCode {
  DimensionMismatch,
  SingularMatrix,
  ZeroFunctional,
  ZeroVector,
  InvalidForm,       // non-symmetric or degenerate Gram matrix
  DegenerateForm,    // operation needs a nondegenerate form
  NonIntegralForm,
  IsotropicAnchor,   // B(w,w) = 0
  NotEven,
  NegativeTarget,
  NotPositiveDefinite,
  DegenerateZ0,
  BadFamilyParams,
  Unsupported,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace superlat
