#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrdyn {

enum class Errc {
  InvalidArgument,
  PoleInput,
  RootFindingFailure,
  ContinuationCollision,
  NewtonDivergence,
  TooManyUnknown,
  OutsideDisk,
  BadFraction,
  PrecisionOverflow,
  NoValidRadius,
  EscapedD1,
  SeedNotRepelling,
  NoRepellingFixedPoint,
  IoError,
};

std::string_view to_string(Errc code);

/// All library failures are reported through this exception type; the code
/// names the failure kind, the message gives the specifics.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace corrdyn
