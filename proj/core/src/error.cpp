#include "corrdyn/error.hpp"

namespace corrdyn {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::PoleInput: return "PoleInput";
    case Errc::RootFindingFailure: return "RootFindingFailure";
    case Errc::ContinuationCollision: return "ContinuationCollision";
    case Errc::NewtonDivergence: return "NewtonDivergence";
    case Errc::TooManyUnknown: return "TooManyUnknown";
    case Errc::OutsideDisk: return "OutsideDisk";
    case Errc::BadFraction: return "BadFraction";
    case Errc::PrecisionOverflow: return "PrecisionOverflow";
    case Errc::NoValidRadius: return "NoValidRadius";
    case Errc::EscapedD1: return "EscapedD1";
    case Errc::SeedNotRepelling: return "SeedNotRepelling";
    case Errc::NoRepellingFixedPoint: return "NoRepellingFixedPoint";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace corrdyn
