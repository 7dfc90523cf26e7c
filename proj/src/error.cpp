#include "swpk/error.hpp"

namespace swpk {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveExponent: return "NonPositiveExponent";
    case Errc::DivergentIntegral: return "DivergentIntegral";
    case Errc::DomainError: return "DomainError";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::BadGrid: return "BadGrid";
    case Errc::PreconditionError: return "PreconditionError";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::ZeroImage: return "ZeroImage";
    case Errc::NotConverged: return "NotConverged";
    case Errc::HypothesisNotSatisfied: return "HypothesisNotSatisfied";
    case Errc::InsufficientSupport: return "InsufficientSupport";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace swpk
