#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swpk {

enum class Errc {
  NonPositiveExponent,
  DivergentIntegral,
  DomainError,
  QuadratureFailure,
  BadGrid,
  PreconditionError,
  GridMismatch,
  ZeroImage,
  NotConverged,
  HypothesisNotSatisfied,
  InsufficientSupport,
  ParseError,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace swpk
