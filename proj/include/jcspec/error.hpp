#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jcspec {

/// Error categories raised by the library. The CLI prints the name verbatim.
enum class Errc {
  NonPositiveOmega,
  NegativeCoupling,
  NonFinite,
  InvalidTruncation,
  NegativeArgument,
  NonPositiveX,
  NonConvergedQuadrature,
  DimensionTooSmall,
  DimensionTooLarge,
  IndexOutOfRange,
  BisectionStall,
  NotAnEigenvalue,
  NoConvergence,
  TailNotConverged,
  OrderTooHigh,
  OrderTooLow,
  OutsideConvergentRegime,
  M0NotCertified,
  NotFoundWithinHorizon,
  NotResonant,
  ArgumentError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveOmega: return "NonPositiveOmega";
    case Errc::NegativeCoupling: return "NegativeCoupling";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidTruncation: return "InvalidTruncation";
    case Errc::NegativeArgument: return "NegativeArgument";
    case Errc::NonPositiveX: return "NonPositiveX";
    case Errc::NonConvergedQuadrature: return "NonConvergedQuadrature";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::BisectionStall: return "BisectionStall";
    case Errc::NotAnEigenvalue: return "NotAnEigenvalue";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::TailNotConverged: return "TailNotConverged";
    case Errc::OrderTooHigh: return "OrderTooHigh";
    case Errc::OrderTooLow: return "OrderTooLow";
    case Errc::OutsideConvergentRegime: return "OutsideConvergentRegime";
    case Errc::M0NotCertified: return "M0NotCertified";
    case Errc::NotFoundWithinHorizon: return "NotFoundWithinHorizon";
    case Errc::NotResonant: return "NotResonant";
    case Errc::ArgumentError: return "ArgumentError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace jcspec
