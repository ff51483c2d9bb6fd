#pragma once

#include <stdexcept>
#include <string>

namespace tauber {

enum class Errc {
  NonPositiveParameter,
  GammaNotGreaterThanOne,
  MassNotOne,
  NegativeTime,
  ZeroTailMass,
  QuantileOutOfRange,
  EmptyInterval,
  BinCountTooSmall,
  DegenerateInterval,
  NonPositiveDensityOnSupport,
  UnknownInstance,
  SchemaError,
  NotAChain,
  TailNeverSmall,
  NumericalFailure,
  MissingReferenceFamily,
  ParseError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveParameter: return "NonPositiveParameter";
    case Errc::GammaNotGreaterThanOne: return "GammaNotGreaterThanOne";
    case Errc::MassNotOne: return "MassNotOne";
    case Errc::NegativeTime: return "NegativeTime";
    case Errc::ZeroTailMass: return "ZeroTailMass";
    case Errc::QuantileOutOfRange: return "QuantileOutOfRange";
    case Errc::EmptyInterval: return "EmptyInterval";
    case Errc::BinCountTooSmall: return "BinCountTooSmall";
    case Errc::DegenerateInterval: return "DegenerateInterval";
    case Errc::NonPositiveDensityOnSupport: return "NonPositiveDensityOnSupport";
    case Errc::UnknownInstance: return "UnknownInstance";
    case Errc::SchemaError: return "SchemaError";
    case Errc::NotAChain: return "NotAChain";
    case Errc::TailNeverSmall: return "TailNeverSmall";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::MissingReferenceFamily: return "MissingReferenceFamily";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace tauber
