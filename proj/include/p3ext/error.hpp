#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace p3ext {

enum class ErrorCode {
  ConductorMismatch,
  DivisionByZero,
  NotDivisible,
  CongruenceViolation,
  BadGenerator,
  DegenerateConjugates,
  NotInL,
  NotInK,
  ResultNotInK,
  FactorizationIncomplete,
  WrongPrimeClass,
  NonIntegralInput,
  NoRoots,
  InsufficientPrimes,
  CriterionNotSatisfied,
  MissingTheta,
  OmegaDegenerate,
  NotReciprocal,
  Degenerate,
  BadPrime,
  UnsupportedPrime,
  ParseError,
  Internal,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConductorMismatch: return "ConductorMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::CongruenceViolation: return "CongruenceViolation";
    case ErrorCode::BadGenerator: return "BadGenerator";
    case ErrorCode::DegenerateConjugates: return "DegenerateConjugates";
    case ErrorCode::NotInL: return "NotInL";
    case ErrorCode::NotInK: return "NotInK";
    case ErrorCode::ResultNotInK: return "ResultNotInK";
    case ErrorCode::FactorizationIncomplete: return "FactorizationIncomplete";
    case ErrorCode::WrongPrimeClass: return "WrongPrimeClass";
    case ErrorCode::NonIntegralInput: return "NonIntegralInput";
    case ErrorCode::NoRoots: return "NoRoots";
    case ErrorCode::InsufficientPrimes: return "InsufficientPrimes";
    case ErrorCode::CriterionNotSatisfied: return "CriterionNotSatisfied";
    case ErrorCode::MissingTheta: return "MissingTheta";
    case ErrorCode::OmegaDegenerate: return "OmegaDegenerate";
    case ErrorCode::NotReciprocal: return "NotReciprocal";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` is
/// stable and drives the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace p3ext
