#pragma once

#include <stdexcept>
#include <string>

namespace dzlab {

enum class ErrorCode {
  NotSquarefree,
  DisallowedValue,
  NotMonic,
  Reducible,
  Undecided,
  BadSpec,
  IndexDivisor,
  Overflow,
  OutOfRange,
  DomainError,
  PoleAt1,
  PoleProximity,
  DivisionNearZero,
  TableTooSmall,
  InsufficientData,
  TailTooLarge,
  CacheFormat,
  Config,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::DisallowedValue: return "DisallowedValue";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::Undecided: return "Undecided";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::IndexDivisor: return "IndexDivisor";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PoleAt1: return "PoleAt1";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::DivisionNearZero: return "DivisionNearZero";
    case ErrorCode::TableTooSmall: return "TableTooSmall";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::CacheFormat: return "CacheFormat";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code is stable and is what the
/// CLI maps onto exit statuses; the message carries the specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a monogenic presentation cannot resolve splitting at `prime`.
class IndexDivisorError : public Error {
 public:
  explicit IndexDivisorError(unsigned long long prime)
      : Error(ErrorCode::IndexDivisor,
              "prime " + std::to_string(prime) +
                  " divides the index [O_K : Z[theta]]; splitting is not resolvable from this polynomial"),
        prime_(prime) {}

  unsigned long long prime() const noexcept { return prime_; }

 private:
  unsigned long long prime_;
};

/// Raised when a coefficient table does not reach the norms a query needs.
class TableTooSmallError : public Error {
 public:
  TableTooSmallError(unsigned long long required, unsigned long long available)
      : Error(ErrorCode::TableTooSmall, "table bound X=" + std::to_string(available) +
                                            " is below the required X=" + std::to_string(required)),
        required_(required) {}

  unsigned long long required() const noexcept { return required_; }

 private:
  unsigned long long required_;
};

}  // namespace dzlab
