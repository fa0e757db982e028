#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace linf {

using Index = std::uint64_t;

/// Absolute tolerance used for equality assertions throughout the library.
inline constexpr double kTolerance = 1e-9;

enum class ErrorKind {
  IndexZero,
  LengthMismatch,
  EmptyWindow,
  KindMismatch,
  NotUnitVector,
  ZeroElement,
  BudgetExhausted,
  SchemeExhausted,
  EmptyBasis,
  InvalidArgument,
  ConfigError,
  IOError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IndexZero: return "IndexZero";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::NotUnitVector: return "NotUnitVector";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::SchemeExhausted: return "SchemeExhausted";
    case ErrorKind::EmptyBasis: return "EmptyBasis";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a coordinate outside the materialized part of an index scheme is requested.
class SchemeExhausted : public Error {
 public:
  explicit SchemeExhausted(Index n)
      : Error(ErrorKind::SchemeExhausted,
              "index " + std::to_string(n) + " lies beyond the scanned part of the scheme"),
        index_(n) {}

  Index index() const noexcept { return index_; }

 private:
  Index index_;
};

namespace detail {

inline void require_positive_index(Index n, std::string_view what) {
  if (n == 0) throw Error(ErrorKind::IndexZero, std::string(what) + " must be >= 1");
}

}  // namespace detail
}  // namespace linf
