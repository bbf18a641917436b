#pragma once

#include <stdexcept>
#include <string>

namespace otmorph {

// Stable categories; the CLI maps each to its own exit status.
enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kInvalidWeights,
  kSolverFailure,
  kBadMagic,
  kTruncated,
  kMalformed,
  kIo,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kInvalidWeights: return "invalid_weights";
    case ErrorCode::kSolverFailure: return "solver_failure";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::kDimensionMismatch, what) {}
};

class InvalidWeightsError : public Error {
 public:
  explicit InvalidWeightsError(const std::string& what)
      : Error(ErrorCode::kInvalidWeights, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what)
      : Error(ErrorCode::kSolverFailure, what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class FormatError : public Error {
 public:
  FormatError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace otmorph
