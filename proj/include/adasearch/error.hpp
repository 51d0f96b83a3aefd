#pragma once

#include <stdexcept>
#include <string>

namespace adasearch {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kNonIdentifiable,
  kSingularGeometry,
  kSingularSystem,
  kInvalidState,
  kDimensionMismatch,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kNonIdentifiable: return "non-identifiable";
    case ErrorCode::kSingularGeometry: return "singular-geometry";
    case ErrorCode::kSingularSystem: return "singular-system";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace adasearch
