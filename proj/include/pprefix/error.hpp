#pragma once

#include <stdexcept>
#include <string>

namespace pprefix {

/// Failure categories. The CLI maps them onto its exit codes.
enum class ErrorKind {
  kAssertion,          // an exact identity or bound failed
  kConfig,             // malformed input, spec string or parameter
  kInsufficientData,   // not enough points/lengths for an estimate
  kRefinementCap,      // an exact comparison could not be decided
  kPrecondition,       // operation called outside its domain
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAssertion: return 1;
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kPrecondition: return 2;
    case ErrorKind::kInsufficientData: return 3;
    case ErrorKind::kRefinementCap: return 4;
  }
  return 1;
}

}  // namespace pprefix
