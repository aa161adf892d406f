#pragma once

#include <stdexcept>
#include <string>

namespace fnls {

enum class ErrorKind {
  DegenerateInput,
  EllipticIsometry,
  Domain,
  Configuration,
  Range,
  Unsupported,
  HypothesisViolation,
  InternalConsistency,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::EllipticIsometry: return "elliptic-isometry";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Range: return "range";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::InternalConsistency: return "internal-consistency";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) fail(kind, what);
}

}  // namespace fnls
