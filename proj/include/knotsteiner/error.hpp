#pragma once

#include <stdexcept>
#include <string>

namespace knotsteiner {

enum class ErrorKind {
  DegenerateInput,
  NonuniqueMinimizer,
  OutOfRange,
  CapExceeded,
  NonConvergence,
  InvalidTopology,
  InvalidDiagram,
  Overflow,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput: return "degenerate input";
    case ErrorKind::NonuniqueMinimizer: return "nonunique minimizer";
    case ErrorKind::OutOfRange: return "parameter out of range";
    case ErrorKind::CapExceeded: return "cap exceeded";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::InvalidTopology: return "invalid topology";
    case ErrorKind::InvalidDiagram: return "invalid diagram";
    case ErrorKind::Overflow: return "integer overflow";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace knotsteiner
