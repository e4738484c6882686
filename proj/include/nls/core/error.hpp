#pragma once

#include <stdexcept>
#include <string>

namespace nls {

enum class ErrorKind {
  Domain,
  Dimension,
  Geometry,
  Overflow,
  Convergence,
  NoBracket,
  Diverged,
  Degenerate,
  Budget,
  Regime,
  Precondition,
  Io,
  Format,
  Usage,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace nls
