#include "nls/core/error.hpp"

namespace nls {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::NoBracket: return "no-bracket";
    case ErrorKind::Diverged: return "diverged";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Regime: return "regime";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace nls
