#include "nls/core/params.hpp"

#include <cmath>
#include <sstream>

#include "nls/core/error.hpp"

namespace nls {

namespace {
constexpr double kCritical = 7.0 / 3.0;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Scattering: return "scattering";
    case Regime::Blowup: return "blowup";
    case Regime::General: return "general";
  }
  return "general";
}

Regime parse_regime(std::string_view s) {
  if (s == "scattering") return Regime::Scattering;
  if (s == "blowup") return Regime::Blowup;
  if (s == "general") return Regime::General;
  fail(ErrorKind::Usage, "unknown regime '" + std::string(s) + "'");
}

void PhysParams::validate() const {
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(omega))
    fail(ErrorKind::Domain, "non-finite physical parameter");
  if (!(omega > 0)) fail(ErrorKind::Domain, "omega must be positive");
  std::ostringstream os;
  os << "p=" << p << ", q=" << q << " outside the " << to_string(regime) << " window";
  switch (regime) {
    case Regime::Scattering:
      if (!(kCritical < q && q < p && p < 5)) fail(ErrorKind::Regime, os.str() + " (7/3<q<p<5)");
      break;
    case Regime::Blowup:
      if (!(kCritical < p && p < 5 && 1 < q && q < p))
        fail(ErrorKind::Regime, os.str() + " (7/3<p<5, 1<q<p)");
      break;
    case Regime::General:
      if (!(1 < q && q < p && p < 5)) fail(ErrorKind::Regime, os.str() + " (1<q<p<5)");
      break;
  }
}

PhysParams PhysParams::make(double p, double q, double omega, Regime regime) {
  PhysParams out{p, q, omega, regime};
  out.validate();
  return out;
}

PhysParams PhysParams::infer(double p, double q, double omega) {
  PhysParams out{p, q, omega, Regime::General};
  if (kCritical < q && q < p && p < 5)
    out.regime = Regime::Scattering;
  else if (kCritical < p && p < 5 && 1 < q && q < p)
    out.regime = Regime::Blowup;
  out.validate();
  return out;
}

std::string PhysParams::describe() const {
  std::ostringstream os;
  os << "p=" << p << " q=" << q << " omega=" << omega << " regime=" << to_string(regime);
  return os.str();
}

}  // namespace nls
