#include "heunstep/step_geometry.hpp"

#include <cmath>
#include <limits>

namespace heunstep {

namespace {

// Beyond this reduced coordinate the closed form is replaced by the
// asymptotic tails (exp(+-600) is near the double exponent range and the
// tail corrections are below 1e-250 there).
constexpr double kAsymptoteSwitch = 600.0;

}  // namespace

void validate_config(const PhysicalConfig& cfg) {
  const bool finite = std::isfinite(cfg.v0) && std::isfinite(cfg.v1) &&
                      std::isfinite(cfg.sigma) && std::isfinite(cfg.x0) &&
                      std::isfinite(cfg.mass) && std::isfinite(cfg.hbar);
  if (!finite) throw ConfigError("configuration fields must be finite");
  if (!(cfg.mass > 0.0)) throw ConfigError("mass must be positive");
  if (!(cfg.hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (cfg.sigma == 0.0) throw ConfigError("sigma must be nonzero");
}

namespace detail {

ZParts coordinate_parts(double x, const PhysicalConfig& cfg) {
  const double s = (x - cfg.x0) / cfg.sigma;

  if (s > kAsymptoteSwitch) {
    // Large-z tail: z ~ (4 e^s)^(1/3), relative correction O(e^(-s/3)).
    const double z = std::exp((std::log(4.0) + s) / 3.0);
    return {z, z - 1.0, z + 2.0};
  }
  if (s < -kAsymptoteSwitch) {
    // Near-unit tail: z ~ 1 + (4/9) e^s, relative correction O(e^s).
    const double zm1 = (4.0 / 9.0) * std::exp(s);
    return {1.0 + zm1, zm1, 3.0 + zm1};
  }

  // Closed form z = t + 1/t - 1 with t = w^(2/3),
  // w = e^(s/2) + sqrt(1 + e^s), rewritten through log w = asinh(e^(s/2)) so
  // that t - 1 = expm1(...) and z - 1 = (t-1)^2 / t carry full relative
  // precision on both tails (all-real arithmetic, no complex powers).
  const double u = std::exp(0.5 * s);
  const double ln_t = (2.0 / 3.0) * std::asinh(u);
  const double t = std::exp(ln_t);
  const double tm1 = std::expm1(ln_t);
  const double zm1 = tm1 * tm1 / t;
  const double zp2 = t + 1.0 / t + 1.0;
  return {1.0 + zm1, zm1, zp2};
}

}  // namespace detail

double coordinate_z(double x, const PhysicalConfig& cfg) {
  validate_config(cfg);
  return detail::coordinate_parts(x, cfg).z;
}

double coordinate_z_cubic(double x, const PhysicalConfig& cfg) {
  validate_config(cfg);
  const double s = (x - cfg.x0) / cfg.sigma;
  if (std::abs(s) > 700.0) {
    throw OverflowGuard(
        "cubic right-hand side leaves the double exponent range; use "
        "coordinate_z");
  }
  const double rhs = 4.0 * std::exp(s);
  const auto f = [rhs](double z) { return (z + 2.0) * (z + 2.0) * (z - 1.0) - rhs; };
  const auto df = [](double z) { return (z + 2.0) * (3.0 * z); };

  // Bracket the root: f(1) = -rhs < 0 and f grows cubically.
  double lo = 1.0;
  double hi = std::max(2.0, std::cbrt(rhs) + 1.0);
  while (f(hi) < 0.0) hi *= 2.0;

  // Safeguarded Newton: fall back to bisection whenever the Newton step
  // leaves the bracket.
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fz = f(z);
    if (fz == 0.0) break;
    if (fz > 0.0) {
      hi = z;
    } else {
      lo = z;
    }
    const double step = fz / df(z);
    double next = z - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * std::abs(z)) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

double jacobian_rho(double z, const PhysicalConfig& cfg) {
  validate_config(cfg);
  return (z + 2.0) * (z - 1.0) / (3.0 * cfg.sigma * z);
}

double potential_v(double x, const PhysicalConfig& cfg) {
  validate_config(cfg);
  const auto parts = detail::coordinate_parts(x, cfg);
  return cfg.v0 + cfg.v1 / parts.z;
}

TransformPoint transform_point(double x, const PhysicalConfig& cfg) {
  validate_config(cfg);
  const auto parts = detail::coordinate_parts(x, cfg);
  const double rho = parts.zp2 * parts.zm1 / (3.0 * cfg.sigma * parts.z);
  return {x, parts.z, rho};
}

}  // namespace heunstep
