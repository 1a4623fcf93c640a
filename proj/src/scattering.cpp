#include "heunstep/scattering.hpp"

#include <cmath>
#include <numbers>

namespace heunstep {

namespace {

constexpr double kPi = std::numbers::pi;

// log(sinh u) for u > 0 without overflow: u + log(1 - e^{-2u}) - log 2.
double log_sinh(double u) {
  return u + std::log(-std::expm1(-2.0 * u)) - std::numbers::ln2;
}

ComplexValue pow_real_base(double base, ComplexValue expo) {
  return std::exp(expo * std::log(base));
}

}  // namespace

WaveNumbers wavenumbers(const PhysicalConfig& cfg, double E) {
  validate_config(cfg);
  if (!(E > cfg.v0 + cfg.v1)) {
    throw RegimeError(
        "analytic scattering requires E above the barrier top V0 + V1");
  }
  if (!(E > cfg.v0)) {
    throw RegimeError(
        "analytic scattering requires a propagating incident channel "
        "(E > V0)");
  }
  if (!(E - cfg.v0 + 0.5 * cfg.v1 > 0.0)) {
    // Only reachable for a downward step (V1 < 0): the auxiliary
    // half-step-shifted channel must be open as well.
    throw RegimeError(
        "analytic scattering requires E - V0 + V1/2 > 0");
  }
  const double two_m_over_h2 = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  WaveNumbers k;
  k.k1 = std::sqrt(two_m_over_h2 * (E - cfg.v0));
  k.k2 = std::sqrt(two_m_over_h2 * (E - cfg.v0 - cfg.v1));
  k.kh = std::sqrt(two_m_over_h2 * (E - cfg.v0 + 0.5 * cfg.v1));
  return k;
}

ComplexValue wavefunction_psi(double x, const PhysicalConfig& cfg, double E,
                              ComplexValue c1, ComplexValue c2) {
  validate_config(cfg);
  const HeunParameters p = build_heun_parameters(cfg, E);
  const auto parts = detail::coordinate_parts(x, cfg);
  if (!(parts.zm1 > 0.0) || !std::isfinite(parts.z)) {
    throw OverflowGuard(
        "coordinate transform collapsed to its asymptote at this x; the "
        "pre-factor phase is not representable");
  }

  // Pre-factor (z+2)^alpha1 (z-1)^alpha2 through the loss-free parts: the
  // phase carries alpha2 * log(z-1), which requires full relative precision
  // in z-1 on the far tail.
  const ComplexValue log_pref =
      p.alpha1 * std::log(parts.zp2) + p.alpha2 * std::log(parts.zm1);
  const ComplexValue pref = std::exp(log_pref);

  ComplexValue combo{0.0, 0.0};
  if (c1 != ComplexValue{}) {
    combo += c1 * detail::u1_from_argument(
                      p, BranchedArgument{parts.zp2 / 3.0, CutSide::above});
  }
  if (c2 != ComplexValue{}) {
    combo += c2 * detail::u2_from_argument(
                      p, ComplexValue{-parts.zm1 / 3.0, 0.0});
  }
  return pref * combo;
}

ScatteringAmplitudes amplitudes(const PhysicalConfig& cfg, double E,
                                ComplexValue c2) {
  validate_config(cfg);
  if (cfg.sigma >= 0.0) {
    throw RegimeError(
        "asymptotic amplitude formulas are derived for sigma < 0");
  }
  if (cfg.v1 == 0.0) {
    throw RegimeError("a flat potential (V1 = 0) has no scattering problem");
  }
  const WaveNumbers k = wavenumbers(cfg, E);
  const HeunParameters p =
      build_heun_parameters(cfg, E, SignBranch::plus, SignBranch::plus);
  const ComplexValue i{0.0, 1.0};
  const ComplexValue a1 = p.alpha1;
  const ComplexValue a2 = p.alpha2;
  const ComplexValue ik1s = i * k.k1 * cfg.sigma;

  ScatteringAmplitudes amp;
  amp.A = -(pow_real_base(2.0, 2.0 * ik1s) *
            pow_real_base(3.0, 1.0 + a1 + a2 - 3.0 * ik1s) * (a2 - ik1s) *
            gamma(2.0 * a2) * gamma(6.0 * ik1s)) /
          ((a1 - 2.0 * a2) * gamma(3.0 * ik1s - a1 + a2) *
           gamma(3.0 * ik1s + a1 + a2)) *
          c2;
  amp.B = -(pow_real_base(2.0, -2.0 * ik1s) *
            pow_real_base(3.0, 1.0 + a1 + a2 + 3.0 * ik1s) * (a2 + ik1s) *
            gamma(2.0 * a2) * gamma(-6.0 * ik1s)) /
          ((a1 - 2.0 * a2) * gamma(-3.0 * ik1s - a1 + a2) *
           gamma(-3.0 * ik1s + a1 + a2)) *
          c2;
  amp.C = pow_real_base(2.0, 2.0 * a2) *
          pow_real_base(3.0, 1.0 + a1 - 2.0 * a2) /
          (a2 * (-a1 + 2.0 * a2)) * cfg.mass * cfg.sigma * cfg.sigma *
          cfg.v1 / (cfg.hbar * cfg.hbar) * c2;

  const double norm_a = std::norm(amp.A);
  amp.T = k.k2 * std::norm(amp.C) / (k.k1 * norm_a);
  amp.R = std::norm(amp.B) / norm_a;
  return amp;
}

double transmission(const PhysicalConfig& cfg, double E) {
  const WaveNumbers k = wavenumbers(cfg, E);
  const double s = kPi * std::abs(cfg.sigma);
  // All four hyperbolic-sine arguments are positive: 3k1 + k2 > 2kh follows
  // from (3k1 + k2)^2 - 4kh^2 = 3(k1 + k2)^2 > 0.
  const double log_t = log_sinh(6.0 * s * k.k1) + log_sinh(2.0 * s * k.k2) -
                       log_sinh(s * (3.0 * k.k1 + k.k2 - 2.0 * k.kh)) -
                       log_sinh(s * (3.0 * k.k1 + k.k2 + 2.0 * k.kh));
  return std::min(1.0, std::exp(log_t));
}

double reflection(const PhysicalConfig& cfg, double E) {
  return 1.0 - transmission(cfg, E);
}

double abrupt_step_t(double k1, double k2) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    if (k2 == 0.0 || k1 == 0.0) return 0.0;
    throw RegimeError("abrupt-step transmission needs positive wavenumbers");
  }
  const double sum = k1 + k2;
  return 4.0 * k1 * k2 / (sum * sum);
}

}  // namespace heunstep
