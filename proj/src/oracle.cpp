#include "heunstep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "heunstep/errors.hpp"

namespace heunstep {

namespace {

constexpr double kFlatnessDesign = 1e-12;    // targeted by default_grid
constexpr double kFlatnessRequired = 1e-10;  // enforced before integrating
constexpr double kMinSpan = 40.0;            // tail span in units of |sigma|
constexpr double kStepFactor = 0.01;         // phase advance per RK4 step
constexpr double kHalvingTol = 1e-6;
constexpr double kDecompositionTol = 1e-4;
constexpr long kMaxSteps = 20'000'000;

double potential_scale(const PhysicalConfig& cfg) {
  return std::max({std::abs(cfg.v0), std::abs(cfg.v1), 1.0});
}

// Wavenumbers on both tails without the above-barrier restriction the
// analytic module imposes; a closed channel is reported as 0.
WaveNumbers open_channel_wavenumbers(const PhysicalConfig& cfg, double E) {
  const double tm = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  WaveNumbers k;
  const double k1sq = tm * (E - cfg.v0);
  const double k2sq = tm * (E - cfg.v0 - cfg.v1);
  const double khsq = tm * (E - cfg.v0 + 0.5 * cfg.v1);
  k.k1 = k1sq > 0.0 ? std::sqrt(k1sq) : 0.0;
  k.k2 = k2sq > 0.0 ? std::sqrt(k2sq) : 0.0;
  k.kh = khsq > 0.0 ? std::sqrt(khsq) : 0.0;
  return k;
}

void require_scattering_regime(const PhysicalConfig& cfg, double E) {
  validate_config(cfg);
  if (cfg.sigma >= 0.0) {
    throw RegimeError("the reference integrator assumes sigma < 0");
  }
  if (!(E > cfg.v0)) {
    throw RegimeError("the incident channel is closed (E <= V0)");
  }
}

}  // namespace

IntegrationGrid default_grid(const PhysicalConfig& cfg, double E) {
  require_scattering_regime(cfg, E);
  const double tol_abs = kFlatnessDesign * potential_scale(cfg);
  // V - V0 ~ |V1| 2^{-2/3} e^{-s/3} on the left tail and
  // V - (V0+V1) ~ |V1| (4/9) e^{-|s|} on the right tail, with
  // s = (x - x0)/sigma.
  double s_left = kMinSpan;
  double s_right = kMinSpan;
  if (cfg.v1 != 0.0) {
    const double v1 = std::abs(cfg.v1);
    s_left = std::max(
        s_left, 3.0 * std::log(std::pow(2.0, -2.0 / 3.0) * v1 / tol_abs));
    s_right = std::max(s_right, std::log((4.0 / 9.0) * v1 / tol_abs));
  }
  IntegrationGrid grid;
  grid.x_left = cfg.x0 + cfg.sigma * s_left;
  grid.x_right = cfg.x0 - cfg.sigma * s_right;

  const double tm = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  const double k_fast =
      std::max({std::sqrt(tm * (E - cfg.v0)),
                std::sqrt(tm * std::abs(E - cfg.v0 - cfg.v1)),
                1.0 / std::abs(cfg.sigma)});
  const double width = grid.x_right - grid.x_left;
  const long n = static_cast<long>(std::ceil(width / (kStepFactor / k_fast)));
  grid.step = width / static_cast<double>(n);
  return grid;
}

IntegrationGrid integrate_schrodinger(const PhysicalConfig& cfg, double E,
                                      IntegrationGrid grid) {
  require_scattering_regime(cfg, E);
  if (!(grid.x_left < grid.x_right) || !(grid.step > 0.0)) {
    throw ConfigError("integration grid is malformed");
  }
  const double width = grid.x_right - grid.x_left;
  const long n = std::lround(width / grid.step);
  if (n < 2 || std::abs(static_cast<double>(n) * grid.step - width) >
                   1e-9 * width) {
    throw ConfigError("grid step must divide the grid width");
  }
  if (n > kMaxSteps) {
    throw ConfigError("integration grid is too fine");
  }
  const double scale = potential_scale(cfg);
  if (std::abs(potential_v(grid.x_left, cfg) - cfg.v0) >
          kFlatnessRequired * scale ||
      std::abs(potential_v(grid.x_right, cfg) - (cfg.v0 + cfg.v1)) >
          kFlatnessRequired * scale) {
    throw ConfigError(
        "grid endpoints do not reach the flat tails of the potential");
  }

  const double tm = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  const double h = grid.step;
  auto node_x = [&](long i) {
    return grid.x_left + static_cast<double>(i) * h;
  };
  auto w_of = [&](double x) { return tm * (potential_v(x, cfg) - E); };

  // Right-edge boundary condition.
  const double xr = node_x(n);
  const double k2sq = tm * (E - cfg.v0 - cfg.v1);
  ComplexValue psi, dpsi;
  if (k2sq > 0.0) {
    const double k2 = std::sqrt(k2sq);
    psi = std::exp(ComplexValue{0.0, k2 * xr});
    dpsi = ComplexValue{0.0, k2} * psi;
  } else {
    // Decaying tail, normalized at the right edge so the backward-growing
    // solution starts at unit magnitude.
    const double kappa = std::sqrt(-k2sq);
    psi = ComplexValue{1.0, 0.0};
    dpsi = ComplexValue{-kappa, 0.0};
  }

  grid.samples.assign(static_cast<std::size_t>(n) + 1, GridSample{});
  grid.samples[static_cast<std::size_t>(n)] = {xr, psi, dpsi};

  // Classic RK4 on (psi, psi')' = (psi', w(x) psi), stepping by -h.
  for (long i = n; i > 0; --i) {
    const double x = node_x(i);
    const double w0 = w_of(x);
    const double wm = w_of(x - 0.5 * h);
    const double w1 = w_of(x - h);
    const ComplexValue k1p = dpsi;
    const ComplexValue k1f = w0 * psi;
    const ComplexValue k2p = dpsi - 0.5 * h * k1f;
    const ComplexValue k2f = wm * (psi - 0.5 * h * k1p);
    const ComplexValue k3p = dpsi - 0.5 * h * k2f;
    const ComplexValue k3f = wm * (psi - 0.5 * h * k2p);
    const ComplexValue k4p = dpsi - h * k3f;
    const ComplexValue k4f = w1 * (psi - h * k3p);
    psi -= h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dpsi -= h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    grid.samples[static_cast<std::size_t>(i - 1)] = {node_x(i - 1), psi,
                                                     dpsi};
  }
  if (!std::isfinite(psi.real()) || !std::isfinite(psi.imag())) {
    throw OverflowGuard(
        "backward integration overflowed (evanescent growth across the "
        "grid); shrink the grid width");
  }
  return grid;
}

std::pair<double, double> extract_rt(const IntegrationGrid& grid,
                                     const WaveNumbers& k) {
  if (grid.samples.size() < 2) {
    throw ConfigError("grid has not been integrated");
  }
  if (!(k.k1 > 0.0)) {
    throw RegimeError("the incident channel must be open to decompose");
  }
  const ComplexValue ik1{0.0, k.k1};
  auto decompose = [&](const GridSample& s) {
    const ComplexValue phase = std::exp(ik1 * s.x);
    const ComplexValue a = (s.psi + s.dpsi / ik1) / (2.0 * phase);
    const ComplexValue b = 0.5 * phase * (s.psi - s.dpsi / ik1);
    return std::pair{a, b};
  };
  const auto [a0, b0] = decompose(grid.samples[0]);
  const auto [a1, b1] = decompose(grid.samples[1]);
  const double rel =
      (std::abs(a0 - a1) + std::abs(b0 - b1)) / (std::abs(a0) + std::abs(b0));
  if (!(rel <= kDecompositionTol)) {
    throw DecompositionUnstable(
        "plane-wave decomposition drifts between adjacent left-edge nodes");
  }
  const double norm_a = std::norm(a0);
  const double R = std::norm(b0) / norm_a;
  const double T = k.k2 > 0.0 ? k.k2 / (k.k1 * norm_a) : 0.0;
  return {R, T};
}

OracleResult oracle_transmission(const PhysicalConfig& cfg, double E) {
  const IntegrationGrid base = default_grid(cfg, E);
  IntegrationGrid halved = base;
  halved.step *= 0.5;

  const WaveNumbers k = open_channel_wavenumbers(cfg, E);
  const auto [r_coarse, t_coarse] =
      extract_rt(integrate_schrodinger(cfg, E, base), k);
  const auto [r_fine, t_fine] =
      extract_rt(integrate_schrodinger(cfg, E, halved), k);

  OracleResult result;
  result.T = t_fine;
  result.R = r_fine;
  result.halving_delta =
      std::max(std::abs(t_fine - t_coarse), std::abs(r_fine - r_coarse));
  if (!(result.halving_delta <= kHalvingTol)) {
    throw StepTooLarge("halving the RK4 step still moves the result");
  }
  return result;
}

}  // namespace heunstep
