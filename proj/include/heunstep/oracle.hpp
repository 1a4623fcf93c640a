#pragma once

// Independent numerical reference for the scattering problem: a fixed-step
// RK4 integrator for the one-dimensional stationary Schrodinger equation
//   psi'' = (2m/hbar^2) (V(x) - E) psi
// integrated backwards from a pure transmitted (or decaying) wave on the
// right, plus plane-wave decomposition on the flat left tail.  This module
// deliberately shares no math with the closed-form scattering code beyond
// the potential itself, so agreement between the two is meaningful.

#include <utility>
#include <vector>

#include "heunstep/scattering.hpp"
#include "heunstep/step_geometry.hpp"
#include "heunstep/types.hpp"

namespace heunstep {

struct GridSample {
  double x = 0.0;
  ComplexValue psi{};
  ComplexValue dpsi{};
};

// Uniform integration grid.  `step` must divide `x_right - x_left` into an
// integral number of RK4 steps; `samples` is filled (leftmost first) by
// integrate_schrodinger.
struct IntegrationGrid {
  double x_left = 0.0;
  double x_right = 0.0;
  double step = 0.0;
  std::vector<GridSample> samples;
};

// Builds a grid whose endpoints sit on the flat tails of the potential
// (deviation below 1e-12 * max(|V0|, |V1|, 1)) and whose step resolves the
// fastest oscillation: step = 0.01 / max(k_left, k_right, 1/|sigma|),
// rounded down so it divides the width exactly.  Requires sigma < 0 and an
// open incident channel (E > V0).
IntegrationGrid default_grid(const PhysicalConfig& cfg, double E);

// Integrates backwards across `grid` starting from the right-edge boundary
// condition: a unit-amplitude transmitted wave exp(i k2 x) when the right
// channel is open (E > V0 + V1), a decaying exponential otherwise.  Returns
// the grid with `samples` populated at every node.  Throws ConfigError when
// the grid is malformed or its endpoints are not on the flat tails, and
// RegimeError when sigma >= 0 or E <= V0.
IntegrationGrid integrate_schrodinger(const PhysicalConfig& cfg, double E,
                                      IntegrationGrid grid);

// Decomposes the two leftmost samples into incident/reflected plane waves
// A exp(i k1 x) + B exp(-i k1 x) and returns {R, T}.  The transmitted
// amplitude is unity by construction of the boundary condition, so
// T = k2 / (k1 |A|^2) when the right channel is open and 0 otherwise.
// Throws DecompositionUnstable when the two decompositions disagree by more
// than 1e-4 in relative terms (the tail was not flat enough).
std::pair<double, double> extract_rt(const IntegrationGrid& grid,
                                     const WaveNumbers& k);

struct OracleResult {
  double T = 0.0;
  double R = 0.0;
  // |change| in (T, R) when the step is halved; certifies convergence.
  double halving_delta = 0.0;
};

// End-to-end reference transmission: integrates on the default grid and
// again with the step halved, and returns the finer result.  Throws
// StepTooLarge if halving moves T or R by more than 1e-6.
OracleResult oracle_transmission(const PhysicalConfig& cfg, double E);

}  // namespace heunstep
