#pragma once

#include "heunstep/errors.hpp"
#include "heunstep/heun_engine.hpp"
#include "heunstep/step_geometry.hpp"
#include "heunstep/types.hpp"

namespace heunstep {

// Asymptotic wavenumbers of the above-barrier scattering problem:
//   k1 at the low (incident) side, k2 at the high (transmitted) side, and the
//   auxiliary kh at the half-height energy.  They obey the exact identity
//   3 k1^2 = 2 kh^2 + k2^2.
struct WaveNumbers {
  double k1;
  double k2;
  double kh;
};

// Asymptotic amplitudes of the scattering solution normalized to a single
// transmitted plane wave: psi -> A e^{+i k1 x} + B e^{-i k1 x} on the low
// side and psi -> C e^{+i k2 x} on the high side, together with the
// transmission and reflection coefficients derived from them.
struct ScatteringAmplitudes {
  ComplexValue A;
  ComplexValue B;
  ComplexValue C;
  double T;
  double R;
};

// Wavenumbers for E strictly above the barrier top V0 + V1; throws
// RegimeError otherwise (the analytic module does not cover other regimes).
WaveNumbers wavenumbers(const PhysicalConfig& cfg, double E);

// General solution psi(x) = (z+2)^alpha1 (z-1)^alpha2 (c1 u1 + c2 u2) with
// z = z(x) and principal-branch powers (the default plus/plus exponent
// branches).  Valid for any real energy for which the solution parameters
// avoid the degenerate denominators; degeneracy errors propagate.
ComplexValue wavefunction_psi(double x, const PhysicalConfig& cfg, double E,
                              ComplexValue c1, ComplexValue c2);

// Closed-form asymptotic amplitudes for the transmitted-wave solution
// (c1 = 0), linear in c2.  Derived for sigma < 0 and E > V0 + V1 with a
// nonzero step; throws RegimeError outside that regime.
ScatteringAmplitudes amplitudes(const PhysicalConfig& cfg, double E,
                                ComplexValue c2 = {1.0, 0.0});

// Closed-form transmission coefficient
//   T = sinh(6 pi s k1) sinh(2 pi s k2) /
//       ( sinh[pi s (3k1 + k2 - 2kh)] sinh[pi s (3k1 + k2 + 2kh)] ),
// s = |sigma| (the expression is even in sigma), evaluated in log space so
// that large |sigma| k never overflows.  Requires E > V0 + V1.
double transmission(const PhysicalConfig& cfg, double E);

// R = 1 - T.
double reflection(const PhysicalConfig& cfg, double E);

// Transmission above a discontinuous step: 4 k1 k2 / (k1 + k2)^2.
double abrupt_step_t(double k1, double k2);

}  // namespace heunstep
