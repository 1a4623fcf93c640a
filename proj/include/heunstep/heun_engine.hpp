#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "heunstep/errors.hpp"
#include "heunstep/special_functions.hpp"
#include "heunstep/step_geometry.hpp"
#include "heunstep/types.hpp"

namespace heunstep {

// Branch choice for the two pre-factor exponents (each may independently take
// either sign of its square root).
enum class SignBranch { plus, minus };

// Parameters of the Heun reduction of the step-potential Schroedinger
// equation.  Two coexisting descriptions are carried:
//  - the (-2, 1, 0) singularity form with accessory parameter q, and
//  - the canonical (0, 1, a) form with a = 2/3 and accessory parameter q0,
// related by the linear substitution z = 3y - 2, q0 = (q + 2*alpha*beta)/3.
// The exponent parameters alpha..epsilon are identical in both forms.
struct HeunParameters {
  double a = 2.0 / 3.0;   // third finite singularity of the canonical form
  ComplexValue q0;        // canonical accessory parameter
  ComplexValue alpha;
  ComplexValue beta;
  ComplexValue gamma_;
  ComplexValue delta;
  ComplexValue epsilon;
  ComplexValue q;         // accessory parameter of the (-2, 1, 0) form
  ComplexValue alpha1;    // pre-factor exponent at z = -2
  ComplexValue alpha2;    // pre-factor exponent at z = 1
  SignBranch sign1 = SignBranch::plus;
  SignBranch sign2 = SignBranch::plus;

  ComplexValue alpha_beta() const { return alpha * beta; }
};

// Expansion of a solution over hypergeometric functions with shifted lower
// parameter; gauge c_0 = 1.
struct SeriesExpansion {
  std::vector<ComplexValue> coefficients;
  std::optional<std::size_t> terminated_at;
};

// The three coefficients of the recurrence R_n c_n + Q_{n-1} c_{n-1}
// + P_{n-2} c_{n-2} = 0 evaluated at one index.
struct RecurrenceCoefficients {
  ComplexValue R;
  ComplexValue Q;
  ComplexValue P;
};

// Construct the Heun parameters for the physical configuration and energy:
//   alpha1 = +-2i sigma sqrt((2m/hbar^2)(E - V0 + V1/2)),
//   alpha2 = +-i sigma sqrt((2m/hbar^2)(E - V0 - V1)),
//   gamma = 1 + 2 alpha1, delta = 1 + 2 alpha2, epsilon = -1,
//   alpha*beta = (alpha1+alpha2)^2 + 18 m sigma^2 (E - V0)/hbar^2,
//   q = -alpha1 + 2 alpha2,
// with alpha, beta recovered as the roots of t^2 - (gamma+delta+epsilon-1) t
// + alpha*beta, ordered by non-decreasing (real part, imaginary part).
// Complex square roots make every real energy admissible.
HeunParameters build_heun_parameters(const PhysicalConfig& cfg, double E,
                                     SignBranch sign1 = SignBranch::plus,
                                     SignBranch sign2 = SignBranch::plus);

// The termination quadratic q^2 + q(1 + gamma - 2 delta) - 2 alpha*beta;
// identically zero for physically constructed parameters.
ComplexValue termination_residual(const HeunParameters& p);

// Refresh the canonical-form data (a = 2/3, q0 = (q + 2 alpha*beta)/3) from
// the (-2, 1, 0) form, and the inverse direction.
HeunParameters canonical_map(const HeunParameters& p);
HeunParameters inverse_canonical_map(const HeunParameters& p);

// Recurrence coefficients at index n for the canonical-form parameters:
//   R_n = a n (alpha - gamma + n)(beta - gamma + n) / (gamma - n),
//   Q_n = -P_n + a n (alpha + beta - gamma + n) + a alpha*beta - q0,
//   P_n = (a - 1)(epsilon + n)(gamma - n - 1).
// Throws DegenerateGamma when gamma lies within 1e-10 of an integer in
// [0, n] (the shifted lower parameters of the expansion functions would hit
// a pole).
RecurrenceCoefficients recurrence_coefficients(std::size_t n,
                                               const HeunParameters& canonical);

// Run the recurrence with gauge c_0 = 1 (head relation R_1 c_1 + Q_0 c_0 = 0)
// up to n_max coefficients, detecting termination when two consecutive
// coefficients fall below 1e-10 * max |c_n|.  Requires n_max >= 3.
SeriesExpansion expand_series(const HeunParameters& canonical,
                              std::size_t n_max);

// The two roots q0 of the degree-two accessory-parameter equation that makes
// the expansion terminate at N = 1 for epsilon = -1:
//   q0^2 + q0 (gamma - 1 - a(alpha+beta) - 2 a alpha*beta)
//        + a alpha*beta (a(1+alpha+beta) - gamma + a alpha*beta) = 0.
std::pair<ComplexValue, ComplexValue> accessory_roots(
    const HeunParameters& canonical);

// First fundamental solution on z > 1:
//   u1 = 2F1(alpha,beta;gamma;(z+2)/3)
//      + (gamma-1)/(q - 2(delta-1)) * 2F1(alpha,beta;gamma-1;(z+2)/3),
// the argument lying on the cut [1, inf) and taken from above.
// Throws DegenerateCoefficient when |q - 2(delta-1)| < 1e-12.
ComplexValue fundamental_u1(const HeunParameters& p, double z);

// Second fundamental solution:
//   u2 = 2F1(alpha,beta;delta;(1-z)/3)
//      + q(1-delta)/(alpha*beta - q(1-delta)) * 2F1(alpha,beta;delta-1;(1-z)/3),
// the argument being <= 0 (off the cut).
// Throws DegenerateCoefficient when |alpha*beta - q(1-delta)| < 1e-12.
ComplexValue fundamental_u2(const HeunParameters& p, double z);

// Independent evaluation routes used for cross-validation.

// u1 rebuilt from the terminating expansion: canonical-map the parameters,
// run the recurrence, and sum c_n * 2F1(alpha,beta;gamma-n;(z+2)/3).
ComplexValue fundamental_u1_series(const HeunParameters& p, double z);

// u1 and u2 as single generalized hypergeometric (3F2) functions,
//   u1 ~ 3F2(alpha,beta,1+2ab/q; 2ab/q,gamma; (z+2)/3),
//   u2 ~ 3F2(alpha,beta,1-ab/q; -ab/q,delta; (1-z)/3),   ab = alpha*beta,
// each multiplied by the constant that matches the two-term normalization
// (the value of the two-term form at the argument's origin).  Outside the
// 3F2 series disc the same function is continued through its contiguous
// two-term 2F1 reduction.
ComplexValue fundamental_u1_clausen(const HeunParameters& p, double z);
ComplexValue fundamental_u2_clausen(const HeunParameters& p, double z);

namespace detail {

// Argument-level entry points used by the wavefunction assembly, which must
// feed loss-free arguments ((1-z)/3 = -zm1/3) straight through.
ComplexValue u1_from_argument(const HeunParameters& p, BranchedArgument y);
ComplexValue u2_from_argument(const HeunParameters& p, ComplexValue w);

}  // namespace detail

}  // namespace heunstep
