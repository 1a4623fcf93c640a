#include "heunstep/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace heunstep {

namespace {

constexpr double kPi = std::numbers::pi;

// Series stopping rule: a term must fall below kSeriesRelTol of the partial
// sum for kConsecutiveSmall consecutive terms (guards against false
// convergence when a parameter nearly cancels a term), capped at kTermCap.
constexpr double kSeriesRelTol = 1e-16;
constexpr int kConsecutiveSmall = 3;
constexpr int kTermCap = 20000;

constexpr double kGammaPoleTol = 1e-12;   // gamma pole guard
constexpr double kPolynomialTol = 1e-12;  // upper-parameter polynomial cutoff
constexpr double kLowerParamTol = 1e-10;  // lower-parameter pole guard
constexpr double kMapDegeneracyTol = 1e-8;  // transformation gamma-difference guard
constexpr double kNudge = 1e-9;             // degeneracy nudge magnitude
constexpr int kMaxDepth = 16;
constexpr double kQualityAccept = 3.0;  // peak/|sum| accepted without retry

// ---------------------------------------------------------------------------
// Gamma function: Lanczos approximation, g = 607/128 with 15 coefficients.
// ---------------------------------------------------------------------------

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeff = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

ComplexValue gamma_lanczos_right_half(ComplexValue z) {
  // Valid for Re z >= 1/2.
  z -= 1.0;
  ComplexValue sum = kLanczosCoeff[0];
  for (std::size_t k = 1; k < kLanczosCoeff.size(); ++k) {
    sum += kLanczosCoeff[k] / (z + static_cast<double>(k));
  }
  const ComplexValue t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

// ---------------------------------------------------------------------------
// Branch-aware elementary helpers.
//
// All powers use the principal branch (-pi < arg <= pi).  When a base lands
// exactly on the negative real axis, the sign of its vanishing imaginary part
// is dictated by which side of the cut [1, inf) the original argument
// approaches from; callers pass that sign explicitly.
// ---------------------------------------------------------------------------

ComplexValue log_signed(ComplexValue w, int negative_axis_sign) {
  if (w.imag() == 0.0 && w.real() < 0.0) {
    return {std::log(-w.real()), negative_axis_sign >= 0 ? kPi : -kPi};
  }
  return std::log(w);
}

ComplexValue pow_signed(ComplexValue base, ComplexValue expo,
                        int negative_axis_sign) {
  if (expo == ComplexValue{}) return {1.0, 0.0};
  return std::exp(expo * log_signed(base, negative_axis_sign));
}

// Sign of the infinitesimal imaginary part of (1 - y) and (-y) for an
// argument y approaching the real interval (1, inf) from `side`:
// y = t + i*0+ gives 1 - y = (1-t) - i*0 and -y = -t - i*0, i.e. sign -1.
int negative_axis_sign_for(CutSide side) {
  return side == CutSide::above ? -1 : +1;
}

// ---------------------------------------------------------------------------
// Power series
// ---------------------------------------------------------------------------

// A value together with the largest absolute magnitude that appeared among
// the additive contributions forming it.  peak/|value| measures how much
// cancellation the evaluation suffered: the relative rounding error is about
// (peak/|value|) * machine epsilon, which drives transformation selection.
struct Evaluated {
  ComplexValue value;
  double peak;
};

Evaluated scaled(Evaluated e, ComplexValue factor) {
  return {e.value * factor, e.peak * std::abs(factor)};
}

Evaluated added(Evaluated lhs, Evaluated rhs) {
  return {lhs.value + rhs.value, std::max(lhs.peak, rhs.peak)};
}

// Compensated (Kahan) accumulator so that long sums contribute only the
// rounding of their peak term, not of every term.
struct CompensatedSum {
  ComplexValue total;
  ComplexValue comp{};

  void add(ComplexValue term) {
    const ComplexValue t1 = term - comp;
    const ComplexValue t2 = total + t1;
    comp = (t2 - total) - t1;
    total = t2;
  }
};

// Direct 2F1 power series; caller guarantees |y| < 1 (or a terminating
// polynomial) and that c is not a lower-parameter pole.
Evaluated series_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                     ComplexValue y) {
  ComplexValue term{1.0, 0.0};
  CompensatedSum sum{{1.0, 0.0}};
  double peak = 1.0;
  int small_count = 0;
  for (int n = 0; n < kTermCap; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * y;
    sum.add(term);
    peak = std::max(peak, std::abs(term));
    if (std::abs(term) <= kSeriesRelTol * std::abs(sum.total)) {
      if (++small_count >= kConsecutiveSmall) return {sum.total, peak};
    } else {
      small_count = 0;
    }
  }
  throw NonConvergence(
      "2F1 series did not reach tolerance within the term cap");
}

// Terminating 2F1 when an upper parameter is a non-positive integer: sum the
// finite polynomial exactly (valid for every argument and branch).
Evaluated polynomial_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                         ComplexValue y, int degree) {
  ComplexValue term{1.0, 0.0};
  CompensatedSum sum{{1.0, 0.0}};
  double peak = 1.0;
  for (int n = 0; n < degree; ++n) {
    const double dn = static_cast<double>(n);
    const ComplexValue denom = (c + dn) * (dn + 1.0);
    if (std::abs(denom) < kLowerParamTol) {
      throw ParameterDegeneracy(
          "2F1 lower parameter hits a pole inside the terminating sum");
    }
    term *= (a + dn) * (b + dn) / denom * y;
    sum.add(term);
    peak = std::max(peak, std::abs(term));
  }
  return {sum.total, peak};
}

// Degree of the terminating polynomial if an upper parameter is within
// kPolynomialTol of a non-positive integer; -1 otherwise.
int polynomial_degree(ComplexValue a, ComplexValue b) {
  int degree = -1;
  for (ComplexValue u : {a, b}) {
    const double r = std::round(u.real());
    if (r <= 0.0 && std::abs(u - ComplexValue(r, 0.0)) < kPolynomialTol) {
      const int d = static_cast<int>(-r);
      if (degree < 0 || d < degree) degree = d;
    }
  }
  return degree;
}

// Gauss summation at unit argument: 2F1(a,b;c;1) for Re(c-a-b) > 0.
ComplexValue gauss_summation(ComplexValue a, ComplexValue b, ComplexValue c) {
  if ((c - a - b).real() <= 0.0) {
    throw NonConvergence(
        "2F1 at unit argument diverges unless Re(c-a-b) > 0");
  }
  return gamma(c) * gamma(c - a - b) * reciprocal_gamma(c - a) *
         reciprocal_gamma(c - b);
}

// ---------------------------------------------------------------------------
// Fractional-linear transformation engine
// ---------------------------------------------------------------------------

using detail::FractionalLinearMap;

Evaluated eval_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                   ComplexValue y, CutSide side, int depth);

struct MapCandidate {
  FractionalLinearMap map;
  double modulus;
  bool needs_cab;  // requires c-a-b away from integers
  bool needs_ab;   // requires a-b away from integers
};

Evaluated apply_map(FractionalLinearMap map, ComplexValue a, ComplexValue b,
                    ComplexValue c, ComplexValue y, CutSide side, int depth) {
  const int axis_sign = negative_axis_sign_for(side);
  switch (map) {
    case FractionalLinearMap::direct:
      return series_2f1(a, b, c, y);

    case FractionalLinearMap::pfaff: {
      // (1-y)^(-a) 2F1(a, c-b; c; y/(y-1)).  A real-coefficient Moebius map
      // flips the half-plane: an argument on the cut reappears on the cut
      // approached from the opposite side.
      const ComplexValue w = y / (y - 1.0);
      const CutSide flipped =
          side == CutSide::above ? CutSide::below : CutSide::above;
      return scaled(eval_2f1(a, c - b, c, w, flipped, depth + 1),
                    pow_signed(1.0 - y, -a, axis_sign));
    }

    case FractionalLinearMap::one_minus: {
      const ComplexValue w = 1.0 - y;
      const Evaluated t1 = scaled(
          eval_2f1(a, b, a + b - c + 1.0, w, side, depth + 1),
          gamma(c) * gamma(c - a - b) * reciprocal_gamma(c - a) *
              reciprocal_gamma(c - b));
      const Evaluated t2 = scaled(
          eval_2f1(c - a, c - b, c - a - b + 1.0, w, side, depth + 1),
          gamma(c) * gamma(a + b - c) * reciprocal_gamma(a) *
              reciprocal_gamma(b) * pow_signed(w, c - a - b, axis_sign));
      return added(t1, t2);
    }

    case FractionalLinearMap::reciprocal: {
      const ComplexValue w = 1.0 / y;
      const Evaluated t1 = scaled(
          eval_2f1(a, a - c + 1.0, a - b + 1.0, w, side, depth + 1),
          gamma(c) * gamma(b - a) * reciprocal_gamma(b) *
              reciprocal_gamma(c - a) * pow_signed(-y, -a, axis_sign));
      const Evaluated t2 = scaled(
          eval_2f1(b, b - c + 1.0, b - a + 1.0, w, side, depth + 1),
          gamma(c) * gamma(a - b) * reciprocal_gamma(a) *
              reciprocal_gamma(c - b) * pow_signed(-y, -b, axis_sign));
      return added(t1, t2);
    }

    case FractionalLinearMap::reciprocal_one_minus: {
      const ComplexValue w = 1.0 / (1.0 - y);
      const Evaluated t1 = scaled(
          eval_2f1(a, c - b, a - b + 1.0, w, side, depth + 1),
          gamma(c) * gamma(b - a) * reciprocal_gamma(b) *
              reciprocal_gamma(c - a) * pow_signed(1.0 - y, -a, axis_sign));
      const Evaluated t2 = scaled(
          eval_2f1(b, c - a, b - a + 1.0, w, side, depth + 1),
          gamma(c) * gamma(a - b) * reciprocal_gamma(a) *
              reciprocal_gamma(c - b) * pow_signed(1.0 - y, -b, axis_sign));
      return added(t1, t2);
    }

    case FractionalLinearMap::one_minus_reciprocal: {
      const ComplexValue w = 1.0 - 1.0 / y;
      const Evaluated t1 = scaled(
          eval_2f1(a, a - c + 1.0, a + b - c + 1.0, w, side, depth + 1),
          gamma(c) * gamma(c - a - b) * reciprocal_gamma(c - a) *
              reciprocal_gamma(c - b) * pow_signed(y, -a, axis_sign));
      const Evaluated t2 = scaled(
          eval_2f1(c - a, 1.0 - a, c - a - b + 1.0, w, side, depth + 1),
          gamma(c) * gamma(a + b - c) * reciprocal_gamma(a) *
              reciprocal_gamma(b) * pow_signed(1.0 - y, c - a - b, axis_sign) *
              pow_signed(y, a - c, axis_sign));
      return added(t1, t2);
    }
  }
  throw NonConvergence("unreachable transformation selector");
}

Evaluated eval_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                   ComplexValue y, CutSide side, int depth) {
  if (depth > kMaxDepth) {
    throw NonConvergence(
        "2F1 transformation recursion exceeded its depth bound");
  }

  // Terminating polynomial: exact for any argument, immune to branch issues.
  const int degree = polynomial_degree(a, b);
  if (degree >= 0) return polynomial_2f1(a, b, c, y, degree);

  if (detail::near_nonpositive_integer(c, kLowerParamTol)) {
    throw ParameterDegeneracy(
        "2F1 lower parameter is a non-positive integer");
  }

  if (y == ComplexValue{}) return {{1.0, 0.0}, 1.0};
  if (std::abs(y - 1.0) < 1e-14) {
    const ComplexValue v = gauss_summation(a, b, c);
    return {v, std::abs(v)};
  }

  const double my = std::abs(y);

  const bool cab_clean = !detail::near_integer(c - a - b, kMapDegeneracyTol);
  const bool ab_clean = !detail::near_integer(a - b, kMapDegeneracyTol);

  std::array<MapCandidate, 6> candidates = {{
      {FractionalLinearMap::direct, my, false, false},
      {FractionalLinearMap::pfaff, std::abs(y / (y - 1.0)), false, false},
      {FractionalLinearMap::one_minus, std::abs(1.0 - y), true, false},
      {FractionalLinearMap::reciprocal, 1.0 / my, false, true},
      {FractionalLinearMap::reciprocal_one_minus, std::abs(1.0 / (1.0 - y)),
       false, true},
      {FractionalLinearMap::one_minus_reciprocal, std::abs(1.0 - 1.0 / y),
       true, false},
  }};
  const auto is_clean = [&](const MapCandidate& cand) {
    return (!cand.needs_cab || cab_clean) && (!cand.needs_ab || ab_clean);
  };

  // Nested evaluations keep the old deterministic rule: smallest transformed
  // argument among non-degenerate maps.  The strictly decreasing modulus
  // guarantees the recursion terminates.
  if (depth > 0) {
    if (my <= 0.5) return series_2f1(a, b, c, y);
    const MapCandidate* best_clean = nullptr;
    for (const auto& cand : candidates) {
      if (is_clean(cand) &&
          (!best_clean || cand.modulus < best_clean->modulus)) {
        best_clean = &cand;
      }
    }
    if (best_clean && best_clean->modulus < 1.0) {
      return apply_map(best_clean->map, a, b, c, y, side, depth);
    }
    throw NonConvergence(
        "no admissible transformation brings the 2F1 argument inside the "
        "convergence disc");
  }

  // Top-level call: the smallest transformed argument is not always the most
  // accurate route (large imaginary parameters can make a short series
  // cancel heavily), so try clean candidates in modulus order and accept the
  // first whose peak-to-sum ratio keeps the rounding error near machine
  // epsilon; otherwise keep the least-cancelling one.
  std::sort(candidates.begin(), candidates.end(),
            [](const MapCandidate& lhs, const MapCandidate& rhs) {
              return lhs.modulus < rhs.modulus;
            });
  bool found = false;
  Evaluated best{};
  double best_quality = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    if (!is_clean(cand) || cand.modulus > 0.98) continue;
    const Evaluated e = apply_map(cand.map, a, b, c, y, side, depth);
    const double mag = std::abs(e.value);
    const double quality =
        mag > 0.0 ? e.peak / mag : std::numeric_limits<double>::infinity();
    if (!found || quality < best_quality) {
      found = true;
      best = e;
      best_quality = quality;
    }
    if (quality <= kQualityAccept) return best;
  }
  if (found) return best;

  // Only degenerate transformations reach the argument.  Nudge a parameter
  // off the integer lattice and force the best such transformation, instead
  // of implementing the logarithmic limit formulas; the two near-pole gamma
  // terms cancel to the finite limit with a relative error of roughly
  // <= 1e-7 in the worst case.
  const MapCandidate& forced = candidates.front();
  if (forced.modulus <= 0.98) {
    const ComplexValue nudge{kNudge, kNudge};
    return apply_map(forced.map, a + nudge, b, c, y, side, depth + 1);
  }

  // No transformation lands well inside the unit disc (|y| near the two
  // points exp(+-i*pi/3) where all six moduli approach 1).  Fall back to the
  // best clean candidate and let the term cap police convergence.
  for (const auto& cand : candidates) {
    if (is_clean(cand) && cand.modulus < 1.0) {
      return apply_map(cand.map, a, b, c, y, side, depth);
    }
  }
  throw NonConvergence(
      "no admissible transformation brings the 2F1 argument inside the "
      "convergence disc");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

namespace detail {

bool near_integer(ComplexValue z, double tol) {
  const double r = std::round(z.real());
  return std::abs(z - ComplexValue(r, 0.0)) < tol;
}

bool near_nonpositive_integer(ComplexValue z, double tol) {
  const double r = std::round(z.real());
  if (r > 0.0) return false;
  return std::abs(z - ComplexValue(r, 0.0)) < tol;
}

ComplexValue gauss_2f1_via(FractionalLinearMap map, ComplexValue a,
                           ComplexValue b, ComplexValue c,
                           BranchedArgument y) {
  return apply_map(map, a, b, c, y.value, y.cut_side, 0).value;
}

}  // namespace detail

ComplexValue gamma(ComplexValue zc) {
  if (detail::near_nonpositive_integer(zc, kGammaPoleTol)) {
    throw PoleError("gamma evaluated at a non-positive integer");
  }
  if (zc.real() < 0.5) {
    // Reflection: gamma(z) * gamma(1-z) = pi / sin(pi z).
    return kPi / (std::sin(kPi * zc) * gamma_lanczos_right_half(1.0 - zc));
  }
  return gamma_lanczos_right_half(zc);
}

ComplexValue reciprocal_gamma(ComplexValue zc) {
  if (detail::near_nonpositive_integer(zc, kGammaPoleTol)) {
    return {0.0, 0.0};
  }
  return 1.0 / gamma(zc);
}

ComplexValue gauss_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                       BranchedArgument y) {
  return eval_2f1(a, b, c, y.value, y.cut_side, 0).value;
}

ComplexValue clausen_3f2(ComplexValue a1, ComplexValue a2, ComplexValue a3,
                         ComplexValue b1, ComplexValue b2,
                         BranchedArgument y) {
  for (ComplexValue lower : {b1, b2}) {
    if (detail::near_nonpositive_integer(lower, kLowerParamTol)) {
      throw ParameterDegeneracy(
          "3F2 lower parameter is a non-positive integer");
    }
  }

  // Terminating polynomial in any upper parameter is exact for all y.
  int degree = -1;
  for (ComplexValue u : {a1, a2, a3}) {
    const double r = std::round(u.real());
    if (r <= 0.0 && std::abs(u - ComplexValue(r, 0.0)) < kPolynomialTol) {
      const int d = static_cast<int>(-r);
      if (degree < 0 || d < degree) degree = d;
    }
  }

  const ComplexValue w = y.value;
  if (degree < 0 && std::abs(w) >= 1.0) {
    throw NonConvergence("3F2 argument outside the series domain |y| < 1");
  }

  ComplexValue term{1.0, 0.0};
  CompensatedSum sum{{1.0, 0.0}};
  int small_count = 0;
  const int cap = degree >= 0 ? degree : kTermCap;
  for (int n = 0; n < cap; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a1 + dn) * (a2 + dn) * (a3 + dn) /
            ((b1 + dn) * (b2 + dn) * (dn + 1.0)) * w;
    sum.add(term);
    if (degree < 0) {
      if (std::abs(term) <= kSeriesRelTol * std::abs(sum.total)) {
        if (++small_count >= kConsecutiveSmall) return sum.total;
      } else {
        small_count = 0;
      }
    }
  }
  if (degree >= 0) return sum.total;
  throw NonConvergence(
      "3F2 series did not reach tolerance within the term cap");
}

}  // namespace heunstep
