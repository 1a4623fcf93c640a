#include "heunstep/heun_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heunstep {

namespace {

constexpr double kCoefficientTol = 1e-12;   // degenerate-denominator guard
constexpr double kGammaIntegerTol = 1e-10;  // expansion-parameter guard
constexpr double kTerminationTol = 1e-10;   // relative coefficient cutoff

double branch_sign(SignBranch s) {
  return s == SignBranch::plus ? 1.0 : -1.0;
}

}  // namespace

HeunParameters build_heun_parameters(const PhysicalConfig& cfg, double E,
                                     SignBranch sign1, SignBranch sign2) {
  validate_config(cfg);
  const double two_m_over_h2 = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  const ComplexValue i{0.0, 1.0};

  const ComplexValue root_half =
      std::sqrt(ComplexValue(two_m_over_h2 * (E - cfg.v0 + 0.5 * cfg.v1), 0.0));
  const ComplexValue root_step =
      std::sqrt(ComplexValue(two_m_over_h2 * (E - cfg.v0 - cfg.v1), 0.0));

  HeunParameters p;
  p.sign1 = sign1;
  p.sign2 = sign2;
  p.alpha1 = branch_sign(sign1) * 2.0 * i * cfg.sigma * root_half;
  p.alpha2 = branch_sign(sign2) * i * cfg.sigma * root_step;
  p.gamma_ = 1.0 + 2.0 * p.alpha1;
  p.delta = 1.0 + 2.0 * p.alpha2;
  p.epsilon = -1.0;
  p.q = -p.alpha1 + 2.0 * p.alpha2;

  const ComplexValue sum12 = p.alpha1 + p.alpha2;
  const ComplexValue product =
      sum12 * sum12 +
      9.0 * cfg.sigma * cfg.sigma * two_m_over_h2 * (E - cfg.v0);

  // alpha + beta follows from the exponent-sum constraint
  // 1 + alpha + beta = gamma + delta + epsilon, giving 2(alpha1 + alpha2).
  const ComplexValue sum_ab = 2.0 * sum12;
  const ComplexValue disc = std::sqrt(sum_ab * sum_ab - 4.0 * product);
  ComplexValue r1 = 0.5 * (sum_ab - disc);
  ComplexValue r2 = 0.5 * (sum_ab + disc);
  // Deterministic order: non-decreasing real part, then imaginary part.
  if (r1.real() > r2.real() ||
      (r1.real() == r2.real() && r1.imag() > r2.imag())) {
    std::swap(r1, r2);
  }
  p.alpha = r1;
  p.beta = r2;

  p.a = 2.0 / 3.0;
  p.q0 = (p.q + 2.0 * product) / 3.0;
  return p;
}

ComplexValue termination_residual(const HeunParameters& p) {
  return p.q * p.q + p.q * (1.0 + p.gamma_ - 2.0 * p.delta) -
         2.0 * p.alpha_beta();
}

HeunParameters canonical_map(const HeunParameters& p) {
  HeunParameters out = p;
  out.a = 2.0 / 3.0;
  out.q0 = (p.q + 2.0 * p.alpha_beta()) / 3.0;
  return out;
}

HeunParameters inverse_canonical_map(const HeunParameters& p) {
  HeunParameters out = p;
  out.q = 3.0 * p.q0 - 2.0 * p.alpha_beta();
  return out;
}

RecurrenceCoefficients recurrence_coefficients(std::size_t n,
                                               const HeunParameters& pc) {
  for (std::size_t k = 0; k <= n; ++k) {
    if (std::abs(pc.gamma_ - static_cast<double>(k)) < kGammaIntegerTol) {
      throw DegenerateGamma(
          "expansion parameter gamma is too close to an integer in [0, n]");
    }
  }
  const double dn = static_cast<double>(n);
  const ComplexValue ab = pc.alpha_beta();
  RecurrenceCoefficients rc;
  rc.R = pc.a * dn * (pc.alpha - pc.gamma_ + dn) * (pc.beta - pc.gamma_ + dn) /
         (pc.gamma_ - dn);
  rc.P = (pc.a - 1.0) * (pc.epsilon + dn) * (pc.gamma_ - dn - 1.0);
  rc.Q = -rc.P + pc.a * dn * (pc.alpha + pc.beta - pc.gamma_ + dn) +
         pc.a * ab - pc.q0;
  return rc;
}

SeriesExpansion expand_series(const HeunParameters& pc, std::size_t n_max) {
  if (n_max < 3) {
    throw std::invalid_argument("expand_series requires n_max >= 3");
  }

  SeriesExpansion se;
  se.coefficients.reserve(n_max + 1);
  se.coefficients.push_back({1.0, 0.0});

  // Head of the recurrence (index n = 1 involves only c_1 and c_0):
  // R_1 c_1 + Q_0 c_0 = 0.
  const RecurrenceCoefficients rc0 = recurrence_coefficients(0, pc);
  const RecurrenceCoefficients rc1 = recurrence_coefficients(1, pc);
  if (std::abs(rc1.R) == 0.0) {
    throw DegenerateCoefficient(
        "head coefficient of the expansion is undefined (R_1 = 0)");
  }
  se.coefficients.push_back(-rc0.Q / rc1.R);

  for (std::size_t n = 2; n <= n_max; ++n) {
    const RecurrenceCoefficients rcn = recurrence_coefficients(n, pc);
    const RecurrenceCoefficients rcn1 = recurrence_coefficients(n - 1, pc);
    const RecurrenceCoefficients rcn2 = recurrence_coefficients(n - 2, pc);
    if (std::abs(rcn.R) == 0.0) {
      throw DegenerateCoefficient(
          "expansion coefficient is undefined (R_n = 0)");
    }
    const ComplexValue cn = -(rcn1.Q * se.coefficients[n - 1] +
                              rcn2.P * se.coefficients[n - 2]) /
                            rcn.R;
    se.coefficients.push_back(cn);
  }

  double max_abs = 0.0;
  for (const auto& cv : se.coefficients) max_abs = std::max(max_abs, std::abs(cv));
  const double cutoff = kTerminationTol * max_abs;
  for (std::size_t n = 0; n + 2 < se.coefficients.size(); ++n) {
    if (std::abs(se.coefficients[n]) > cutoff &&
        std::abs(se.coefficients[n + 1]) <= cutoff &&
        std::abs(se.coefficients[n + 2]) <= cutoff) {
      se.terminated_at = n;
      break;
    }
  }
  return se;
}

std::pair<ComplexValue, ComplexValue> accessory_roots(
    const HeunParameters& pc) {
  const ComplexValue ab = pc.alpha_beta();
  const ComplexValue sum = pc.alpha + pc.beta;
  const ComplexValue b1 = pc.gamma_ - 1.0 - pc.a * sum - 2.0 * pc.a * ab;
  const ComplexValue b0 = pc.a * ab * (pc.a * (1.0 + sum) - pc.gamma_ + pc.a * ab);
  const ComplexValue disc = std::sqrt(b1 * b1 - 4.0 * b0);
  return {0.5 * (-b1 - disc), 0.5 * (-b1 + disc)};
}

namespace detail {

ComplexValue u1_from_argument(const HeunParameters& p, BranchedArgument y) {
  const ComplexValue denom = p.q - 2.0 * (p.delta - 1.0);
  if (std::abs(denom) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "first fundamental solution undefined: q - 2(delta - 1) vanishes");
  }
  return gauss_2f1(p.alpha, p.beta, p.gamma_, y) +
         (p.gamma_ - 1.0) / denom *
             gauss_2f1(p.alpha, p.beta, p.gamma_ - 1.0, y);
}

ComplexValue u2_from_argument(const HeunParameters& p, ComplexValue w) {
  const ComplexValue denom = p.alpha_beta() - p.q * (1.0 - p.delta);
  if (std::abs(denom) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "second fundamental solution undefined: alpha*beta - q(1 - delta) "
        "vanishes");
  }
  const BranchedArgument arg{w, CutSide::above};
  return gauss_2f1(p.alpha, p.beta, p.delta, arg) +
         p.q * (1.0 - p.delta) / denom *
             gauss_2f1(p.alpha, p.beta, p.delta - 1.0, arg);
}

}  // namespace detail

ComplexValue fundamental_u1(const HeunParameters& p, double z) {
  return detail::u1_from_argument(
      p, BranchedArgument{(z + 2.0) / 3.0, CutSide::above});
}

ComplexValue fundamental_u2(const HeunParameters& p, double z) {
  return detail::u2_from_argument(p, ComplexValue{(1.0 - z) / 3.0, 0.0});
}

ComplexValue fundamental_u1_series(const HeunParameters& p, double z) {
  const HeunParameters pc = canonical_map(p);
  const SeriesExpansion se = expand_series(pc, 8);

  double max_abs = 0.0;
  for (const auto& cv : se.coefficients) max_abs = std::max(max_abs, std::abs(cv));
  const double cutoff = kTerminationTol * max_abs;

  const std::size_t last =
      se.terminated_at ? *se.terminated_at : se.coefficients.size() - 1;
  const BranchedArgument y{(z + 2.0) / 3.0, CutSide::above};
  ComplexValue sum{0.0, 0.0};
  for (std::size_t n = 0; n <= last; ++n) {
    if (std::abs(se.coefficients[n]) <= cutoff) continue;
    sum += se.coefficients[n] * gauss_2f1(pc.alpha, pc.beta,
                                          pc.gamma_ - static_cast<double>(n), y);
  }
  return sum;
}

ComplexValue fundamental_u1_clausen(const HeunParameters& p, double z) {
  const ComplexValue ab = p.alpha_beta();
  if (std::abs(p.q) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "generalized hypergeometric form of u1 undefined: q vanishes");
  }
  const ComplexValue denom = p.q - 2.0 * (p.delta - 1.0);
  if (std::abs(denom) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "first fundamental solution undefined: q - 2(delta - 1) vanishes");
  }
  // Constant matching the two-term normalization (= u1 at z = -2).
  const ComplexValue scale = 1.0 + (p.gamma_ - 1.0) / denom;
  const ComplexValue e = 2.0 * ab / p.q;
  const ComplexValue y{(z + 2.0) / 3.0, 0.0};

  if (std::abs(y) < 0.9) {
    return scale * clausen_3f2(p.alpha, p.beta, 1.0 + e, e, p.gamma_,
                               BranchedArgument{y, CutSide::above});
  }
  // Outside the series disc: the generalized series with one upper parameter
  // exceeding a lower by one reduces to two contiguous 2F1 terms,
  //   3F2(a,b,1+e; e,g; y) = 2F1(a,b;g;y) + (a b y)/(e g) 2F1(a+1,b+1;g+1;y),
  // which the 2F1 continuation machinery evaluates anywhere.
  const BranchedArgument yb{y, CutSide::above};
  const ComplexValue reduced =
      gauss_2f1(p.alpha, p.beta, p.gamma_, yb) +
      ab * y / (e * p.gamma_) *
          gauss_2f1(p.alpha + 1.0, p.beta + 1.0, p.gamma_ + 1.0, yb);
  return scale * reduced;
}

ComplexValue fundamental_u2_clausen(const HeunParameters& p, double z) {
  const ComplexValue ab = p.alpha_beta();
  if (std::abs(p.q) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "generalized hypergeometric form of u2 undefined: q vanishes");
  }
  const ComplexValue denom = ab - p.q * (1.0 - p.delta);
  if (std::abs(denom) < kCoefficientTol) {
    throw DegenerateCoefficient(
        "second fundamental solution undefined: alpha*beta - q(1 - delta) "
        "vanishes");
  }
  // Constant matching the two-term normalization (= u2 at z = 1).
  const ComplexValue scale = ab / denom;
  const ComplexValue e = -ab / p.q;
  const ComplexValue w{(1.0 - z) / 3.0, 0.0};

  if (std::abs(w) < 0.9) {
    return scale * clausen_3f2(p.alpha, p.beta, 1.0 + e, e, p.delta,
                               BranchedArgument{w, CutSide::above});
  }
  const BranchedArgument wb{w, CutSide::above};
  const ComplexValue reduced =
      gauss_2f1(p.alpha, p.beta, p.delta, wb) +
      ab * w / (e * p.delta) *
          gauss_2f1(p.alpha + 1.0, p.beta + 1.0, p.delta + 1.0, wb);
  return scale * reduced;
}

}  // namespace heunstep
