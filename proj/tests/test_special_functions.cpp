#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "heunstep/errors.hpp"
#include "heunstep/special_functions.hpp"
#include "test_support.hpp"

using heunstep::BranchedArgument;
using heunstep::ComplexValue;
using heunstep::CutSide;
using testsupport::integer_distance;
using testsupport::make_rng;
using testsupport::random_complex;
using testsupport::rel_diff;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Rising factorial (z)_n.
ComplexValue pochhammer(ComplexValue z, int n) {
  ComplexValue p{1.0, 0.0};
  for (int k = 0; k < n; ++k) p *= z + static_cast<double>(k);
  return p;
}

}  // namespace

TEST_SUITE("gamma") {
  TEST_CASE("real factorials and half-integer values") {
    CHECK(rel_diff(heunstep::gamma({5.0, 0.0}), {24.0, 0.0}) < 1e-14);
    CHECK(rel_diff(heunstep::gamma({25.0, 0.0}), {6.2044840173323943936e+23, 0.0}) <
          1e-13);
    CHECK(rel_diff(heunstep::gamma({0.5, 0.0}),
                   {1.772453850905516027298, 0.0}) < 1e-14);
    // gamma(-0.5) = -2 sqrt(pi) exercises the reflection branch.
    CHECK(rel_diff(heunstep::gamma({-0.5, 0.0}),
                   {-2.0 * 1.772453850905516027298, 0.0}) < 1e-13);
  }

  TEST_CASE("frozen complex reference values") {
    struct Ref {
      ComplexValue z;
      ComplexValue g;
    };
    // High-precision values computed with an arbitrary-precision evaluator
    // and frozen here to pin the implementation.
    const std::vector<Ref> refs = {
        {{0.5, 3.0}, {0.02144567055243064605955, 0.006865364837261677914238}},
        {{10.0, 10.0}, {1423.851941789183073968, -3496.081973307944588954}},
        {{-4.3, 2.1},
         {0.0002323212592983758373432, 0.0002631030214907168313875}},
        {{1.0, -1.0}, {0.4980156681183560427137, 0.154949828301810685125}},
    };
    for (const Ref& r : refs) {
      CHECK(rel_diff(heunstep::gamma(r.z), r.g) < 5e-13);
    }
    // |gamma(1+i)|^2 = pi / sinh(pi).
    const double m2 = std::norm(heunstep::gamma({1.0, 1.0}));
    CHECK(std::abs(m2 - kPi / std::sinh(kPi)) < 1e-14);
  }

  TEST_CASE("recurrence identity gamma(z+1) = z gamma(z)") {
    auto rng = make_rng(20260814u);
    int tested = 0;
    while (tested < 300) {
      const ComplexValue z = random_complex(rng, -6.0, 6.0);
      if (integer_distance(z) < 0.05 || integer_distance(z + 1.0) < 0.05) {
        continue;
      }
      const ComplexValue lhs = heunstep::gamma(z + 1.0);
      const ComplexValue rhs = z * heunstep::gamma(z);
      CHECK(rel_diff(lhs, rhs) < 1e-12);
      ++tested;
    }
  }

  TEST_CASE("reflection identity gamma(z) gamma(1-z) = pi / sin(pi z)") {
    auto rng = make_rng(77031u);
    int tested = 0;
    while (tested < 300) {
      const ComplexValue z = random_complex(rng, -6.0, 6.0);
      if (integer_distance(z) < 0.05) continue;
      const ComplexValue lhs = heunstep::gamma(z) * heunstep::gamma(1.0 - z);
      const ComplexValue rhs = kPi / std::sin(kPi * z);
      CHECK(rel_diff(lhs, rhs) < 1e-12);
      ++tested;
    }
  }

  TEST_CASE("poles raise and reciprocal vanishes") {
    CHECK_THROWS_AS((void)heunstep::gamma({0.0, 0.0}), heunstep::PoleError);
    CHECK_THROWS_AS((void)heunstep::gamma({-1.0, 0.0}), heunstep::PoleError);
    CHECK_THROWS_AS((void)heunstep::gamma({-5.0, 0.0}), heunstep::PoleError);
    CHECK(heunstep::reciprocal_gamma({-5.0, 0.0}) == ComplexValue{0.0, 0.0});
    CHECK(rel_diff(heunstep::reciprocal_gamma({4.0, 0.0}),
                   {1.0 / 6.0, 0.0}) < 1e-14);
  }
}

TEST_SUITE("gauss_2f1") {
  TEST_CASE("elementary closed forms") {
    // 2F1(1,1;2;y) = -log(1-y)/y at y = 1/2.
    const ComplexValue f =
        heunstep::gauss_2f1({1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {0.5});
    CHECK(rel_diff(f, {1.386294361119890618834, 0.0}) < 1e-14);

    // 2F1(a,b;b;y) = (1-y)^(-a) regardless of b.
    const ComplexValue a{0.3, 0.2};
    const ComplexValue b{1.7, -0.4};
    const ComplexValue y{0.83, 0.0};
    const ComplexValue g = heunstep::gauss_2f1(a, b, b, {y});
    CHECK(rel_diff(g, std::pow(1.0 - y, -a)) < 1e-12);
  }

  TEST_CASE("argument symmetry in the upper parameters") {
    auto rng = make_rng(515437u);
    for (int i = 0; i < 20; ++i) {
      const ComplexValue a = random_complex(rng, -2.0, 2.0);
      const ComplexValue b = random_complex(rng, -2.0, 2.0);
      const ComplexValue c = random_complex(rng, 2.0, 4.0);
      const ComplexValue y = 0.4 * random_complex(rng, -1.0, 1.0);
      CHECK(rel_diff(heunstep::gauss_2f1(a, b, c, {y}),
                     heunstep::gauss_2f1(b, a, c, {y})) < 1e-14);
    }
  }

  TEST_CASE("terminating polynomial evaluated far outside the unit disc") {
    // 2F1(-3, b; c; y) is a cubic; compare with the explicitly summed form.
    const ComplexValue b{1.4, 0.6};
    const ComplexValue c{2.2, -0.9};
    const ComplexValue y{7.5, -3.0};
    ComplexValue expected{0.0, 0.0};
    for (int n = 0; n <= 3; ++n) {
      expected += pochhammer({-3.0, 0.0}, n) * pochhammer(b, n) /
                  (pochhammer(c, n) * static_cast<double>(std::tgamma(n + 1))) *
                  std::pow(y, n);
    }
    CHECK(rel_diff(heunstep::gauss_2f1({-3.0, 0.0}, b, c, {y}), expected) <
          1e-13);
  }

  TEST_CASE("Gauss summation at unit argument") {
    // 2F1(1,1;3;1) = Gamma(3)Gamma(1)/Gamma(2)^2 = 2.
    const ComplexValue f = heunstep::gauss_2f1({1.0, 0.0}, {1.0, 0.0},
                                               {3.0, 0.0}, {1.0});
    CHECK(rel_diff(f, {2.0, 0.0}) < 1e-13);
  }

  TEST_CASE("Vandermonde identity 2F1(-n,b;c;1) = (c-b)_n / (c)_n") {
    const std::vector<std::pair<ComplexValue, ComplexValue>> params = {
        {{0.7, -0.3}, {2.4, 1.1}},
        {{-1.6, 0.9}, {0.8, -2.2}},
        {{3.3, 0.2}, {-2.55, 1.4}},
    };
    for (const auto& [b, c] : params) {
      for (int n : {0, 1, 2, 3, 5, 8}) {
        const ComplexValue lhs = heunstep::gauss_2f1(
            {static_cast<double>(-n), 0.0}, b, c, {1.0});
        const ComplexValue rhs = pochhammer(c - b, n) / pochhammer(c, n);
        CHECK(rel_diff(lhs, rhs) < 1e-12);
      }
    }
  }

  TEST_CASE("fractional-linear transformation routes agree pairwise") {
    using heunstep::detail::FractionalLinearMap;
    const std::vector<FractionalLinearMap> maps = {
        FractionalLinearMap::direct,
        FractionalLinearMap::pfaff,
        FractionalLinearMap::one_minus,
        FractionalLinearMap::reciprocal,
        FractionalLinearMap::reciprocal_one_minus,
        FractionalLinearMap::one_minus_reciprocal,
    };
    auto mapped_modulus = [](FractionalLinearMap m, ComplexValue y) {
      switch (m) {
        case FractionalLinearMap::direct: return std::abs(y);
        case FractionalLinearMap::pfaff: return std::abs(y / (y - 1.0));
        case FractionalLinearMap::one_minus: return std::abs(1.0 - y);
        case FractionalLinearMap::reciprocal: return std::abs(1.0 / y);
        case FractionalLinearMap::reciprocal_one_minus:
          return std::abs(1.0 / (1.0 - y));
        case FractionalLinearMap::one_minus_reciprocal:
          return std::abs(1.0 - 1.0 / y);
      }
      return 1e9;
    };

    const std::vector<BranchedArgument> args = {
        {{0.37, 0.24}},          {{-0.66, 0.08}},
        {{0.92, 0.0}},           {{2.5, 0.0}, CutSide::above},
        {{-3.1, 0.0}},           {{0.45, -0.65}},
        {{1.75, 0.0}, CutSide::above},
    };

    auto rng = make_rng(90210u);
    int sets = 0;
    while (sets < 12) {
      const ComplexValue a = random_complex(rng, -2.5, 2.5);
      const ComplexValue b = random_complex(rng, -2.5, 2.5);
      const ComplexValue c = random_complex(rng, -2.5, 2.5);
      // Keep every gamma argument of the two-series combinations well away
      // from poles, and the combination exponents away from integers.
      bool clean = true;
      for (ComplexValue g : {a, b, c, c - a, c - b, c - a - b, a - b}) {
        if (integer_distance(g) < 0.15) clean = false;
      }
      if (!clean) continue;
      ++sets;

      for (const BranchedArgument& y : args) {
        std::vector<ComplexValue> values;
        for (FractionalLinearMap m : maps) {
          if (mapped_modulus(m, y.value) > 0.9) continue;
          values.push_back(heunstep::detail::gauss_2f1_via(m, a, b, c, y));
        }
        REQUIRE(values.size() >= 2);
        for (std::size_t i = 1; i < values.size(); ++i) {
          CHECK(rel_diff(values[0], values[i]) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("cut values are complex conjugates across the cut") {
    // Schwarz reflection: for conjugated parameters the limits from the two
    // sides of the cut [1, inf) are conjugate to each other.
    const ComplexValue a{0.35, 0.0};
    const ComplexValue b{1.2, 0.0};
    const ComplexValue c{2.3, 0.0};
    for (double y : {1.3, 1.8, 2.5, 4.2}) {
      const ComplexValue up =
          heunstep::gauss_2f1(a, b, c, {{y, 0.0}, CutSide::above});
      const ComplexValue dn =
          heunstep::gauss_2f1(a, b, c, {{y, 0.0}, CutSide::below});
      CHECK(rel_diff(up, std::conj(dn)) < 1e-12);
      // A genuine discontinuity exists across the cut.
      CHECK(std::abs(up - dn) > 1e-3);
    }

    const ComplexValue ac{0.4, 0.7};
    const ComplexValue bc{1.1, -0.2};
    const ComplexValue cc{2.6, 0.4};
    const ComplexValue up = heunstep::gauss_2f1(
        ac, bc, cc, {{1.6, 0.0}, CutSide::above});
    const ComplexValue dn = heunstep::gauss_2f1(
        std::conj(ac), std::conj(bc), std::conj(cc),
        {{1.6, 0.0}, CutSide::below});
    CHECK(rel_diff(up, std::conj(dn)) < 1e-12);
  }

  TEST_CASE("contiguous relation in the lower parameter") {
    // c(c-1)(y-1) F(c-1) + c[c-1-(2c-a-b-1)y] F(c) + (c-a)(c-b)y F(c+1) = 0.
    auto rng = make_rng(46231u);
    int tested = 0;
    while (tested < 25) {
      const ComplexValue a = random_complex(rng, -2.0, 2.0);
      const ComplexValue b = random_complex(rng, -2.0, 2.0);
      const ComplexValue c = random_complex(rng, 1.0, 3.0);
      bool clean = true;
      for (ComplexValue g : {c, c - 1.0, c + 1.0}) {
        if (testsupport::integer_distance(g) < 0.1 && g.real() < 0.5) {
          clean = false;
        }
      }
      if (!clean) continue;
      const ComplexValue y = 0.8 * random_complex(rng, -1.0, 1.0);
      const ComplexValue fm = heunstep::gauss_2f1(a, b, c - 1.0, {y});
      const ComplexValue f0 = heunstep::gauss_2f1(a, b, c, {y});
      const ComplexValue fp = heunstep::gauss_2f1(a, b, c + 1.0, {y});
      const ComplexValue t1 = c * (c - 1.0) * (y - 1.0) * fm;
      const ComplexValue t2 = c * (c - 1.0 - (2.0 * c - a - b - 1.0) * y) * f0;
      const ComplexValue t3 = (c - a) * (c - b) * y * fp;
      const double scale = std::max(
          {std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
      CHECK(std::abs(t1 + t2 + t3) / scale < 1e-12);
      ++tested;
    }
  }

  TEST_CASE("degenerate lower parameter raises") {
    CHECK_THROWS_AS((void)heunstep::gauss_2f1({0.4, 0.1}, {1.2, 0.0},
                                              {0.0, 0.0}, {0.3}),
                    heunstep::ParameterDegeneracy);
    CHECK_THROWS_AS((void)heunstep::gauss_2f1({0.4, 0.1}, {1.2, 0.0},
                                              {-2.0, 0.0}, {0.3}),
                    heunstep::ParameterDegeneracy);
    // ... unless the series terminates before reaching the pole.
    const ComplexValue f = heunstep::gauss_2f1({-1.0, 0.0}, {1.2, 0.0},
                                               {-2.0, 0.0}, {0.3});
    CHECK(rel_diff(f, ComplexValue{1.0, 0.0} -
                          1.2 * ComplexValue{0.3, 0.0} / (-2.0)) < 1e-14);
  }
}

TEST_SUITE("clausen_3f2") {
  TEST_CASE("upper-lower cancellation reduces to 2F1") {
    const ComplexValue a{0.3, 0.15};
    const ComplexValue b{0.9, -0.4};
    const ComplexValue c{1.4, 0.2};
    const ComplexValue d{0.7, 0.6};
    const BranchedArgument y{{0.35, -0.2}};
    const ComplexValue lhs = heunstep::clausen_3f2(a, b, d, c, d, y);
    const ComplexValue rhs = heunstep::gauss_2f1(a, b, c, y);
    CHECK(rel_diff(lhs, rhs) < 1e-13);
  }

  TEST_CASE("two-term contiguous reduction identity") {
    // 3F2(a,b,1+e; e,g; y) = 2F1(a,b;g;y) + (a b y / (e g)) 2F1(a+1,b+1;g+1;y)
    const ComplexValue a{0.4, 0.1};
    const ComplexValue b{1.1, -0.2};
    const ComplexValue e{0.37, 0.55};
    const ComplexValue g{2.2, 0.3};
    const ComplexValue y{0.42, -0.18};
    const ComplexValue lhs =
        heunstep::clausen_3f2(a, b, 1.0 + e, e, g, {y});
    const ComplexValue rhs =
        heunstep::gauss_2f1(a, b, g, {y}) +
        a * b * y / (e * g) *
            heunstep::gauss_2f1(a + 1.0, b + 1.0, g + 1.0, {y});
    CHECK(rel_diff(lhs, rhs) < 1e-12);
  }

  TEST_CASE("terminating series is exact outside the unit disc") {
    const ComplexValue b{1.4, 0.6};
    const ComplexValue d{0.9, -0.1};
    const ComplexValue c{2.2, -0.9};
    const ComplexValue e{1.8, 0.4};
    const ComplexValue y{2.7, 1.1};
    ComplexValue expected{0.0, 0.0};
    for (int n = 0; n <= 2; ++n) {
      expected += pochhammer({-2.0, 0.0}, n) * pochhammer(b, n) *
                  pochhammer(d, n) /
                  (pochhammer(c, n) * pochhammer(e, n) *
                   static_cast<double>(std::tgamma(n + 1))) *
                  std::pow(y, n);
    }
    const ComplexValue f =
        heunstep::clausen_3f2({-2.0, 0.0}, b, d, c, e, {y});
    CHECK(rel_diff(f, expected) < 1e-13);
  }

  TEST_CASE("domain and degeneracy guards") {
    CHECK_THROWS_AS((void)heunstep::clausen_3f2({0.4, 0.0}, {1.2, 0.0},
                                                {0.8, 0.0}, {2.0, 0.0},
                                                {1.5, 0.0}, {1.2}),
                    heunstep::NonConvergence);
    CHECK_THROWS_AS((void)heunstep::clausen_3f2({0.4, 0.0}, {1.2, 0.0},
                                                {0.8, 0.0}, {-1.0, 0.0},
                                                {1.5, 0.0}, {0.4}),
                    heunstep::ParameterDegeneracy);
  }
}
