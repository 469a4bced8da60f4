#include <doctest.h>

#include <cmath>
#include <vector>

#include "warpflow/warp.hpp"

using namespace warpflow;

namespace {

// Centered differences at interior points as an independent check on the
// closed-form derivatives.
void check_derivatives_fd(const WarpFunction& w) {
  const double h = 1e-5;
  for (int i = 1; i < 10; ++i) {
    const double r =
        w.lo() + (w.hi() - w.lo()) * (0.08 + 0.084 * i);
    const auto e = w.eval(r);
    const double d1 = (w.phi(r + h) - w.phi(r - h)) / (2.0 * h);
    const double d2 = (w.phi(r + h) - 2.0 * e.phi + w.phi(r - h)) / (h * h);
    CHECK(std::abs(e.dphi - d1) < 1e-8 * (1.0 + std::abs(e.dphi)));
    CHECK(std::abs(e.d2phi - d2) < 1e-5 * (1.0 + std::abs(e.d2phi)));
  }
}

}  // namespace

TEST_CASE("catalog closed forms at fixed points") {
  const WarpFunction sph = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  auto e = sph.eval(1.2);
  CHECK(e.phi == doctest::Approx(std::sin(1.2)).epsilon(1e-15));
  CHECK(e.dphi == doctest::Approx(std::cos(1.2)).epsilon(1e-15));
  CHECK(e.d2phi == doctest::Approx(-std::sin(1.2)).epsilon(1e-15));

  // Approx at 1 ulp: the compiler folds the reference calls with correctly
  // rounded results that can differ from the runtime libm by the last bit.
  const WarpFunction sh = WarpFunction::make(WarpKind::HyperbolicSinh, 0.3, 3.0);
  e = sh.eval(0.7);
  CHECK(e.phi == doctest::Approx(std::sinh(0.7)).epsilon(1e-15));
  CHECK(e.dphi == doctest::Approx(std::cosh(0.7)).epsilon(1e-15));
  CHECK(e.d2phi == doctest::Approx(std::sinh(0.7)).epsilon(1e-15));

  const WarpFunction id =
      WarpFunction::make(WarpKind::EuclideanIdentity, 0.5, 4.0);
  e = id.eval(2.2);
  CHECK(e.phi == 2.2);
  CHECK(e.dphi == 1.0);
  CHECK(e.d2phi == 0.0);

  const WarpFunction ch = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  e = ch.eval(0.4);
  CHECK(e.phi == doctest::Approx(std::cosh(0.4)).epsilon(1e-15));
  CHECK(e.dphi == doctest::Approx(std::sinh(0.4)).epsilon(1e-15));
  CHECK(e.d2phi == doctest::Approx(std::cosh(0.4)).epsilon(1e-15));

  const WarpFunction cst = WarpFunction::make(WarpKind::Constant, -1.0, 1.0);
  e = cst.eval(0.3);
  CHECK(e.phi == 1.0);
  CHECK(e.dphi == 0.0);
  CHECK(e.d2phi == 0.0);
  const WarpFunction cst2 =
      WarpFunction::make(WarpKind::Constant, -1.0, 1.0, {2.5});
  CHECK(cst2.phi(0.0) == 2.5);
}

TEST_CASE("even polynomial warp evaluates P(rho^2) and its derivatives") {
  // phi = 1 + 0.25 rho^2 + 0.05 rho^4 at rho = 1.5:
  //   phi   = 1 + 0.5625 + 0.253125  = 1.815625
  //   phi'  = 2r(0.25 + 0.1 r^2)     = 1.425
  //   phi'' = 2(0.25) + 12(0.05)r^2  = 1.85
  const WarpFunction w = WarpFunction::make(WarpKind::EvenPolynomial, -2.0,
                                            2.0, {1.0, 0.25, 0.05});
  const auto e = w.eval(1.5);
  CHECK(e.phi == doctest::Approx(1.815625).epsilon(1e-15));
  CHECK(e.dphi == doctest::Approx(1.425).epsilon(1e-15));
  CHECK(e.d2phi == doctest::Approx(1.85).epsilon(1e-15));
  check_derivatives_fd(w);
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  check_derivatives_fd(WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8));
  check_derivatives_fd(WarpFunction::make(WarpKind::HyperbolicSinh, 0.3, 3.0));
  check_derivatives_fd(WarpFunction::make(WarpKind::Cosh, -1.0, 1.0));
}

TEST_CASE("evaluation outside the interval is rejected") {
  const WarpFunction w = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  CHECK_THROWS_AS(w.phi(0.2), DomainError);
  CHECK_THROWS_AS(w.eval(2.9), DomainError);
  CHECK_NOTHROW(w.phi(0.3));
  CHECK_NOTHROW(w.phi(2.8));
}

TEST_CASE("construction rejects nonpositive phi and bad intervals") {
  // sin vanishes inside [0, pi]
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::SphereSine, 0.0, kPi),
                  DomainError);
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::SphereSine, 2.8, 0.3),
                  DomainError);
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::Constant, -1.0, 1.0, {-2.0}),
                  DomainError);
  CHECK_THROWS_AS(
      WarpFunction::make(WarpKind::EvenPolynomial, -3.0, 3.0, {1.0, -0.5}),
      DomainError);
}

TEST_CASE("coefficient arity is enforced per kind") {
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8, {1.0}),
                  DomainError);
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::Constant, 0.0, 1.0, {1.0, 2.0}),
                  DomainError);
  CHECK_THROWS_AS(WarpFunction::make(WarpKind::EvenPolynomial, 0.0, 1.0, {}),
                  DomainError);
}

TEST_CASE("convexity condition verdicts on the catalog") {
  // sphere-sine: dphi^2 - phi*d2phi = cos^2 + sin^2 = 1 everywhere.
  const auto sph = check_condition2(
      WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8));
  CHECK(sph.holds);
  CHECK(std::abs(sph.min_value - 1.0) <= 1e-12);

  // cosh: sinh^2 - cosh^2 = -1 everywhere.
  const auto ch =
      check_condition2(WarpFunction::make(WarpKind::Cosh, -1.0, 1.0));
  CHECK_FALSE(ch.holds);
  CHECK(std::abs(ch.min_value + 1.0) <= 1e-12);

  // sinh: cosh^2 - sinh^2 = 1; identity: 1 - 0 = 1; constant: 0.
  CHECK(check_condition2(
            WarpFunction::make(WarpKind::HyperbolicSinh, 0.3, 3.0))
            .holds);
  CHECK(check_condition2(
            WarpFunction::make(WarpKind::EuclideanIdentity, 0.5, 4.0))
            .holds);
  CHECK(check_condition2(WarpFunction::make(WarpKind::Constant, -1.0, 1.0))
            .holds);
}

TEST_CASE("condition scan rejects a degenerate grid") {
  const WarpFunction w = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  CHECK_THROWS_AS(check_condition2(w, 1), ContractError);
}

TEST_CASE("interval extrema of phi") {
  // sin is smallest at the left endpoint here: sin(0.3) < sin(2.8).
  const WarpFunction w = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  CHECK(w.min_phi() == doctest::Approx(std::sin(0.3)).epsilon(1e-12));
  CHECK(w.max_phi() == doctest::Approx(1.0).epsilon(1e-9));
  const WarpFunction ch = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  CHECK(ch.min_phi() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ch.max_phi() == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("evenness flag reflects the kind") {
  CHECK(WarpFunction::make(WarpKind::Cosh, -1.0, 1.0).even_about_zero());
  CHECK(WarpFunction::make(WarpKind::Constant, -1.0, 1.0).even_about_zero());
  CHECK(WarpFunction::make(WarpKind::EvenPolynomial, -1.0, 1.0, {1.0, 0.1})
            .even_about_zero());
  CHECK_FALSE(
      WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8).even_about_zero());
}

TEST_CASE("warp kind names round trip") {
  for (WarpKind k :
       {WarpKind::SphereSine, WarpKind::HyperbolicSinh,
        WarpKind::EuclideanIdentity, WarpKind::Cosh, WarpKind::Constant,
        WarpKind::EvenPolynomial}) {
    CHECK(warp_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(warp_kind_from_string("parabolic"), ConfigError);
}
