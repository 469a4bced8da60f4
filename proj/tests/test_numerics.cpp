#include <doctest.h>

#include <cmath>
#include <vector>

#include "warpflow/numerics.hpp"

using namespace warpflow;

TEST_CASE("gk15 is exact on low-degree polynomials") {
  const auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  // \int_0^2 = 12 - 2 + 4
  CHECK(gk15(cubic, 0.0, 2.0) == doctest::Approx(14.0).epsilon(1e-15));
  const auto deg13 = [](double x) { return std::pow(x, 13); };
  CHECK(gk15(deg13, -1.0, 2.0) ==
        doctest::Approx((std::pow(2.0, 14) - 1.0) / 14.0).epsilon(1e-14));
}

TEST_CASE("gk15 reports a small error estimate on smooth integrands") {
  double err = 0.0;
  const double v = gk15([](double x) { return std::sin(x); }, 0.0, 1.0, &err);
  CHECK(std::abs(v - (1.0 - std::cos(1.0))) < 1e-14);
  CHECK(err < 1e-10);
}

TEST_CASE("adaptive integrate hits classic values") {
  const double s = integrate([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(std::abs(s - 2.0) < 1e-12);
  const double e = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(std::abs(e - (std::exp(1.0) - 1.0)) < 1e-12);
  // Orientation and the empty interval.
  CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
  CHECK(std::abs(integrate([](double x) { return x; }, 1.0, 0.0) + 0.5) <
        1e-13);
}

TEST_CASE("adaptive integrate resolves a kink") {
  const double v =
      integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13);
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  CHECK(std::abs(v - exact) < 1e-12);
}

TEST_CASE("integrate rejects a nonpositive tolerance") {
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, 0.0),
                  ContractError);
}

TEST_CASE("cumulative integral matches direct quadrature and its own nodes") {
  const auto f = [](double x) { return std::cos(x) + 0.5 * x; };
  CumulativeIntegral cum(f, -1.0, 3.0, 64);
  for (double x : {-1.0, -0.7, 0.0, 0.123456, 1.0, 2.9, 3.0}) {
    const double direct = integrate(f, -1.0, x, 1e-13);
    CHECK(std::abs(cum(x) - direct) < 1e-11);
  }
  // Node values must agree with the stored prefix sums exactly.
  for (std::size_t i = 0; i <= 64; ++i) {
    CHECK(cum(cum.node(i)) == cum.prefix(i));
  }
}

TEST_CASE("cumulative integral rejects points outside its interval") {
  CumulativeIntegral cum([](double) { return 1.0; }, 0.0, 1.0, 8);
  CHECK_THROWS_AS(cum(1.5), DomainError);
  CHECK_THROWS_AS(cum(-0.5), DomainError);
}

TEST_CASE("hermite table reproduces a cubic exactly") {
  const auto f = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  const auto df = [](double x) { return 3.0 * x * x - 2.0; };
  std::vector<double> xs, ys, ds;
  for (int i = 0; i <= 10; ++i) {
    const double x = -1.0 + 0.35 * i;
    xs.push_back(x);
    ys.push_back(f(x));
    ds.push_back(df(x));
  }
  HermiteTable tab(xs, ys, ds);
  for (double x = -1.0; x <= xs.back(); x += 0.01931)
    CHECK(std::abs(tab(x) - f(x)) < 1e-12);
  // Clamped beyond the ends.
  CHECK(tab(xs.back() + 1.0) == ys.back());
  CHECK(tab(xs.front() - 1.0) == ys.front());
}

TEST_CASE("hermite table interpolates smooth functions to fourth order") {
  std::vector<double> xs, ys, ds;
  const int n = 40;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    xs.push_back(x);
    ys.push_back(std::sin(3.0 * x));
    ds.push_back(3.0 * std::cos(3.0 * x));
  }
  HermiteTable tab(xs, ys, ds);
  double worst = 0.0;
  for (double x = 0.0; x < 1.0; x += 0.0037)
    worst = std::max(worst, std::abs(tab(x) - std::sin(3.0 * x)));
  // h^4 scale: (1/40)^4 * |f''''| / 384 ~ 1e-8
  CHECK(worst < 1e-7);
}

TEST_CASE("newton_bisect solves cube roots from poor seeds") {
  const auto f = [](double x) { return x * x * x - 2.0; };
  const auto df = [](double x) { return 3.0 * x * x; };
  const double r = newton_bisect(f, df, 0.0, 2.0, 1.9);
  CHECK(std::abs(r - std::cbrt(2.0)) < 1e-12);
  // Flat derivative near the seed still converges via bisection.
  const auto g = [](double x) { return x * x * x; };
  const auto dg = [](double x) { return 3.0 * x * x; };
  // The stop rule bounds the last step by xtol, not the distance to the
  // root, so allow a small multiple.
  CHECK(std::abs(newton_bisect(g, dg, -1.0, 1.0, 0.9)) < 5e-12);
}

TEST_CASE("newton_bisect requires a bracketing interval") {
  const auto f = [](double x) { return x + 10.0; };
  const auto df = [](double) { return 1.0; };
  CHECK_THROWS_AS(newton_bisect(f, df, 0.0, 1.0, 0.5), ContractError);
}

TEST_CASE("fit_line recovers exact affine data") {
  std::vector<double> x, y;
  for (int i = 0; i < 12; ++i) {
    x.push_back(0.3 * i);
    y.push_back(2.5 - 0.75 * (0.3 * i));
  }
  const LineFit f = fit_line(x, y);
  CHECK(std::abs(f.slope + 0.75) < 1e-13);
  CHECK(std::abs(f.intercept - 2.5) < 1e-13);
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_line reports r2 = 1 on constant data") {
  const std::vector<double> x{0.0, 1.0, 2.0};
  const std::vector<double> y{4.0, 4.0, 4.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(0.0));
  CHECK(f.r2 == 1.0);
}

TEST_CASE("fit_line rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), ContractError);
  CHECK_THROWS_AS(fit_line({1.0, 1.0}, {2.0, 3.0}), ContractError);
}

TEST_CASE("kahan summation holds small terms against a large one") {
  KahanSum acc;
  acc.add(1.0);
  for (int i = 0; i < 10'000'000; ++i) acc.add(1e-16);
  CHECK(std::abs(acc.value() - (1.0 + 1e-9)) < 1e-15);
}
