#include <doctest.h>

#include <cmath>
#include <vector>

#include "warpflow/transform.hpp"

using namespace warpflow;

namespace {

struct Fixture {
  WarpKind kind;
  double lo, hi;
  std::vector<double> coeff;
  double rho_bar;
};

const std::vector<Fixture> kFixtures = {
    {WarpKind::SphereSine, 0.3, 2.8, {}, 1.55},
    {WarpKind::HyperbolicSinh, 0.3, 3.0, {}, 1.65},
    {WarpKind::EuclideanIdentity, 0.5, 4.0, {}, 2.25},
    {WarpKind::Cosh, -1.0, 1.0, {}, 0.0},
    {WarpKind::Constant, -1.0, 1.0, {}, 0.0},
    {WarpKind::EvenPolynomial, -1.5, 1.5, {1.0, 0.25, 0.05}, 0.0},
};

}  // namespace

TEST_CASE("cosh transform matches the inverse Gudermannian closed form") {
  // gamma(rho) = \int_0^rho dr/cosh(r) = atan(sinh(rho)).
  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -8.0, 8.0);
  const GammaTransform tr(w, 0.0);
  CHECK(tr.mirrored());
  CHECK(std::abs(tr.gamma(1.0) - 0.8657694832396586) < 1e-13);
  CHECK(std::abs(tr.gamma(1.0) - std::atan(std::sinh(1.0))) < 1e-13);
  for (double r : {-5.0, -2.3, -0.4, 0.7, 3.1, 7.9}) {
    CHECK(std::abs(tr.gamma(r) - std::atan(std::sinh(r))) < 5e-13);
  }
  CHECK(tr.gamma(0.0) == 0.0);
  // J approaches (-pi/2, pi/2) as the interval widens.
  CHECK(std::abs(tr.j_hi() - std::atan(std::sinh(8.0))) < 1e-12);
  CHECK(tr.j_lo() == -tr.j_hi());
  // psi(gamma) = cosh(rho(gamma)) = sec(gamma).
  for (double g : {0.1, 0.5, 1.0, 1.4}) {
    CHECK(std::abs(tr.psi(g) - 1.0 / std::cos(g)) < 1e-11);
    CHECK(std::abs(tr.psi(-g) - 1.0 / std::cos(g)) < 1e-11);
  }
  CHECK(std::abs(tr.psi(tr.gamma(1.0)) - std::cosh(1.0)) < 1e-12);
}

TEST_CASE("identity warp away from zero gives a logarithmic gamma") {
  // gamma = log(rho / rho_bar), psi = rho_bar * e^gamma.
  const WarpFunction w =
      WarpFunction::make(WarpKind::EuclideanIdentity, 0.5, 4.0);
  const GammaTransform tr(w, 1.0);
  CHECK_FALSE(tr.mirrored());
  for (double r : {0.5, 0.9, 1.0, 1.7, 3.3, 4.0}) {
    CHECK(std::abs(tr.gamma(r) - std::log(r)) < 1e-12);
  }
  CHECK(std::abs(tr.j_lo() - std::log(0.5)) < 1e-12);
  CHECK(std::abs(tr.j_hi() - std::log(4.0)) < 1e-12);
  for (double g : {-0.6, -0.2, 0.0, 0.5, 1.2}) {
    CHECK(std::abs(tr.psi(g) - std::exp(g)) < 1e-11);
    // psi' = (phi' phi)(rho(gamma)) = e^gamma as well.
    CHECK(std::abs(tr.dpsi(g) - std::exp(g)) < 1e-10);
  }
}

TEST_CASE("gamma and rho_of invert each other across the catalog") {
  for (const Fixture& fx : kFixtures) {
    const WarpFunction w = WarpFunction::make(fx.kind, fx.lo, fx.hi, fx.coeff);
    const GammaTransform tr(w, fx.rho_bar);
    CHECK(std::abs(tr.gamma(fx.rho_bar)) < 1e-14);
    for (int i = 0; i <= 1000; ++i) {
      const double r = fx.lo + (fx.hi - fx.lo) * i / 1000.0;
      const double g = tr.gamma(r);
      CHECK(g >= tr.j_lo() - 1e-12);
      CHECK(g <= tr.j_hi() + 1e-12);
      const double back = tr.rho_of(g);
      if (std::abs(back - r) >= 1e-10) {
        CAPTURE(to_string(fx.kind));
        CAPTURE(r);
        CHECK(std::abs(back - r) < 1e-10);
      }
      // psi composed with gamma reproduces phi.
      const double ps = tr.psi(g);
      if (std::abs(ps - w.phi(r)) >= 1e-10) {
        CAPTURE(to_string(fx.kind));
        CAPTURE(r);
        CHECK(std::abs(ps - w.phi(r)) < 1e-10);
      }
    }
  }
}

TEST_CASE("gamma is strictly increasing") {
  for (const Fixture& fx : kFixtures) {
    const WarpFunction w = WarpFunction::make(fx.kind, fx.lo, fx.hi, fx.coeff);
    const GammaTransform tr(w, fx.rho_bar);
    double prev = tr.gamma(fx.lo);
    for (int i = 1; i <= 200; ++i) {
      const double g = tr.gamma(fx.lo + (fx.hi - fx.lo) * i / 200.0);
      CHECK(g > prev);
      prev = g;
    }
  }
}

TEST_CASE("dpsi equals the chain-rule product phi'(rho) * phi(rho)") {
  // For cosh: psi = sec, psi' = sec * tan; at gamma = atan(sinh(rho)) this is
  // cosh(rho) * sinh(rho) = (phi' phi)(rho), not phi'(rho) alone.
  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  const GammaTransform tr(w, 0.0);
  for (double g = -0.8; g <= 0.8001; g += 0.1) {
    const double expected = std::tan(g) / std::cos(g);
    CHECK(std::abs(tr.dpsi(g) - expected) < 1e-10);
    const double r = tr.rho_of(g);
    CHECK(std::abs(tr.dpsi(g) - std::sinh(r) * std::cosh(r)) < 1e-10);
  }
  // Finite-difference consistency on a non-mirrored fixture.
  const WarpFunction sph = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  const GammaTransform ts(sph, 1.55);
  const double h = 1e-6;
  for (double g = ts.j_lo() + 0.05; g < ts.j_hi() - 0.05; g += 0.08) {
    const double fd = (ts.psi(g + h) - ts.psi(g - h)) / (2.0 * h);
    CHECK(std::abs(ts.dpsi(g) - fd) < 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("mirrored transforms are bitwise symmetric") {
  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  const GammaTransform tr(w, 0.0);
  for (double r : {0.1, 0.33, 0.5, 0.77, 1.0}) {
    CHECK(tr.gamma(-r) == -tr.gamma(r));
  }
  for (double g : {0.05, 0.21, 0.4, 0.6, 0.8}) {
    CHECK(tr.psi(-g) == tr.psi(g));
    CHECK(tr.dpsi(-g) == -tr.dpsi(g));
    CHECK(tr.psi_tab(-g) == tr.psi_tab(g));
    CHECK(tr.dpsi_tab(-g) == -tr.dpsi_tab(g));
    CHECK(tr.rho_of(-g) == -tr.rho_of(g));
  }
  CHECK(tr.dpsi(0.0) == 0.0);
  CHECK(tr.dpsi_tab(0.0) == 0.0);
}

TEST_CASE("tabulated psi agrees with the exact one") {
  for (const Fixture& fx : kFixtures) {
    const WarpFunction w = WarpFunction::make(fx.kind, fx.lo, fx.hi, fx.coeff);
    const GammaTransform tr(w, fx.rho_bar);
    double worst = 0.0, worst_d = 0.0;
    for (int i = 0; i <= 3000; ++i) {
      const double g =
          tr.j_lo() + (tr.j_hi() - tr.j_lo()) * i / 3000.0;
      worst = std::max(worst, std::abs(tr.psi_tab(g) - tr.psi(g)));
      worst_d = std::max(worst_d, std::abs(tr.dpsi_tab(g) - tr.dpsi(g)));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_d < 1e-7);
  }
}

TEST_CASE("vector maps round trip") {
  const WarpFunction w = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  const GammaTransform tr(w, 1.55);
  std::vector<double> rho;
  for (int i = 0; i <= 64; ++i) rho.push_back(0.35 + 2.4 * i / 64.0);
  const std::vector<double> g = tr.forward(rho);
  const std::vector<double> back = tr.inverse(g);
  for (std::size_t i = 0; i < rho.size(); ++i)
    CHECK(std::abs(back[i] - rho[i]) < 1e-10);
}

TEST_CASE("transform construction rejects a base point outside the interval") {
  const WarpFunction w = WarpFunction::make(WarpKind::SphereSine, 0.3, 2.8);
  CHECK_THROWS_AS(GammaTransform(w, 0.1), DomainError);
}

TEST_CASE("rho_of rejects gamma values outside J") {
  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  const GammaTransform tr(w, 0.0);
  CHECK_THROWS_AS(tr.rho_of(tr.j_hi() + 0.1), DomainError);
  CHECK_THROWS_AS(tr.psi(tr.j_lo() - 0.1), DomainError);
}
