#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "warpflow/diagnostics.hpp"
#include "warpflow/transform.hpp"

using namespace warpflow;

namespace {

Profile random_profile(Profile p, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  for (auto& v : p.values)
    v = amp * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
  return p;
}

}  // namespace

TEST_CASE("area of a flat periodic graph over a flat warp is 2 pi") {
  const WarpFunction w = WarpFunction::make(WarpKind::Constant, -1.0, 1.0);
  const Profile p = Profile::periodic(64, 0.25);
  CHECK(area(p, w, 1) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("area of a round sphere matches 4 pi R^2") {
  const WarpFunction w =
      WarpFunction::make(WarpKind::EuclideanIdentity, 0.5, 4.0);
  double prev = 0.0;
  for (std::size_t n_grid : {512, 1024}) {
    const Profile p = Profile::colatitude(n_grid, 2.0);
    const double err = std::abs(area(p, w, 2) - 16.0 * kPi);
    CHECK(err < 1e-3);
    if (prev > 0.0) {
      CHECK(prev / err > 3.5);
      CHECK(prev / err < 4.5);
    }
    prev = err;
  }
  const Profile fine = Profile::colatitude(8192, 2.0);
  CHECK(std::abs(area(fine, w, 2) - 16.0 * kPi) < 1e-4);
}

TEST_CASE("volume of a round ball shell matches the closed form") {
  // Region between rho = 0.5 (the integration base) and rho = 2:
  // 4 pi (2^3 - 0.5^3) / 3.
  const WarpFunction w =
      WarpFunction::make(WarpKind::EuclideanIdentity, 0.5, 4.0);
  const Profile p = Profile::colatitude(2048, 2.0);
  const double exact = 4.0 * kPi * (8.0 - 0.125) / 3.0;
  CHECK(volume(p, w, 2) == doctest::Approx(exact).epsilon(1e-6));
  // The prefix overload agrees with the convenience one.
  const CumulativeIntegral pre = make_volume_prefix(w, 2);
  CHECK(volume(p, w, 2, pre) == volume(p, w, 2));
}

TEST_CASE("volume on a flat periodic fiber is the signed cell average") {
  const WarpFunction w = WarpFunction::make(WarpKind::Constant, -1.0, 1.0);
  const Profile p = Profile::periodic(64, 0.25);
  // prefix(0.25) = 0.25 - (-1) = 1.25, times the circle length.
  CHECK(volume(p, w, 1) == doctest::Approx(2.5 * kPi).epsilon(1e-12));
}

TEST_CASE("area and volume reject arcs and mismatched prefixes") {
  const WarpFunction w = WarpFunction::make(WarpKind::Constant, -1.0, 1.0);
  const Profile arc = Profile::arc(1.0, 32, 0.0);
  CHECK_THROWS_AS(area(arc, w, 1), ContractError);
  CHECK_THROWS_AS(volume(arc, w, 1), ContractError);
  const WarpFunction w2 = WarpFunction::make(WarpKind::Constant, -2.0, 1.0);
  const CumulativeIntegral pre = make_volume_prefix(w2, 1);
  const Profile p = Profile::periodic(32, 0.0);
  CHECK_THROWS_AS(volume(p, w, 1, pre), ContractError);
}

TEST_CASE("fast modulus equals the brute-force scan bit for bit") {
  for (bool periodic : {true, false}) {
    Profile p = periodic ? Profile::periodic(129) : Profile::colatitude(127);
    p = random_profile(p, periodic ? 7u : 8u, 1.0);
    const auto fast = modulus_of_continuity(p);
    const auto brute = modulus_brute(p);
    REQUIRE(fast.size() == brute.size());
    for (std::size_t l = 0; l < fast.size(); ++l) CHECK(fast[l] == brute[l]);
    CHECK(fast[0] == 0.0);
  }
}

TEST_CASE("modulus of a linear ramp is linear in the lag") {
  Profile p = Profile::colatitude(64);
  for (std::size_t j = 0; j < p.values.size(); ++j)
    p.values[j] = 3.0 * p.theta(j);
  const auto om = modulus_of_continuity(p);
  const double h = p.h();
  for (std::size_t l = 0; l < om.size(); ++l)
    CHECK(om[l] == doctest::Approx(3.0 * l * h).epsilon(1e-13));
}

TEST_CASE("min_holder_coeff is exactly 1 for the square root profile") {
  Profile p = Profile::colatitude(256);
  for (std::size_t j = 0; j < p.values.size(); ++j)
    p.values[j] = std::sqrt(p.theta(j));
  const auto om = modulus_of_continuity(p);
  CHECK(min_holder_coeff(om, p.h(), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("min_holder_coeff of the zero profile vanishes") {
  const std::vector<double> om(65, 0.0);
  CHECK(min_holder_coeff(om, 0.01, 0.5) == 0.0);
  CHECK_THROWS_AS(min_holder_coeff(om, 0.0, 0.5), ContractError);
  CHECK_THROWS_AS(min_holder_coeff(om, 0.01, 1.5), ContractError);
  CHECK_THROWS_AS(min_holder_coeff({}, 0.01, 0.5), ContractError);
}

TEST_CASE("fit_delta saturates, solves and rejects as designed") {
  const double h = kPi / 256.0;
  const double lb = 0.7;

  // Zero modulus: any delta works; the fit reports (almost) 1.
  std::vector<double> om(129, 0.0);
  const DeltaFit zero = fit_delta(om, h, lb);
  CHECK(zero.feasible);
  CHECK(zero.delta >= 1.0 - 1e-9);

  // Modulus built from the barrier at delta = 0.25 is recovered.
  for (std::size_t l = 0; l < om.size(); ++l)
    om[l] = 2.0 * lb * (std::sqrt(0.25 + l * h) - 0.5);
  const DeltaFit quarter = fit_delta(om, h, lb);
  CHECK(quarter.feasible);
  CHECK(quarter.delta == doctest::Approx(0.25).epsilon(1e-7));

  // The tight envelope 2 lb sqrt(theta) admits no positive delta.
  for (std::size_t l = 0; l < om.size(); ++l)
    om[l] = 2.0 * lb * std::sqrt(l * h);
  const DeltaFit none = fit_delta(om, h, lb);
  CHECK_FALSE(none.feasible);
  CHECK(none.binding_lag >= 1);
}

TEST_CASE("kappa matches a frozen value and its monotonicities") {
  BarrierParams bp;
  bp.delta = 0.5;
  bp.lambda_bar = 0.2;
  bp.eta = 0.05;
  CHECK(kappa(bp, 0.3, 2.0) ==
        doctest::Approx(0.0677978063843864).epsilon(1e-14));
  CHECK(kappa(bp, 0.0, 1.0) == 0.0);
  CHECK(kappa(bp, 0.5, 1.0) > kappa(bp, 0.3, 1.0));
  CHECK(kappa(bp, 0.3, 2.0) < kappa(bp, 0.3, 1.0));
  CHECK_THROWS_AS(kappa(bp, -0.1, 0.0), DomainError);
  BarrierParams bad = bp;
  bad.delta = 1.5;
  CHECK_THROWS_AS(kappa(bad, 0.1, 0.0), DomainError);
}

TEST_CASE("z monitor is -kappa(h) on constants and flags violations") {
  BarrierParams bp;
  bp.delta = 0.3;
  bp.lambda_bar = 0.4;
  bp.eta = 0.1;
  const Profile flat = Profile::periodic(64, 1.0);
  const ZReport zr = z_monitor_profile(flat, bp, 0.5);
  CHECK(zr.max_z == doctest::Approx(-kappa(bp, flat.h(), 0.5)).epsilon(1e-14));
  CHECK(zr.lag == 1);

  // A profile with oscillation far above the envelope goes positive, and
  // the report matches an independent brute-force evaluation.
  Profile big = Profile::periodic(64);
  for (std::size_t j = 0; j < 64; ++j)
    big.values[j] = 5.0 * std::sin(big.theta(j));
  const ZReport zb = z_monitor_profile(big, bp, 0.25);
  CHECK(zb.max_z > 0.0);
  const auto om = modulus_brute(big);
  double expect = -1e300;
  for (std::size_t l = 1; l < om.size(); ++l)
    expect = std::max(expect, om[l] - kappa(bp, l * big.h(), 0.25));
  CHECK(zb.max_z == doctest::Approx(expect).epsilon(1e-14));

  // The snapshot sweep picks the worst time.
  std::vector<Snapshot> snaps{{0.0, flat}, {0.25, big}, {0.5, flat}};
  const ZReport zs = z_monitor(snaps, bp);
  CHECK(zs.t == 0.25);
  CHECK(zs.max_z == doctest::Approx(zb.max_z).epsilon(1e-14));
}

TEST_CASE("gradient info picks the steepest node per domain rules") {
  Profile p = Profile::periodic(128);
  for (std::size_t j = 0; j < 128; ++j)
    p.values[j] = std::sin(p.theta(j));
  const GradInfo gi = gradient_info(p);
  const double h = p.h();
  // Centered difference of sin has slope sin(h)/h at the zero crossing.
  CHECK(gi.sup == doctest::Approx(std::sin(h) / h).epsilon(1e-13));
  CHECK((gi.node == 0 || gi.node == 64));

  // One-sided endpoint differences dominate on a steep-ended arc.
  Profile a = Profile::colatitude(32);
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    const double th = a.theta(j);
    a.values[j] = th * th;
  }
  const GradInfo ga = gradient_info(a);
  const double ha = a.h();
  CHECK(ga.node == 32);
  CHECK(ga.sup ==
        doctest::Approx((kPi * kPi - (kPi - ha) * (kPi - ha)) / ha)
            .epsilon(1e-12));
}

TEST_CASE("gradient_bound follows the closed form") {
  BarrierParams bp;
  bp.delta = 0.25;
  bp.lambda_bar = 0.3;
  bp.eta = 0.1;
  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  const double expect = std::cosh(1.0) * 0.3 * std::exp(-0.05) / 0.5;
  CHECK(gradient_bound(bp, w, 0.5) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("detect_blowup reads the recorded crossing") {
  Trajectory traj;
  traj.reason = Termination::ReachedEnd;
  CHECK_FALSE(detect_blowup(traj).has_value());
  traj.reason = Termination::BlowupSuspected;
  traj.t_hat = 0.125;
  traj.witness = 7;
  const auto hit = detect_blowup(traj);
  REQUIRE(hit.has_value());
  CHECK(hit->t_hat == 0.125);
  CHECK(hit->node == 7);
}

TEST_CASE("fit_decay_rate recovers synthetic exponential decay") {
  std::vector<double> t, v;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.05 * i);
    v.push_back(3.0 * std::exp(-0.3 * t.back()));
  }
  const DecayFit f = fit_decay_rate(t, v, 1.0, 2.0);
  CHECK(f.eta_hat == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(f.c0 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(f.r2 > 1.0 - 1e-12);
  CHECK_THROWS_AS(fit_decay_rate(t, v, 1.0, 1.01), ContractError);
  std::vector<double> neg = v;
  neg[30] = -1.0;
  CHECK_THROWS_AS(fit_decay_rate(t, neg, 1.0, 2.0), ContractError);
}
