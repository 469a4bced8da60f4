#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "warpflow/diagnostics.hpp"
#include "warpflow/flow.hpp"
#include "warpflow/transform.hpp"

namespace warpflow {

// Parameters of the barrier pair on the arc [0, pi/k]:
//   zeta1 = c1*s / ((tau-t)^p + s^2)^{1/p},  s = min(theta, pi/k - theta),
//   zeta2 = 2^{2/p} (pi/k)^{1-2/p} c1 * (sin(k theta) - c2 k^2 t),
//   zeta  = max(zeta1, zeta2).
struct SubsolutionParams {
  double sigma = 0.25;  // in (0, 1/2)
  double p = 10.0 / 3.0;  // in (2/(1-sigma), 4); 1 - 2/p > sigma
  int k = 4;
  double tau = 1e-2;
  double c1 = 1.0;
  double c2 = 2.0;
  double mu = 1.0;  // Holder budget lambda * inf_I(1/phi)
  // Asymptotic lower bound (1-2/p)^{-2} psi(0)^2 / psi''(0) for c1, reported
  // for reference; the selected c1 is range-capped by J and may sit below it.
  double c1_asymptotic_bound = 0.0;

  double arc_length() const { return kPi / static_cast<double>(k); }
  double plateau() const;  // sup zeta = 2^{2/p} (pi/k)^{1-2/p} c1
};

double zeta1(const SubsolutionParams& sp, double theta, double t);
double zeta2(const SubsolutionParams& sp, double theta, double t);
double zeta(const SubsolutionParams& sp, double theta, double t);

struct Jet2 {
  double v = 0.0;
  double vt = 0.0;
  double vth = 0.0;
  double vthth = 0.0;
};

// Closed-form space-time derivatives (validated against finite differences).
Jet2 zeta1_jet(const SubsolutionParams& sp, double theta, double t);
Jet2 zeta2_jet(const SubsolutionParams& sp, double theta, double t);

// vt - (1/psi(v)) * vthth/(1+vth^2)^{3/2} - (psi'(v)/psi(v)^2) *
// vth^2/sqrt(1+vth^2); +inf when v falls outside J.
double flow_residual(const Jet2& z, const GammaTransform& tr);

struct ResidualReport {
  double max_residual_zeta1 = 0.0;
  double arg1_theta = 0.0, arg1_t = 0.0;
  double max_residual_zeta2 = 0.0;
  double arg2_theta = 0.0, arg2_t = 0.0;
  bool pass = false;  // both maxima <= -1e-12 and finite
  std::string note;
};

// Scans both residuals over a space-time grid refined geometrically toward
// theta in {0, L/2, L} and t -> tau; zeta1 skips the exact boundary points
// (residual identically zero there) and a one-cell band around the kink at
// L/2; zeta2 covers the closed rectangle. Time stops at tau*(1 - 1e-6).
ResidualReport verify_subsolution(const SubsolutionParams& sp,
                                  const GammaTransform& tr,
                                  std::size_t n_theta = 2048,
                                  std::size_t n_t = 512);

// Feasibility search: fixes c2 = 1.2/psi(0) and the Holder budget mu, then
// walks candidate exponents p and segment counts k with
// tau = min(tau0/k^{2.5}, 0.49/(c2 k^2)), capping c1 so the barrier range
// stays inside J, until the crossing order at L/2 holds for all t, a
// grid-resolvability screen passes, and verify_subsolution accepts.
// DomainError for sigma outside (0,1/2) or psi''(0) <= 0; NumericError with
// a per-candidate log when the search space is exhausted.
SubsolutionParams choose_params(double sigma, double lambda,
                                const GammaTransform& tr);

struct InitialDataReport {
  Profile profile;  // gamma values on [0, pi/k], endpoints exactly zero
  double lower_margin = 0.0;       // min(gamma0 - zeta(., 0)), >= 0 enforced
  double holder_sigma_coeff = 0.0; // discrete sigma-Holder coefficient
  double mu = 0.0;                 // budget it is reported against
  bool holder_within_budget = false;
  double joint_second_diff = 0.0;  // odd-extension stencil at the endpoints
  double sup_value = 0.0;
  std::string note;
};

// Smooth initial data above the barrier: mollify the odd reflection of
// zeta(., 0) with a compact bump (width L/8192) and scale by a small lift.
// Oddness about both endpoints gives exact zeros and vanishing even
// derivatives there; the lift absorbs the mollifier's dip at concave spots.
// Throws ContractError if the pointwise lower bound fails on the grid.
InitialDataReport build_initial_data(const SubsolutionParams& sp,
                                     const GammaTransform& tr,
                                     std::size_t grid_n);

struct LevelOutcome {
  std::size_t grid_n = 0;
  Termination reason = Termination::ReachedEnd;
  std::optional<double> t_hat;
  std::optional<std::size_t> witness;
  double min_margin = 0.0;    // min over monitored times of min(gamma - zeta)
  bool margin_ok = false;     // min_margin >= -1e-3 * sup zeta
  double final_t = 0.0;
  double max_grad = 0.0;      // largest sup gradient seen during the run
  std::vector<std::array<double, 2>> margin_series;  // (t, margin) per record
};

struct BlowupExperimentReport {
  SubsolutionParams params;
  ResidualReport residuals;
  std::vector<LevelOutcome> levels;           // one per arc grid level
  std::optional<double> t_hat_variation;      // two finest detecting levels
  std::optional<LevelOutcome> extension;      // S^1 run of the odd extension
  std::optional<double> extension_variation;  // vs the finest arc t_hat
  double sup_zeta = 0.0;
  double margin_floor = 0.0;
  bool pass = false;
  std::string note;
};

// End-to-end experiment: residual verification, initial data per level,
// Dirichlet-arc runs with comparison monitoring against zeta at cadence
// times, then the odd-extension run on S^1 (arc level min(512, finest)).
BlowupExperimentReport run_blowup_experiment(
    const SubsolutionParams& sp, const GammaTransform& tr,
    const std::vector<std::size_t>& grid_levels, double g_max);

}  // namespace warpflow
