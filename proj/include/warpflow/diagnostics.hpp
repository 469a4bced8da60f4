#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "warpflow/flow.hpp"

namespace warpflow {

struct BarrierParams {
  double delta = 0.5;       // in (0, 1)
  double lambda_bar = 0.1;  // > 0
  double eta = 0.05;        // > 0
  void validate() const;
};

// Hypersurface area of the rho-form graph profile:
//   A = \int phi^{n-1} sqrt(phi^2 + rho_th^2) dsigma,
// face-midpoint quadrature matching the flow's flux discretization; the
// fiber measure is 2*pi-periodic for n = 1 and |S^{n-1}| sin^{n-1}(theta)
// d(theta) on colatitude domains.
double area(const Profile& p, const WarpFunction& w, int n);

// Enclosed volume V = \int (\int_lo^rho phi^n ds) dsigma via a prefix table
// of phi^n; the overload without a prefix builds one internally.
CumulativeIntegral make_volume_prefix(const WarpFunction& w, int n,
                                      std::size_t panels = 2048);
double volume(const Profile& p, const WarpFunction& w, int n);
double volume(const Profile& p, const WarpFunction& w, int n,
              const CumulativeIntegral& phi_n_prefix);

// omega[l] = max |v_i - v_j| over node pairs at arc distance l*h;
// l = 0..N/2 on periodic profiles, l = 0..N otherwise. The parallel pair
// scan fills independent per-lag slots and matches the serial reference
// bit for bit.
std::vector<double> modulus_of_continuity(const Profile& p);
std::vector<double> modulus_brute(const Profile& p);

// Smallest lambda with omega(theta) <= lambda * theta^exponent at the
// nonzero grid lags.
double min_holder_coeff(const std::vector<double>& omega, double h,
                        double exponent);

struct DeltaFit {
  bool feasible = false;
  double delta = 0.0;
  std::size_t binding_lag = 0;
};

// Largest delta in (0,1) with omega(theta) <= 2*lambda_bar*(sqrt(delta +
// theta) - sqrt(delta)) at all nonzero lags, bisected to 1e-10; infeasible
// when even delta -> 0+ fails.
DeltaFit fit_delta(const std::vector<double>& omega, double h,
                   double lambda_bar);

// kappa(theta, t) = 2*lambda_bar*(sqrt(delta+theta) - sqrt(delta))*e^{-eta t}.
double kappa(const BarrierParams& bp, double theta, double t);

struct ZReport {
  double max_z = 0.0;
  double t = 0.0;
  std::size_t lag = 0;
  std::size_t node = 0;
};

// Max over ordered node pairs of v(y) - v(x) - kappa(d(x,y), t); ties break
// toward the smallest lag, then the smallest node index.
ZReport z_monitor_profile(const Profile& gamma_profile,
                          const BarrierParams& bp, double t);
ZReport z_monitor(const std::vector<Snapshot>& snapshots,
                  const BarrierParams& bp);

struct GradInfo {
  double sup = 0.0;
  std::size_t node = 0;
};

// Discrete gradient: centered differences in the interior (wrapping on
// periodic domains), one-sided at non-periodic endpoints.
GradInfo gradient_info(const Profile& p);
double gradient_sup(const Profile& p);

// sup_I(phi) * lambda_bar * delta^{-1/2} * e^{-eta t}.
double gradient_bound(const BarrierParams& bp, const WarpFunction& w,
                      double t);

struct DecayFit {
  double eta_hat = 0.0;
  double c0 = 0.0;
  double r2 = 1.0;
};

// Least squares on log(value) vs t over the window [t_lo, t_hi];
// ContractError on nonpositive values or fewer than two samples.
DecayFit fit_decay_rate(const std::vector<double>& t,
                        const std::vector<double>& value, double t_lo,
                        double t_hi);

struct BlowupHit {
  double t_hat;
  std::size_t node;
};

// First g_max crossing recorded by the run, if any.
std::optional<BlowupHit> detect_blowup(const Trajectory& traj);

struct DiagnosticsRecord {
  double t = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double sup_grad = 0.0;
  double osc = 0.0;
  double holder_half = 0.0;
  std::optional<double> max_z;  // empty when barrier monitoring is off
};

}  // namespace warpflow
