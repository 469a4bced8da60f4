#include "warpflow/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "warpflow/diagnostics.hpp"

namespace warpflow {

namespace {

// Residuals must clear zero by this much on the verification grid.
constexpr double kResidualSlack = -1e-12;
// Cap on c2 k^2 tau so the translating cap stays ahead of the cusp.
constexpr double kA1Cap = 0.49;
constexpr double kC2Factor = 1.2;
constexpr double kTau0 = 1.0;
// Fraction of the shorter J half-width the plateau may occupy.
constexpr double kJMargin = 0.985;
// Lift applied to the mollified profile so it clears the barrier strictly.
constexpr double kLift = 1.004;
// Mollifier half-width as a fraction of the arc length. The spike foot is
// strongly concave, so smoothing pulls the profile down by a fraction that
// scales like (width/node distance)^2; the width must sit well inside one
// cell of the finest refinement level or the lift cannot absorb the dip.
constexpr double kKernelFrac = 1.0 / 8192.0;
// The cusp must outrun the finest-grid resolution with this factor to spare.
constexpr double kIgnitionFactor = 1.5;
constexpr std::size_t kTargetGridHint = 512;
// Reference crossing threshold for the detection-headroom screen; matches
// the default sup-gradient stop used by the refinement experiment.
constexpr double kCrossingRef = 1e3;
constexpr std::size_t kExtensionGridCap = 512;

void check_theta_t(const SubsolutionParams& sp, double theta, double t,
                   bool allow_tau) {
  const double L = sp.arc_length();
  const double sl = 1e-12 * (L + 1.0);
  if (!(theta >= -sl && theta <= L + sl))
    throw DomainError("barrier: theta outside [0, pi/k]");
  if (t < 0.0) throw DomainError("barrier: t must be >= 0");
  if (allow_tau ? t > sp.tau : t >= sp.tau)
    throw DomainError("barrier: t must be < tau");
}

void check_params(const SubsolutionParams& sp) {
  if (sp.k < 1) throw DomainError("barrier: k must be >= 1");
  if (!(sp.p > 2.0 && sp.p <= 4.0))
    throw DomainError("barrier: p must lie in (2, 4]");
  if (!(sp.tau > 0.0)) throw DomainError("barrier: tau must be > 0");
  if (!(sp.c1 > 0.0 && sp.c2 > 0.0))
    throw DomainError("barrier: c1 and c2 must be > 0");
}

}  // namespace

double SubsolutionParams::plateau() const {
  return std::pow(2.0, 2.0 / p) * std::pow(arc_length(), 1.0 - 2.0 / p) * c1;
}

double zeta1(const SubsolutionParams& sp, double theta, double t) {
  check_params(sp);
  check_theta_t(sp, theta, t, false);
  const double L = sp.arc_length();
  const double s = std::min(theta, L - theta);
  if (s <= 0.0) return 0.0;
  const double x = std::pow(sp.tau - t, sp.p) + s * s;
  return sp.c1 * s / std::pow(x, 1.0 / sp.p);
}

double zeta2(const SubsolutionParams& sp, double theta, double t) {
  check_params(sp);
  check_theta_t(sp, theta, t, false);
  const double a = sp.plateau();
  const double kd = static_cast<double>(sp.k);
  return a * (std::sin(kd * theta) - sp.c2 * kd * kd * t);
}

double zeta(const SubsolutionParams& sp, double theta, double t) {
  return std::max(zeta1(sp, theta, t), zeta2(sp, theta, t));
}

Jet2 zeta1_jet(const SubsolutionParams& sp, double theta, double t) {
  check_params(sp);
  check_theta_t(sp, theta, t, true);
  const double L = sp.arc_length();
  double s = theta;
  double sign = 1.0;
  if (theta > 0.5 * L) {
    s = L - theta;
    sign = -1.0;
  }
  const double dt = sp.tau - t;
  const double dt_p = std::pow(dt, sp.p);
  const double x = dt_p + s * s;
  if (!(x > 0.0))
    throw DomainError("barrier: jet undefined at the space-time corner");
  const double xr = std::pow(x, 1.0 / sp.p);
  const double xm = 1.0 / (x * xr);  // x^{-1-1/p}
  const double q = 1.0 - 2.0 / sp.p;
  Jet2 out;
  out.v = sp.c1 * s / xr;
  out.vt = sp.c1 * s * std::pow(dt, sp.p - 1.0) * xm;
  out.vth = sign * sp.c1 * (dt_p + q * s * s) * xm;
  out.vthth = -(2.0 * sp.c1 * s / sp.p) * (3.0 * dt_p + q * s * s) * xm / x;
  return out;
}

Jet2 zeta2_jet(const SubsolutionParams& sp, double theta, double t) {
  check_params(sp);
  check_theta_t(sp, theta, t, true);
  const double a = sp.plateau();
  const double kd = static_cast<double>(sp.k);
  Jet2 out;
  out.v = a * (std::sin(kd * theta) - sp.c2 * kd * kd * t);
  out.vt = -a * sp.c2 * kd * kd;
  out.vth = a * kd * std::cos(kd * theta);
  out.vthth = -a * kd * kd * std::sin(kd * theta);
  return out;
}

double flow_residual(const Jet2& z, const GammaTransform& tr) {
  if (!(z.v >= tr.j_lo() && z.v <= tr.j_hi()))
    return std::numeric_limits<double>::infinity();
  const double ps = tr.psi_tab(z.v);
  const double dps = tr.dpsi_tab(z.v);
  const double q = 1.0 + z.vth * z.vth;
  return z.vt - z.vthth / (ps * q * std::sqrt(q)) -
         (dps / (ps * ps)) * z.vth * z.vth / std::sqrt(q);
}

namespace {

// Uniform grid plus dyadic refinement toward the distinguished points.
std::vector<double> theta_grid(double lth, std::size_t n_theta) {
  std::vector<double> th;
  th.reserve(n_theta + 1 + 3 * 45);
  for (std::size_t i = 0; i <= n_theta; ++i)
    th.push_back(lth * static_cast<double>(i) / static_cast<double>(n_theta));
  const double lim = 1e-12 * lth;
  for (double step = 0.5 * lth; step > lim; step *= 0.5) {
    th.push_back(step);             // toward 0
    th.push_back(lth - step);       // toward L
    th.push_back(0.5 * lth - step); // toward the kink, left
    th.push_back(0.5 * lth + step); // toward the kink, right
  }
  std::sort(th.begin(), th.end());
  th.erase(std::unique(th.begin(), th.end()), th.end());
  return th;
}

std::vector<double> time_grid(double tau, std::size_t n_t) {
  const double t_max = tau * (1.0 - 1e-6);
  std::vector<double> ts;
  ts.reserve(n_t + 1 + 45);
  for (std::size_t i = 0; i <= n_t; ++i)
    ts.push_back(t_max * static_cast<double>(i) / static_cast<double>(n_t));
  for (double step = 0.25 * tau; step > 1e-12 * tau; step *= 0.5) {
    const double t = t_max - step;
    if (t > 0.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

ResidualReport verify_subsolution(const SubsolutionParams& sp,
                                  const GammaTransform& tr,
                                  std::size_t n_theta, std::size_t n_t) {
  check_params(sp);
  if (n_theta < 16 || n_t < 16)
    throw ContractError("verify_subsolution: grid too coarse");
  const double lth = sp.arc_length();
  const std::vector<double> th = theta_grid(lth, n_theta);
  const std::vector<double> ts = time_grid(sp.tau, n_t);
  const double band = lth / static_cast<double>(n_theta);

  const std::size_t nth = th.size();
  std::vector<double> m1(nth, -std::numeric_limits<double>::infinity());
  std::vector<double> m2(nth, -std::numeric_limits<double>::infinity());
  std::vector<double> t1(nth, 0.0), t2(nth, 0.0);

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < nth; ++i) {
    const double theta = th[i];
    // The cusp profile is exactly stationary at its pinned endpoints and
    // non-smooth across the kink; both are excluded from the sweep.
    const bool skip1 = theta <= 0.0 || theta >= lth ||
                       std::abs(theta - 0.5 * lth) < band;
    double best1 = -std::numeric_limits<double>::infinity();
    double best2 = best1;
    double bt1 = 0.0, bt2 = 0.0;
    for (double t : ts) {
      if (!skip1) {
        const double r = flow_residual(zeta1_jet(sp, theta, t), tr);
        if (std::isnan(r)) {
          best1 = std::numeric_limits<double>::infinity();
          bt1 = t;
          break;
        }
        if (r > best1) {
          best1 = r;
          bt1 = t;
        }
      }
      const double r2 = flow_residual(zeta2_jet(sp, theta, t), tr);
      if (std::isnan(r2)) {
        best2 = std::numeric_limits<double>::infinity();
        bt2 = t;
        break;
      }
      if (r2 > best2) {
        best2 = r2;
        bt2 = t;
      }
    }
    m1[i] = best1;
    m2[i] = best2;
    t1[i] = bt1;
    t2[i] = bt2;
  }

  ResidualReport rep;
  rep.max_residual_zeta1 = -std::numeric_limits<double>::infinity();
  rep.max_residual_zeta2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nth; ++i) {
    if (m1[i] > rep.max_residual_zeta1) {
      rep.max_residual_zeta1 = m1[i];
      rep.arg1_theta = th[i];
      rep.arg1_t = t1[i];
    }
    if (m2[i] > rep.max_residual_zeta2) {
      rep.max_residual_zeta2 = m2[i];
      rep.arg2_theta = th[i];
      rep.arg2_t = t2[i];
    }
  }
  const bool ok1 = std::isfinite(rep.max_residual_zeta1) &&
                   rep.max_residual_zeta1 <= kResidualSlack;
  const bool ok2 = std::isfinite(rep.max_residual_zeta2) &&
                   rep.max_residual_zeta2 <= kResidualSlack;
  if (!std::isfinite(rep.max_residual_zeta1) ||
      !std::isfinite(rep.max_residual_zeta2))
    rep.note = "barrier left the transformed range J";
  rep.pass = ok1 && ok2;
  return rep;
}

SubsolutionParams choose_params(double sigma, double lambda,
                                const GammaTransform& tr) {
  if (!(sigma > 0.0 && sigma < 0.5))
    throw DomainError("choose_params: sigma must lie in (0, 1/2)");
  if (!(lambda > 0.0)) throw DomainError("choose_params: lambda must be > 0");
  if (!(tr.j_lo() < 0.0 && tr.j_hi() > 0.0))
    throw DomainError("choose_params: J must contain 0 in its interior");

  const double half = std::min(-tr.j_lo(), tr.j_hi());
  const double probe = std::min(1.0, 0.5 * half);
  for (int i = 1; i <= 4; ++i) {
    const double g = probe * static_cast<double>(i) / 4.0;
    if (std::abs(tr.psi(-g) - tr.psi(g)) >
        1e-10 * std::max(1.0, std::abs(tr.psi(g))))
      throw DomainError("choose_params: psi must be even about 0");
  }
  const double hfd = 1e-3 * probe;
  const double psi0 = tr.psi(0.0);
  const double psi2 =
      (tr.psi(hfd) - 2.0 * psi0 + tr.psi(-hfd)) / (hfd * hfd);
  if (!(psi2 > 0.0))
    throw DomainError("choose_params: psi''(0) must be positive");

  const double mu = lambda / tr.warp().max_phi();
  const double c2 = kC2Factor / psi0;
  const double p_lo = 2.0 / (1.0 - sigma);
  const double p_hi = 4.0;
  if (!(p_lo < p_hi))
    throw DomainError("choose_params: sigma leaves no admissible p");
  const double w = p_hi - p_lo;
  const double p_cand[3] = {p_lo + 0.5 * w, p_lo + 0.2875 * w,
                            p_lo + 0.2 * w};
  const int k_cand[5] = {4, 8, 16, 32, 64};

  std::ostringstream log;
  for (double p : p_cand) {
    const double q = 1.0 - 2.0 / p;
    const double bound = psi0 * psi0 / (psi2 * q * q);
    for (int k : k_cand) {
      const double kd = static_cast<double>(k);
      const double lth = kPi / kd;
      const double tau =
          std::min(kTau0 / std::pow(kd, 2.5), kA1Cap / (c2 * kd * kd));
      const double a_coef = std::pow(2.0, 2.0 / p) * std::pow(lth, q);
      const double c1 = std::min(2.0 * bound, kJMargin * half / a_coef);

      SubsolutionParams sp;
      sp.sigma = sigma;
      sp.p = p;
      sp.k = k;
      sp.tau = tau;
      sp.c1 = c1;
      sp.c2 = c2;
      sp.mu = mu;
      sp.c1_asymptotic_bound = bound;

      const double a = sp.plateau();
      if (!(a <= kJMargin * half * (1.0 + 1e-12)) ||
          !(a * c2 * kd * kd * tau <= half)) {
        log << "p=" << p << " k=" << k << ": range\n";
        continue;
      }
      // The cap must stay strictly above the cusp at the junction for all t.
      bool ordered = true;
      const double t_hi = tau * (1.0 - 1e-9);
      for (int i = 0; i <= 1024; ++i) {
        const double t = t_hi * static_cast<double>(i) / 1024.0;
        if (!(zeta1(sp, 0.5 * lth, t) < zeta2(sp, 0.5 * lth, t))) {
          ordered = false;
          break;
        }
      }
      if (!ordered) {
        log << "p=" << p << " k=" << k << ": crossing order\n";
        continue;
      }
      // Detection headroom: near the stop the profile saturates toward the
      // plateau while the endpoints stay pinned at zero, so the steepest
      // gradient a grid with kTargetGridHint cells per arc can represent is
      // about plateau/h. That ceiling must clear the default crossing
      // threshold with margin, or refinement studies never register a hit.
      const double h_t = lth / static_cast<double>(kTargetGridHint);
      if (!(a / h_t >= kIgnitionFactor * kCrossingRef)) {
        log << "p=" << p << " k=" << k << ": resolvability\n";
        continue;
      }
      const ResidualReport rep = verify_subsolution(sp, tr);
      if (rep.pass) return sp;
      log << "p=" << p << " k=" << k
          << ": residual max1=" << rep.max_residual_zeta1
          << " at theta=" << rep.arg1_theta << " t=" << rep.arg1_t
          << ", max2=" << rep.max_residual_zeta2 << "\n";
    }
  }
  throw NumericError("choose_params: no candidate verified\n" + log.str());
}

InitialDataReport build_initial_data(const SubsolutionParams& sp,
                                     const GammaTransform& tr,
                                     std::size_t grid_n) {
  check_params(sp);
  if (grid_n < 16) throw ContractError("build_initial_data: grid too coarse");
  const double lth = sp.arc_length();
  const double h = lth / static_cast<double>(grid_n);
  const double w = lth * kKernelFrac;

  const auto bump = [w](double s) {
    const double u = s / w;
    const double q = 1.0 - u * u;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
  };
  const double norm = integrate(bump, -w, w, 1e-12 * w);

  const auto zeta0 = [&](double x) { return zeta(sp, x, 0.0); };
  const auto zeta0_ext = [&](double x) {
    if (x < 0.0) return -zeta0(-x);
    if (x > lth) return -zeta0(2.0 * lth - x);
    return zeta0(x);
  };

  Profile prof = Profile::arc(lth, grid_n);
  auto& v = prof.values;
  v.front() = 0.0;
  v.back() = 0.0;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 1; i < grid_n; ++i) {
    const double theta_i = static_cast<double>(i) * h;
    const double conv = integrate(
        [&](double s) { return bump(s) * zeta0_ext(theta_i - s); }, -w, w,
        1e-15);
    v[i] = kLift * conv / norm;
  }

  InitialDataReport rep;
  rep.mu = sp.mu;
  rep.sup_value = 0.0;
  rep.lower_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid_n; ++i) {
    const double theta_i = static_cast<double>(i) * h;
    rep.lower_margin = std::min(rep.lower_margin, v[i] - zeta0(theta_i));
    rep.sup_value = std::max(rep.sup_value, v[i]);
  }
  if (!(rep.lower_margin >= 0.0))
    throw ContractError(
        "build_initial_data: mollified profile dips below the barrier");
  if (!(rep.sup_value <= tr.j_hi() && -rep.sup_value >= tr.j_lo()))
    throw ContractError("build_initial_data: profile leaves the range J");

  rep.holder_sigma_coeff =
      min_holder_coeff(modulus_of_continuity(prof), h, sp.sigma);
  rep.holder_within_budget = rep.holder_sigma_coeff <= sp.mu;
  if (!rep.holder_within_budget)
    rep.note = "Holder seminorm exceeds the requested budget (reported only)";
  // Odd extension across theta = 0: the ghost value is -v[1] exactly.
  rep.joint_second_diff = (v[1] - 2.0 * v[0] + (-v[1])) / (h * h);
  rep.profile = std::move(prof);
  return rep;
}

namespace {

LevelOutcome run_level(const SubsolutionParams& sp, const GammaTransform& tr,
                       const Profile& init, double g_max, bool extended,
                       std::size_t n_arc) {
  LevelOutcome out;
  out.grid_n = extended ? init.intervals() : n_arc;

  FlowState s;
  s.profile = init;
  s.t = 0.0;
  s.n = 1;
  s.rep = Representation::Gamma;
  s.transform = &tr;

  RunOptions opt;
  opt.t_end = sp.tau;
  opt.cadence = sp.tau / 256.0;
  opt.g_max = g_max;

  const double lth = sp.arc_length();
  const double h = lth / static_cast<double>(n_arc);
  const double t_cap = sp.tau * (1.0 - 1e-12);
  out.min_margin = std::numeric_limits<double>::infinity();
  const Hook hook = [&](const FlowState& st) {
    const double t = std::min(st.t, t_cap);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= n_arc; ++j) {
      const double theta_j = static_cast<double>(j) * h;
      worst = std::min(worst,
                       st.profile.values[j] - zeta(sp, theta_j, t));
    }
    out.min_margin = std::min(out.min_margin, worst);
    out.margin_series.push_back({st.t, worst});
  };

  const Trajectory traj = run_flow(s, opt, hook);
  out.reason = traj.reason;
  out.t_hat = traj.t_hat;
  out.witness = traj.witness;
  out.final_t = traj.t_final;
  for (const GradSample& g : traj.grad_series)
    out.max_grad = std::max(out.max_grad, g.sup_grad);
  return out;
}

}  // namespace

BlowupExperimentReport run_blowup_experiment(
    const SubsolutionParams& sp, const GammaTransform& tr,
    const std::vector<std::size_t>& grid_levels, double g_max) {
  check_params(sp);
  if (grid_levels.empty())
    throw ContractError("run_blowup_experiment: no grid levels");

  BlowupExperimentReport rep;
  rep.params = sp;
  rep.residuals = verify_subsolution(sp, tr);
  rep.sup_zeta = sp.plateau();
  rep.margin_floor = -1e-3 * rep.sup_zeta;

  std::vector<std::size_t> levels = grid_levels;
  std::sort(levels.begin(), levels.end());

  for (std::size_t n : levels) {
    const InitialDataReport init = build_initial_data(sp, tr, n);
    LevelOutcome lo = run_level(sp, tr, init.profile, g_max, false, n);
    lo.margin_ok = lo.min_margin >= rep.margin_floor;
    rep.levels.push_back(std::move(lo));
  }

  const auto& finest = rep.levels.back();
  if (rep.levels.size() >= 2) {
    const auto& second = rep.levels[rep.levels.size() - 2];
    if (finest.t_hat && second.t_hat && *finest.t_hat > 0.0)
      rep.t_hat_variation =
          std::abs(*second.t_hat - *finest.t_hat) / *finest.t_hat;
  }

  // Whole-circle control: tile 2k odd reflections of the arc data.
  std::size_t n_ext = levels.front();
  for (std::size_t n : levels)
    if (n <= kExtensionGridCap) n_ext = n;
  {
    const InitialDataReport init = build_initial_data(sp, tr, n_ext);
    const Profile circle = extend_odd(init.profile, sp.k);
    LevelOutcome lo = run_level(sp, tr, circle, g_max, true, n_ext);
    lo.margin_ok = lo.min_margin >= rep.margin_floor;
    rep.extension = std::move(lo);
    const LevelOutcome* match = nullptr;
    for (const auto& l : rep.levels)
      if (l.grid_n == n_ext) match = &l;
    if (match && match->t_hat && rep.extension->t_hat && *match->t_hat > 0.0)
      rep.extension_variation =
          std::abs(*rep.extension->t_hat - *match->t_hat) / *match->t_hat;
  }

  bool ok = rep.residuals.pass;
  const std::size_t nl = rep.levels.size();
  const auto level_ok = [&](const LevelOutcome& l) {
    return l.reason == Termination::BlowupSuspected && l.t_hat &&
           *l.t_hat < sp.tau && l.margin_ok;
  };
  ok = ok && level_ok(rep.levels[nl - 1]);
  if (nl >= 2) {
    ok = ok && level_ok(rep.levels[nl - 2]);
    ok = ok && rep.t_hat_variation && *rep.t_hat_variation < 0.05;
  }
  ok = ok && rep.extension && level_ok(*rep.extension);
  ok = ok && rep.extension_variation && *rep.extension_variation < 0.05;
  rep.pass = ok;
  if (!rep.pass) {
    std::ostringstream note;
    note << "experiment failed:";
    if (!rep.residuals.pass) note << " residuals";
    for (const auto& l : rep.levels)
      if (!level_ok(l))
        note << " level-" << l.grid_n
             << (l.margin_ok ? "" : " (margin: rerun at twice the grid)");
    if (rep.t_hat_variation && !(*rep.t_hat_variation < 0.05))
      note << " t-hat-variation";
    rep.note = note.str();
  }
  return rep;
}

}  // namespace warpflow
