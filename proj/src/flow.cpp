#include "warpflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "warpflow/diagnostics.hpp"

namespace warpflow {

namespace {

constexpr std::size_t kMinIntervals = 16;

void require_valid(const FlowState& s) {
  if (s.profile.values.size() < 2)
    throw ContractError("flow state has an empty grid");
  if (s.profile.intervals() < kMinIntervals)
    throw ContractError("flow grids need at least 16 intervals");
  if (s.n < 1) throw ContractError("dimension n must be >= 1");
  if (s.profile.domain != Domain::Colatitude && s.n != 1)
    throw ContractError("periodic and arc domains are one-dimensional (n=1)");
  if (s.rep == Representation::Gamma) {
    if (!s.transform)
      throw ContractError("gamma representation needs a transform");
  } else {
    if (!s.warp) throw ContractError("rho representation needs a warp");
  }
}

void check_range(const FlowState& s) {
  double lo, hi;
  if (s.rep == Representation::Gamma) {
    lo = s.transform->j_lo();
    hi = s.transform->j_hi();
  } else {
    lo = s.warp->lo();
    hi = s.warp->hi();
  }
  const double slack = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
  const auto& v = s.profile.values;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] >= lo - slack && v[j] <= hi + slack))
      throw RangeError("state value left the admissible interval at node " +
                       std::to_string(j));
  }
}

inline double face_flux_gamma(double g) { return g / std::sqrt(1.0 + g * g); }

}  // namespace

Profile Profile::periodic(std::size_t n_intervals, double value) {
  Profile p;
  p.domain = Domain::PeriodicCircle;
  p.length = 2.0 * kPi;
  p.values.assign(n_intervals, value);
  return p;
}

Profile Profile::arc(double length, std::size_t n_intervals, double value) {
  Profile p;
  p.domain = Domain::DirichletArc;
  p.length = length;
  p.values.assign(n_intervals + 1, value);
  return p;
}

Profile Profile::colatitude(std::size_t n_intervals, double value) {
  Profile p;
  p.domain = Domain::Colatitude;
  p.length = kPi;
  p.values.assign(n_intervals + 1, value);
  return p;
}

std::vector<double> rhs_gamma(const FlowState& s) {
  if (s.rep != Representation::Gamma)
    throw ContractError("rhs_gamma needs a gamma-form state");
  require_valid(s);
  check_range(s);
  const auto& v = s.profile.values;
  const double h = s.profile.h();
  const GammaTransform& tr = *s.transform;
  std::vector<double> out(v.size(), 0.0);

  if (s.profile.domain == Domain::PeriodicCircle) {
    const std::size_t N = v.size();
    std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j) {
      const double g = (v[j + 1 == N ? 0 : j + 1] - v[j]) / h;
      flux[j] = face_flux_gamma(g);
    }
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j) {
      const double fl = flux[j == 0 ? N - 1 : j - 1];
      const double k = (flux[j] - fl) / h;
      const double gc =
          (v[j + 1 == N ? 0 : j + 1] - v[j == 0 ? N - 1 : j - 1]) / (2.0 * h);
      const double ps = tr.psi_tab(v[j]);
      const double dps = tr.dpsi_tab(v[j]);
      out[j] =
          k / ps + (dps / (ps * ps)) * gc * gc / std::sqrt(1.0 + gc * gc);
    }
    return out;
  }

  if (s.profile.domain == Domain::DirichletArc) {
    const std::size_t N = v.size() - 1;
    std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j)
      flux[j] = face_flux_gamma((v[j + 1] - v[j]) / h);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 1; j < N; ++j) {
      const double k = (flux[j] - flux[j - 1]) / h;
      const double gc = (v[j + 1] - v[j - 1]) / (2.0 * h);
      const double ps = tr.psi_tab(v[j]);
      const double dps = tr.dpsi_tab(v[j]);
      out[j] =
          k / ps + (dps / (ps * ps)) * gc * gc / std::sqrt(1.0 + gc * gc);
    }
    return out;
  }

  // Colatitude: sin^{n-1}-weighted fluxes; poles use the symmetric limit
  // n * v'' with vanishing gradient.
  const std::size_t N = v.size() - 1;
  const double n1 = static_cast<double>(s.n - 1);
  std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < N; ++j) {
    const double theta_f = (static_cast<double>(j) + 0.5) * h;
    const double g = (v[j + 1] - v[j]) / h;
    flux[j] = std::pow(std::sin(theta_f), n1) * face_flux_gamma(g);
  }
#pragma omp parallel for schedule(static)
  for (std::size_t j = 1; j < N; ++j) {
    const double theta_j = static_cast<double>(j) * h;
    const double wj = std::pow(std::sin(theta_j), n1);
    const double k = (flux[j] - flux[j - 1]) / (h * wj);
    const double gc = (v[j + 1] - v[j - 1]) / (2.0 * h);
    const double ps = tr.psi_tab(v[j]);
    const double dps = tr.dpsi_tab(v[j]);
    out[j] = k / ps + static_cast<double>(s.n) * (dps / (ps * ps)) * gc * gc /
                          std::sqrt(1.0 + gc * gc);
  }
  const double nn = static_cast<double>(s.n);
  out[0] = nn * 2.0 * (v[1] - v[0]) / (h * h) / tr.psi_tab(v[0]);
  out[N] = nn * 2.0 * (v[N - 1] - v[N]) / (h * h) / tr.psi_tab(v[N]);
  return out;
}

std::vector<double> rhs_rho(const FlowState& s) {
  if (s.rep != Representation::Rho)
    throw ContractError("rhs_rho needs a rho-form state");
  require_valid(s);
  check_range(s);
  const auto& v = s.profile.values;
  const double h = s.profile.h();
  const WarpFunction& w = *s.warp;
  std::vector<double> out(v.size(), 0.0);

  const auto face = [&](double va, double vb) {
    const double g = (vb - va) / h;
    const double pf = w.phi(0.5 * (va + vb));
    return g / std::sqrt(pf * pf + g * g);
  };
  const auto transport = [&](double v0, double gc) {
    const auto e = w.eval(v0);
    const double wc = std::sqrt(e.phi * e.phi + gc * gc);
    return (e.dphi / e.phi) * gc * gc / wc;
  };

  if (s.profile.domain == Domain::PeriodicCircle) {
    const std::size_t N = v.size();
    std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j)
      flux[j] = face(v[j], v[j + 1 == N ? 0 : j + 1]);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j) {
      const double k = (flux[j] - flux[j == 0 ? N - 1 : j - 1]) / h;
      const double gc =
          (v[j + 1 == N ? 0 : j + 1] - v[j == 0 ? N - 1 : j - 1]) / (2.0 * h);
      out[j] = k + transport(v[j], gc);
    }
    return out;
  }

  if (s.profile.domain == Domain::DirichletArc) {
    const std::size_t N = v.size() - 1;
    std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < N; ++j) flux[j] = face(v[j], v[j + 1]);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 1; j < N; ++j) {
      const double k = (flux[j] - flux[j - 1]) / h;
      const double gc = (v[j + 1] - v[j - 1]) / (2.0 * h);
      out[j] = k + transport(v[j], gc);
    }
    return out;
  }

  const std::size_t N = v.size() - 1;
  const double n1 = static_cast<double>(s.n - 1);
  std::vector<double> flux(N);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < N; ++j) {
    const double theta_f = (static_cast<double>(j) + 0.5) * h;
    flux[j] = std::pow(std::sin(theta_f), n1) * face(v[j], v[j + 1]);
  }
#pragma omp parallel for schedule(static)
  for (std::size_t j = 1; j < N; ++j) {
    const double theta_j = static_cast<double>(j) * h;
    const double wj = std::pow(std::sin(theta_j), n1);
    const double k = (flux[j] - flux[j - 1]) / (h * wj);
    const double gc = (v[j + 1] - v[j - 1]) / (2.0 * h);
    out[j] = k + static_cast<double>(s.n) * transport(v[j], gc);
  }
  const double nn = static_cast<double>(s.n);
  out[0] = nn * 2.0 * (v[1] - v[0]) / (h * h) / w.phi(v[0]);
  out[N] = nn * 2.0 * (v[N - 1] - v[N]) / (h * h) / w.phi(v[N]);
  return out;
}

double stable_dt(const FlowState& s) {
  require_valid(s);
  const auto& v = s.profile.values;
  double coef_min;
  if (s.rep == Representation::Gamma) {
    coef_min = s.transform->psi_tab(v[0]);
    for (double x : v) coef_min = std::min(coef_min, s.transform->psi_tab(x));
  } else {
    coef_min = s.warp->phi(v[0]);
    for (double x : v) coef_min = std::min(coef_min, s.warp->phi(x));
  }
  const double g = gradient_sup(s.profile);
  const double h = s.profile.h();
  constexpr double kSafety = 0.4;
  return kSafety * h * h * coef_min * std::pow(1.0 + g * g, 1.5) / 2.0;
}

namespace {

void pin_dirichlet(FlowState& s) {
  if (s.profile.domain == Domain::DirichletArc) {
    s.profile.values.front() = 0.0;
    s.profile.values.back() = 0.0;
  }
}

std::vector<double> rhs(const FlowState& s) {
  return s.rep == Representation::Gamma ? rhs_gamma(s) : rhs_rho(s);
}

FlowState rk2(const FlowState& s, double dt) {
  const auto f1 = rhs(s);
  FlowState mid = s;
  for (std::size_t j = 0; j < f1.size(); ++j)
    mid.profile.values[j] = s.profile.values[j] + 0.5 * dt * f1[j];
  pin_dirichlet(mid);
  mid.t = s.t + 0.5 * dt;
  const auto f2 = rhs(mid);
  FlowState out = s;
  for (std::size_t j = 0; j < f2.size(); ++j)
    out.profile.values[j] = s.profile.values[j] + dt * f2[j];
  pin_dirichlet(out);
  out.t = s.t + dt;
  return out;
}

}  // namespace

StepResult step(const FlowState& s, double dt, double step_tol,
                double dt_min) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
  if (!(step_tol > 0.0)) throw DomainError("step: step_tol must be > 0");
  while (true) {
    if (dt < dt_min) return {s, dt, dt, 0.0, true};
    FlowState full = rk2(s, dt);
    FlowState half = rk2(rk2(s, 0.5 * dt), 0.5 * dt);
    double err = 0.0;
    for (std::size_t j = 0; j < full.profile.values.size(); ++j)
      err = std::max(err,
                     std::abs(full.profile.values[j] - half.profile.values[j]));
    if (err <= step_tol) return {std::move(half), dt, dt * 1.2, err, false};
    dt *= 0.5;
  }
}

namespace {

struct Event {
  double t;
  bool cadence = false;
  bool dump = false;
  bool end = false;
};

}  // namespace

Trajectory run_flow(const FlowState& initial, const RunOptions& opt,
                    const Hook& hook) {
  require_valid(initial);
  if (!(opt.t_end > initial.t))
    throw ContractError("run_flow: t_end must exceed the initial time");

  FlowState s = initial;
  pin_dirichlet(s);
  Trajectory traj;
  const double teps = 1e-12 * (std::abs(opt.t_end) + 1.0);

  std::vector<Event> events;
  for (double d : opt.dump_times) {
    if (d <= s.t + teps) {
      traj.snapshots.push_back({s.t, s.profile});
    } else if (d <= opt.t_end + teps) {
      events.push_back({std::min(d, opt.t_end), false, true, false});
    }
  }
  if (opt.cadence > 0.0) {
    for (std::size_t i = 1;; ++i) {
      const double tc = s.t + static_cast<double>(i) * opt.cadence;
      if (tc >= opt.t_end - teps) break;
      events.push_back({tc, true, false, false});
    }
  }
  events.push_back({opt.t_end, true, false, true});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.t < b.t; });
  std::vector<Event> merged;
  for (const Event& e : events) {
    if (!merged.empty() && std::abs(merged.back().t - e.t) <= teps) {
      merged.back().cadence |= e.cadence;
      merged.back().dump |= e.dump;
      merged.back().end |= e.end;
    } else {
      merged.push_back(e);
    }
  }

  if (hook) hook(s);
  {
    const GradInfo gi = gradient_info(s.profile);
    traj.grad_series.push_back({s.t, gi.sup, gi.node});
  }

  double dt_ctrl = std::min(stable_dt(s), merged.front().t - s.t);
  std::size_t idx = 0;
  bool finished = false;

  while (!finished) {
    const double gap = merged[idx].t - s.t;
    const double sd = stable_dt(s);
    const double dt_try = std::min({dt_ctrl, sd, gap});
    const bool clipped = dt_try >= gap;

    StepResult r;
    try {
      r = step(s, dt_try, opt.step_tol, opt.dt_min);
    } catch (const RangeError& e) {
      traj.reason = Termination::RangeErrorStop;
      traj.note = e.what();
      if (hook) hook(s);
      break;
    }
    if (r.underflow) {
      const GradInfo gi = gradient_info(s.profile);
      traj.reason = Termination::BlowupSuspected;
      traj.t_hat = s.t;
      traj.witness = gi.node;
      traj.note = "dt underflow";
      traj.grad_series.push_back({s.t, gi.sup, gi.node});
      if (hook) hook(s);
      break;
    }
    s = std::move(r.state);
    const bool landed = clipped && r.dt_used == dt_try;
    if (landed) s.t = merged[idx].t;
    if (r.dt_used < dt_try || !clipped) dt_ctrl = r.dt_next;

    const GradInfo gi = gradient_info(s.profile);
    if (gi.sup > opt.g_max) {
      traj.reason = Termination::BlowupSuspected;
      traj.t_hat = s.t;
      traj.witness = gi.node;
      traj.grad_series.push_back({s.t, gi.sup, gi.node});
      if (hook) hook(s);
      break;
    }

    while (idx < merged.size() && s.t >= merged[idx].t - teps) {
      const Event& e = merged[idx];
      if (e.cadence || e.end) {
        if (hook) hook(s);
        traj.grad_series.push_back({s.t, gi.sup, gi.node});
      }
      if (e.dump) traj.snapshots.push_back({s.t, s.profile});
      if (e.end) {
        traj.reason = Termination::ReachedEnd;
        finished = true;
      }
      ++idx;
    }
  }

  traj.t_final = s.t;
  if (traj.snapshots.empty() || traj.snapshots.back().t != s.t)
    traj.snapshots.push_back({s.t, s.profile});
  return traj;
}

Profile extend_odd(const Profile& arc_profile, int k) {
  if (arc_profile.domain != Domain::DirichletArc)
    throw ContractError("extend_odd needs a Dirichlet arc profile");
  if (k < 1) throw ContractError("extend_odd: k must be >= 1");
  const auto& v = arc_profile.values;
  if (v.size() < 2) throw ContractError("extend_odd: empty arc");
  if (v.front() != 0.0 || v.back() != 0.0)
    throw ContractError("extend_odd: arc endpoints must be exactly zero");
  if (std::abs(arc_profile.length * static_cast<double>(k) - kPi) >
      1e-12 * kPi)
    throw ContractError("extend_odd: arc length must be pi/k");
  const std::size_t n_arc = v.size() - 1;
  Profile out = Profile::periodic(2 * static_cast<std::size_t>(k) * n_arc);
  for (std::size_t j = 0; j < 2 * static_cast<std::size_t>(k); ++j) {
    for (std::size_t i = 0; i < n_arc; ++i) {
      out.values[j * n_arc + i] = (j % 2 == 0) ? v[i] : -v[n_arc - i];
    }
  }
  return out;
}

}  // namespace warpflow
