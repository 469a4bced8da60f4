#include "warpflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpflow {

void BarrierParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("barrier: delta must lie in (0, 1)");
  if (!(lambda_bar > 0.0)) throw DomainError("barrier: lambda_bar must be > 0");
  if (!(eta > 0.0)) throw DomainError("barrier: eta must be > 0");
}

namespace {

// Surface area of the unit d-sphere, 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double unit_sphere_area(int d) {
  const double a = 0.5 * static_cast<double>(d + 1);
  return 2.0 * std::pow(kPi, a) / std::tgamma(a);
}

}  // namespace

double area(const Profile& p, const WarpFunction& w, int n) {
  if (n < 1) throw ContractError("area: n must be >= 1");
  const double h = p.h();
  const auto& v = p.values;

  if (p.domain == Domain::PeriodicCircle) {
    if (n != 1) throw ContractError("area: periodic profiles are n = 1");
    const std::size_t N = v.size();
    KahanSum acc;
    for (std::size_t j = 0; j < N; ++j) {
      const double vb = v[j + 1 == N ? 0 : j + 1];
      const double g = (vb - v[j]) / h;
      const double pf = w.phi(0.5 * (v[j] + vb));
      acc.add(h * std::sqrt(pf * pf + g * g));
    }
    return acc.value();
  }
  if (p.domain == Domain::Colatitude) {
    const std::size_t N = v.size() - 1;
    const double n1 = static_cast<double>(n - 1);
    const double s_area = unit_sphere_area(n - 1);
    KahanSum acc;
    for (std::size_t j = 0; j < N; ++j) {
      const double theta_f = (static_cast<double>(j) + 0.5) * h;
      const double g = (v[j + 1] - v[j]) / h;
      const double pf = w.phi(0.5 * (v[j] + v[j + 1]));
      acc.add(h * std::pow(std::sin(theta_f), n1) * std::pow(pf, n1) *
              std::sqrt(pf * pf + g * g));
    }
    return s_area * acc.value();
  }
  throw ContractError("area: Dirichlet arcs have no closed-surface area");
}

CumulativeIntegral make_volume_prefix(const WarpFunction& w, int n,
                                      std::size_t panels) {
  if (n < 1) throw ContractError("volume: n must be >= 1");
  const double nd = static_cast<double>(n);
  return CumulativeIntegral(
      [w, nd](double r) { return std::pow(w.phi(r), nd); }, w.lo(), w.hi(),
      panels);
}

double volume(const Profile& p, const WarpFunction& w, int n) {
  return volume(p, w, n, make_volume_prefix(w, n));
}

double volume(const Profile& p, const WarpFunction& w, int n,
              const CumulativeIntegral& prefix) {
  if (n < 1) throw ContractError("volume: n must be >= 1");
  if (prefix.a() != w.lo() || prefix.b() != w.hi())
    throw ContractError("volume: prefix table covers a different interval");
  const double h = p.h();
  const auto& v = p.values;

  if (p.domain == Domain::PeriodicCircle) {
    if (n != 1) throw ContractError("volume: periodic profiles are n = 1");
    KahanSum acc;
    for (double x : v) acc.add(h * prefix(x));
    return acc.value();
  }
  if (p.domain == Domain::Colatitude) {
    const std::size_t N = v.size() - 1;
    const double n1 = static_cast<double>(n - 1);
    const double s_area = unit_sphere_area(n - 1);
    KahanSum acc;
    for (std::size_t j = 0; j <= N; ++j) {
      const double theta_j = static_cast<double>(j) * h;
      const double wj = (j == 0 || j == N) ? 0.5 : 1.0;
      acc.add(wj * h * std::pow(std::sin(theta_j), n1) * prefix(v[j]));
    }
    return s_area * acc.value();
  }
  throw ContractError("volume: Dirichlet arcs have no enclosed volume");
}

namespace {

// Per-lag sup of |v(x+l*h) - v(x)| with the argmax node; the parallel fill
// writes disjoint slots, so the result is independent of the schedule.
void lag_max_scan(const std::vector<double>& v, bool periodic,
                  std::vector<double>& m, std::vector<std::size_t>& arg) {
  const std::size_t n_nodes = v.size();
  const std::size_t max_lag =
      periodic ? n_nodes / 2 : n_nodes - 1;
  m.assign(max_lag + 1, 0.0);
  arg.assign(max_lag + 1, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t l = 1; l <= max_lag; ++l) {
    double best = 0.0;
    std::size_t best_i = 0;
    const std::size_t i_hi = periodic ? n_nodes : n_nodes - l;
    for (std::size_t i = 0; i < i_hi; ++i) {
      const std::size_t ip = periodic ? (i + l) % n_nodes : i + l;
      const double d = std::abs(v[ip] - v[i]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    m[l] = best;
    arg[l] = best_i;
  }
}

}  // namespace

std::vector<double> modulus_of_continuity(const Profile& p) {
  if (p.values.size() < 2)
    throw ContractError("modulus: profile needs at least 2 nodes");
  std::vector<double> m;
  std::vector<std::size_t> arg;
  lag_max_scan(p.values, p.domain == Domain::PeriodicCircle, m, arg);
  return m;
}

std::vector<double> modulus_brute(const Profile& p) {
  if (p.values.size() < 2)
    throw ContractError("modulus: profile needs at least 2 nodes");
  const auto& v = p.values;
  const std::size_t n_nodes = v.size();
  const bool periodic = p.domain == Domain::PeriodicCircle;
  const std::size_t max_lag = periodic ? n_nodes / 2 : n_nodes - 1;
  std::vector<double> m(max_lag + 1, 0.0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = i + 1; j < n_nodes; ++j) {
      std::size_t l = j - i;
      if (periodic) l = std::min(l, n_nodes - l);
      if (l == 0 || l > max_lag) continue;
      m[l] = std::max(m[l], std::abs(v[j] - v[i]));
    }
  }
  return m;
}

double min_holder_coeff(const std::vector<double>& omega, double h,
                        double exponent) {
  if (omega.size() < 2) throw ContractError("min_holder_coeff: no lags");
  if (!(h > 0.0)) throw ContractError("min_holder_coeff: h must be > 0");
  if (!(exponent > 0.0 && exponent <= 1.0))
    throw ContractError("min_holder_coeff: exponent must lie in (0, 1]");
  double c = 0.0;
  for (std::size_t l = 1; l < omega.size(); ++l)
    c = std::max(c, omega[l] / std::pow(static_cast<double>(l) * h, exponent));
  return c;
}

DeltaFit fit_delta(const std::vector<double>& omega, double h,
                   double lambda_bar) {
  if (omega.size() < 2) throw ContractError("fit_delta: no lags");
  if (!(h > 0.0)) throw ContractError("fit_delta: h must be > 0");
  if (!(lambda_bar > 0.0))
    throw ContractError("fit_delta: lambda_bar must be > 0");

  // Worst (smallest-margin) lag for kappa(theta) = 2 lb (sqrt(d+theta)-sqrt(d)).
  const auto binding = [&](double delta) {
    const double sq = std::sqrt(delta);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_l = 0;
    for (std::size_t l = 1; l < omega.size(); ++l) {
      const double th = static_cast<double>(l) * h;
      const double margin =
          2.0 * lambda_bar * (std::sqrt(delta + th) - sq) - omega[l];
      if (margin < worst) {
        worst = margin;
        worst_l = l;
      }
    }
    return std::make_pair(worst, worst_l);
  };

  constexpr double kDeltaFloor = 1e-12;
  const auto at_floor = binding(kDeltaFloor);
  if (at_floor.first < 0.0) return {false, 0.0, at_floor.second};
  double lo = kDeltaFloor;
  double hi = 1.0;
  if (binding(1.0 - 1e-12).first >= 0.0) {
    return {true, 1.0 - 1e-12, binding(1.0 - 1e-12).second};
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (binding(mid).first >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {true, lo, binding(lo).second};
}

double kappa(const BarrierParams& bp, double theta, double t) {
  bp.validate();
  if (theta < 0.0) throw DomainError("kappa: theta must be >= 0");
  if (t < 0.0) throw DomainError("kappa: t must be >= 0");
  return 2.0 * bp.lambda_bar *
         (std::sqrt(bp.delta + theta) - std::sqrt(bp.delta)) *
         std::exp(-bp.eta * t);
}

ZReport z_monitor_profile(const Profile& p, const BarrierParams& bp,
                          double t) {
  bp.validate();
  if (p.domain != Domain::PeriodicCircle)
    throw ContractError("z monitor expects a periodic gamma profile");
  if (t < 0.0) throw DomainError("z monitor: t must be >= 0");
  std::vector<double> m;
  std::vector<std::size_t> arg;
  lag_max_scan(p.values, true, m, arg);
  const double h = p.h();
  const double decay = std::exp(-bp.eta * t);
  const double sqd = std::sqrt(bp.delta);
  ZReport rep;
  rep.max_z = -std::numeric_limits<double>::infinity();
  rep.t = t;
  for (std::size_t l = 1; l < m.size(); ++l) {
    const double th = static_cast<double>(l) * h;
    const double z =
        m[l] - 2.0 * bp.lambda_bar * (std::sqrt(bp.delta + th) - sqd) * decay;
    if (z > rep.max_z) {
      rep.max_z = z;
      rep.lag = l;
      rep.node = arg[l];
    }
  }
  return rep;
}

ZReport z_monitor(const std::vector<Snapshot>& snapshots,
                  const BarrierParams& bp) {
  if (snapshots.empty()) throw ContractError("z monitor: no snapshots");
  ZReport best;
  best.max_z = -std::numeric_limits<double>::infinity();
  for (const Snapshot& s : snapshots) {
    const ZReport r = z_monitor_profile(s.profile, bp, s.t);
    if (r.max_z > best.max_z) best = r;
  }
  return best;
}

GradInfo gradient_info(const Profile& p) {
  const auto& v = p.values;
  if (v.size() < 2) throw ContractError("gradient: profile too small");
  const double h = p.h();
  GradInfo out{0.0, 0};
  if (p.domain == Domain::PeriodicCircle) {
    const std::size_t N = v.size();
    for (std::size_t j = 0; j < N; ++j) {
      const double g = std::abs(
          (v[j + 1 == N ? 0 : j + 1] - v[j == 0 ? N - 1 : j - 1]) / (2.0 * h));
      if (g > out.sup) {
        out.sup = g;
        out.node = j;
      }
    }
    return out;
  }
  const std::size_t N = v.size() - 1;
  {
    const double g0 = std::abs((v[1] - v[0]) / h);
    out.sup = g0;
    out.node = 0;
  }
  for (std::size_t j = 1; j < N; ++j) {
    const double g = std::abs((v[j + 1] - v[j - 1]) / (2.0 * h));
    if (g > out.sup) {
      out.sup = g;
      out.node = j;
    }
  }
  const double gN = std::abs((v[N] - v[N - 1]) / h);
  if (gN > out.sup) {
    out.sup = gN;
    out.node = N;
  }
  return out;
}

double gradient_sup(const Profile& p) { return gradient_info(p).sup; }

double gradient_bound(const BarrierParams& bp, const WarpFunction& w,
                      double t) {
  bp.validate();
  if (t < 0.0) throw DomainError("gradient_bound: t must be >= 0");
  return w.max_phi() * bp.lambda_bar * std::exp(-bp.eta * t) /
         std::sqrt(bp.delta);
}

DecayFit fit_decay_rate(const std::vector<double>& t,
                        const std::vector<double>& value, double t_lo,
                        double t_hi) {
  if (t.size() != value.size())
    throw ContractError("fit_decay_rate: mismatched series");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0))
      throw ContractError("fit_decay_rate: values must be positive");
    xs.push_back(t[i]);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 2)
    throw ContractError("fit_decay_rate: fewer than 2 samples in the window");
  const LineFit f = fit_line(xs, ys);
  return {-f.slope, std::exp(f.intercept), f.r2};
}

std::optional<BlowupHit> detect_blowup(const Trajectory& traj) {
  if (traj.reason != Termination::BlowupSuspected || !traj.t_hat)
    return std::nullopt;
  return BlowupHit{*traj.t_hat, traj.witness ? *traj.witness : 0};
}

}  // namespace warpflow
