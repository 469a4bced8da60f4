#include "warpflow/transform.hpp"

#include <algorithm>
#include <cmath>

namespace warpflow {

GammaTransform::GammaTransform(const WarpFunction& w, double rho_bar,
                               double tol, std::size_t panels)
    : w_(w), rho_bar_(rho_bar), tol_(tol) {
  if (!(tol > 0.0)) throw DomainError("transform tolerance must be > 0");
  if (panels < 8) throw DomainError("transform needs >= 8 panels");
  w_.check_domain(rho_bar_);
  mirrored_ =
      w_.even_about_zero() && rho_bar_ == 0.0 && w_.lo() == -w_.hi();

  const WarpFunction wc = w_;
  const Fn1 inv_phi = [wc](double r) { return 1.0 / wc.phi(r); };
  const double table_lo = mirrored_ ? 0.0 : w_.lo();
  cum_ = CumulativeIntegral(inv_phi, table_lo, w_.hi(), panels);

  if (mirrored_) {
    gamma0_ = 0.0;
    jhi_ = cum_.prefix(panels);
    jlo_ = -jhi_;
  } else {
    gamma0_ = cum_(rho_bar_);
    jlo_ = -gamma0_;
    jhi_ = cum_.prefix(panels) - gamma0_;
  }

  gamma_nodes_.resize(panels + 1);
  rho_nodes_.resize(panels + 1);
  std::vector<double> inv_slope(panels + 1);
  std::vector<double> psi_v(panels + 1), psi_d(panels + 1);
  std::vector<double> dpsi_v(panels + 1), dpsi_d(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    const double r = cum_.node(i);
    const auto e = w_.eval(r);
    rho_nodes_[i] = r;
    gamma_nodes_[i] = cum_.prefix(i) - gamma0_;
    inv_slope[i] = e.phi;  // d rho / d gamma
    psi_v[i] = e.phi;
    psi_d[i] = e.dphi * e.phi;
    dpsi_v[i] = e.dphi * e.phi;
    dpsi_d[i] = (e.d2phi * e.phi + e.dphi * e.dphi) * e.phi;
  }
  inv_seed_ = HermiteTable(gamma_nodes_, rho_nodes_, inv_slope);
  psi_t_ = HermiteTable(gamma_nodes_, psi_v, psi_d);
  dpsi_t_ = HermiteTable(gamma_nodes_, dpsi_v, dpsi_d);
}

double GammaTransform::gamma_pos(double rho) const { return cum_(rho); }

double GammaTransform::gamma(double rho) const {
  w_.check_domain(rho);
  if (mirrored_)
    return rho < 0.0 ? -gamma_pos(-rho) : gamma_pos(rho);
  return cum_(rho) - gamma0_;
}

void GammaTransform::check_gamma_domain(double g) const {
  const double slack = 1e-9 * (std::abs(jlo_) + std::abs(jhi_) + 1.0);
  if (g < jlo_ - slack || g > jhi_ + slack)
    throw DomainError("gamma outside J");
}

double GammaTransform::rho_pos(double g) const {
  // Bracket from the table nodes, then Newton on Gamma(r) - g with
  // Gamma' = 1/phi, seeded by the Hermite inverse. g is in the shifted
  // coordinate, Gamma(rho_bar) = 0.
  const auto it =
      std::upper_bound(gamma_nodes_.begin(), gamma_nodes_.end(), g);
  std::size_t hi_idx = static_cast<std::size_t>(it - gamma_nodes_.begin());
  hi_idx = std::clamp<std::size_t>(hi_idx, 1, gamma_nodes_.size() - 1);
  const double lo = rho_nodes_[hi_idx - 1];
  const double hi = rho_nodes_[hi_idx];
  const double seed = inv_seed_(g);
  const WarpFunction& w = w_;
  const Fn1 f = [this, g](double r) { return (cum_(r) - gamma0_) - g; };
  const Fn1 df = [&w](double r) { return 1.0 / w.phi(r); };
  return newton_bisect(f, df, lo, hi, seed, tol_);
}

double GammaTransform::rho_of(double gamma_v) const {
  check_gamma_domain(gamma_v);
  if (mirrored_) {
    const double g = std::clamp(std::abs(gamma_v), 0.0, jhi_);
    const double r = rho_pos(g);
    return gamma_v < 0.0 ? -r : r;
  }
  return rho_pos(std::clamp(gamma_v, jlo_, jhi_));
}

double GammaTransform::psi(double gamma_v) const {
  return w_.phi(rho_of(gamma_v));
}

double GammaTransform::dpsi(double gamma_v) const {
  check_gamma_domain(gamma_v);
  if (mirrored_) {
    const double g = std::clamp(std::abs(gamma_v), 0.0, jhi_);
    const auto e = w_.eval(rho_pos(g));
    const double v = e.dphi * e.phi;
    return gamma_v < 0.0 ? -v : v;
  }
  const auto e = w_.eval(rho_of(gamma_v));
  return e.dphi * e.phi;
}

double GammaTransform::psi_tab(double gamma_v) const {
  if (mirrored_) return psi_t_(std::abs(gamma_v));
  return psi_t_(gamma_v);
}

double GammaTransform::dpsi_tab(double gamma_v) const {
  if (mirrored_) {
    const double v = dpsi_t_(std::abs(gamma_v));
    return gamma_v < 0.0 ? -v : v;
  }
  return dpsi_t_(gamma_v);
}

std::vector<double> GammaTransform::forward(
    const std::vector<double>& rho_values) const {
  std::vector<double> out(rho_values.size());
  for (std::size_t i = 0; i < rho_values.size(); ++i)
    out[i] = gamma(rho_values[i]);
  return out;
}

std::vector<double> GammaTransform::inverse(
    const std::vector<double>& gamma_values) const {
  std::vector<double> out(gamma_values.size());
  for (std::size_t i = 0; i < gamma_values.size(); ++i)
    out[i] = rho_of(gamma_values[i]);
  return out;
}

}  // namespace warpflow
