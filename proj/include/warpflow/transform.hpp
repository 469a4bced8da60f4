#pragma once

#include <vector>

#include "warpflow/numerics.hpp"
#include "warpflow/warp.hpp"

namespace warpflow {

// Change of variables gamma = Gamma(rho) = \int_{rho_bar}^rho ds/phi(s),
// strictly increasing with Gamma(rho_bar) = 0, together with
// psi = phi o Gamma^{-1} on J = Gamma(I) and its derivative
// psi'(gamma) = phi'(r) * phi(r) at r = Gamma^{-1}(gamma).
//
// gamma/rho_of/psi/dpsi are the exact evaluators: prefix-table quadrature and
// safeguarded Newton inversion to tol. psi_tab/dpsi_tab interpolate cubic
// Hermite tables built at construction; they are meant for grid loops and
// agree with the exact path to table accuracy.
//
// For an even warp on a symmetric interval with rho_bar = 0, all evaluators
// reflect through the origin, so Gamma stays odd and psi even bitwise.
class GammaTransform {
 public:
  GammaTransform(const WarpFunction& w, double rho_bar, double tol = 1e-12,
                 std::size_t panels = 2048);

  double gamma(double rho) const;
  double rho_of(double gamma_v) const;
  double psi(double gamma_v) const;
  double dpsi(double gamma_v) const;
  double psi_tab(double gamma_v) const;
  double dpsi_tab(double gamma_v) const;

  double j_lo() const { return jlo_; }
  double j_hi() const { return jhi_; }
  double rho_bar() const { return rho_bar_; }
  bool mirrored() const { return mirrored_; }
  const WarpFunction& warp() const { return w_; }

  std::vector<double> forward(const std::vector<double>& rho_values) const;
  std::vector<double> inverse(const std::vector<double>& gamma_values) const;

 private:
  double gamma_pos(double rho) const;
  double rho_pos(double g) const;
  void check_gamma_domain(double g) const;

  WarpFunction w_;
  double rho_bar_;
  double tol_;
  bool mirrored_ = false;
  CumulativeIntegral cum_;  // of 1/phi over [lo, hi], or [0, hi] mirrored
  double gamma0_ = 0.0;     // prefix at rho_bar on the unmirrored path
  double jlo_ = 0.0, jhi_ = 0.0;
  std::vector<double> gamma_nodes_;  // Gamma at the cum_ nodes, ascending
  std::vector<double> rho_nodes_;
  HermiteTable inv_seed_;  // gamma -> rho
  HermiteTable psi_t_;     // gamma -> psi
  HermiteTable dpsi_t_;    // gamma -> psi'
};

}  // namespace warpflow
