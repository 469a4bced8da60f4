#pragma once

#include <string>
#include <vector>

#include "warpflow/numerics.hpp"

namespace warpflow {

enum class WarpKind {
  SphereSine,
  HyperbolicSinh,
  EuclideanIdentity,
  Cosh,
  Constant,
  EvenPolynomial,
};

std::string to_string(WarpKind k);
WarpKind warp_kind_from_string(const std::string& s);

// Closed-form warping function phi with analytic first and second
// derivatives on a closed interval [lo, hi]; phi > 0 there, checked on a
// dense grid at construction.
class WarpFunction {
 public:
  struct Eval {
    double phi;
    double dphi;
    double d2phi;
  };

  static WarpFunction make(WarpKind kind, double lo, double hi,
                           std::vector<double> coefficients = {});

  Eval eval(double rho) const;
  double phi(double rho) const;
  double dphi(double rho) const;
  double d2phi(double rho) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  WarpKind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coeff_; }

  // phi(-r) = phi(r) as an identity of the closed form.
  bool even_about_zero() const;

  // DomainError when rho falls outside [lo, hi] beyond roundoff slack.
  void check_domain(double rho) const;

  double min_phi(int grid_size = 4096) const;
  double max_phi(int grid_size = 4096) const;

 private:
  WarpFunction(WarpKind kind, double lo, double hi,
               std::vector<double> coefficients);
  Eval eval_unchecked(double rho) const;

  WarpKind kind_;
  double lo_, hi_;
  std::vector<double> coeff_;
};

struct Condition2Report {
  bool holds;
  double min_value;
  double argmin;
};

// Grid minimum of dphi^2 - phi * d2phi over [lo, hi]; holds iff min >= -tol.
Condition2Report check_condition2(const WarpFunction& w, int grid_size = 10000,
                                  double tol = 1e-12);

}  // namespace warpflow
