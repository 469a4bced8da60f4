#include "warpflow/warp.hpp"

#include <cmath>
#include <utility>

namespace warpflow {

namespace {

double horner(const std::vector<double>& c, double z) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

double horner_deriv(const std::vector<double>& c, double z) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) v = v * z + static_cast<double>(i) * c[i];
  return v;
}

double horner_deriv2(const std::vector<double>& c, double z) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 2;)
    v = v * z + static_cast<double>(i) * static_cast<double>(i - 1) * c[i];
  return v;
}

}  // namespace

std::string to_string(WarpKind k) {
  switch (k) {
    case WarpKind::SphereSine: return "sphere-sine";
    case WarpKind::HyperbolicSinh: return "hyperbolic-sinh";
    case WarpKind::EuclideanIdentity: return "euclidean-identity";
    case WarpKind::Cosh: return "cosh";
    case WarpKind::Constant: return "constant";
    case WarpKind::EvenPolynomial: return "even-polynomial";
  }
  throw DomainError("unknown warp kind");
}

WarpKind warp_kind_from_string(const std::string& s) {
  if (s == "sphere-sine") return WarpKind::SphereSine;
  if (s == "hyperbolic-sinh") return WarpKind::HyperbolicSinh;
  if (s == "euclidean-identity") return WarpKind::EuclideanIdentity;
  if (s == "cosh") return WarpKind::Cosh;
  if (s == "constant") return WarpKind::Constant;
  if (s == "even-polynomial") return WarpKind::EvenPolynomial;
  throw ConfigError("unknown warp kind: " + s);
}

WarpFunction::WarpFunction(WarpKind kind, double lo, double hi,
                           std::vector<double> coefficients)
    : kind_(kind), lo_(lo), hi_(hi), coeff_(std::move(coefficients)) {}

WarpFunction WarpFunction::make(WarpKind kind, double lo, double hi,
                                std::vector<double> coefficients) {
  if (!(lo < hi)) throw DomainError("warp interval must satisfy lo < hi");
  switch (kind) {
    case WarpKind::Constant:
      if (coefficients.empty()) coefficients = {1.0};
      if (coefficients.size() != 1)
        throw DomainError("constant warp takes one coefficient");
      break;
    case WarpKind::EvenPolynomial:
      if (coefficients.empty())
        throw DomainError("even-polynomial warp needs coefficients");
      break;
    default:
      if (!coefficients.empty())
        throw DomainError("coefficients apply to even-polynomial only");
      break;
  }
  WarpFunction w(kind, lo, hi, std::move(coefficients));
  constexpr int kPositivityGrid = 4096;
  for (int i = 0; i <= kPositivityGrid; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / kPositivityGrid;
    if (!(w.eval_unchecked(r).phi > 0.0))
      throw DomainError("phi must be positive on the interval");
  }
  return w;
}

WarpFunction::Eval WarpFunction::eval_unchecked(double rho) const {
  switch (kind_) {
    case WarpKind::SphereSine:
      return {std::sin(rho), std::cos(rho), -std::sin(rho)};
    case WarpKind::HyperbolicSinh:
      return {std::sinh(rho), std::cosh(rho), std::sinh(rho)};
    case WarpKind::EuclideanIdentity:
      return {rho, 1.0, 0.0};
    case WarpKind::Cosh:
      return {std::cosh(rho), std::sinh(rho), std::cosh(rho)};
    case WarpKind::Constant:
      return {coeff_[0], 0.0, 0.0};
    case WarpKind::EvenPolynomial: {
      const double z = rho * rho;
      const double p = horner(coeff_, z);
      const double p1 = horner_deriv(coeff_, z);
      const double p2 = horner_deriv2(coeff_, z);
      return {p, 2.0 * rho * p1, 2.0 * p1 + 4.0 * z * p2};
    }
  }
  throw DomainError("unknown warp kind");
}

void WarpFunction::check_domain(double rho) const {
  const double slack = 1e-12 * (std::abs(lo_) + std::abs(hi_) + 1.0);
  if (rho < lo_ - slack || rho > hi_ + slack)
    throw DomainError("rho outside the warp interval");
}

WarpFunction::Eval WarpFunction::eval(double rho) const {
  check_domain(rho);
  return eval_unchecked(rho);
}

double WarpFunction::phi(double rho) const { return eval(rho).phi; }
double WarpFunction::dphi(double rho) const { return eval(rho).dphi; }
double WarpFunction::d2phi(double rho) const { return eval(rho).d2phi; }

bool WarpFunction::even_about_zero() const {
  switch (kind_) {
    case WarpKind::Cosh:
    case WarpKind::Constant:
    case WarpKind::EvenPolynomial:
      return true;
    default:
      return false;
  }
}

double WarpFunction::min_phi(int grid_size) const {
  double m = eval_unchecked(lo_).phi;
  for (int i = 1; i <= grid_size; ++i) {
    const double r = lo_ + (hi_ - lo_) * static_cast<double>(i) / grid_size;
    m = std::min(m, eval_unchecked(r).phi);
  }
  return m;
}

double WarpFunction::max_phi(int grid_size) const {
  double m = eval_unchecked(lo_).phi;
  for (int i = 1; i <= grid_size; ++i) {
    const double r = lo_ + (hi_ - lo_) * static_cast<double>(i) / grid_size;
    m = std::max(m, eval_unchecked(r).phi);
  }
  return m;
}

Condition2Report check_condition2(const WarpFunction& w, int grid_size,
                                  double tol) {
  if (grid_size < 2) throw ContractError("check_condition2: grid_size < 2");
  Condition2Report rep{true, 0.0, w.lo()};
  bool first = true;
  for (int i = 0; i < grid_size; ++i) {
    const double r =
        w.lo() + (w.hi() - w.lo()) * static_cast<double>(i) / (grid_size - 1);
    const auto e = w.eval(r);
    const double q = e.dphi * e.dphi - e.phi * e.d2phi;
    if (first || q < rep.min_value) {
      rep.min_value = q;
      rep.argmin = r;
      first = false;
    }
  }
  rep.holds = rep.min_value >= -tol;
  return rep;
}

}  // namespace warpflow
