#include "warpflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace warpflow {

namespace {

// 7-15 Gauss-Kronrod pair. Kronrod abscissae (positive half, descending) and
// weights; the embedded Gauss rule uses the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double integrate_rec(const Fn1& f, double a, double b, double tol, int depth,
                     int max_depth) {
  double err = 0.0;
  const double v = gk15(f, a, b, &err);
  if (err <= tol) return v;
  const double width_floor = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
  if (b - a <= width_floor) return v;
  if (depth >= max_depth)
    throw NumericError("adaptive quadrature exceeded max depth");
  const double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth + 1, max_depth) +
         integrate_rec(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double gk15(const Fn1& f, double a, double b, double* err_est) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    k += kWgk[i] * fsum;
    if (i % 2 == 1) g += kWg[i / 2] * fsum;
  }
  if (err_est) *err_est = std::abs(hw) * std::abs(k - g);
  return hw * k;
}

double integrate(const Fn1& f, double a, double b, double abs_tol,
                 int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol, max_depth);
  if (!(abs_tol > 0.0))
    throw ContractError("integrate: tolerance must be > 0");
  return integrate_rec(f, a, b, abs_tol, 0, max_depth);
}

CumulativeIntegral::CumulativeIntegral(Fn1 f, double a, double b,
                                       std::size_t panels)
    : f_(std::move(f)), a_(a), b_(b), n_(panels) {
  if (!(b > a)) throw DomainError("CumulativeIntegral: empty interval");
  if (panels == 0) throw DomainError("CumulativeIntegral: zero panels");
  h_ = (b - a) / static_cast<double>(panels);
  cum_.resize(panels + 1);
  cum_[0] = 0.0;
  KahanSum acc;
  for (std::size_t i = 0; i < panels; ++i) {
    acc.add(gk15(f_, node(i), node(i + 1)));
    cum_[i + 1] = acc.value();
  }
}

double CumulativeIntegral::operator()(double x) const {
  const double slack = 1e-9 * (std::abs(a_) + std::abs(b_) + 1.0);
  if (x < a_ - slack || x > b_ + slack)
    throw DomainError("CumulativeIntegral: query outside range");
  x = std::clamp(x, a_, b_);
  std::size_t i = static_cast<std::size_t>((x - a_) / h_);
  i = std::min(i, n_ - 1);
  const double lo = node(i);
  if (x == lo) return cum_[i];
  // Exact node hits return the stored prefix: a fresh panel quadrature can
  // differ from the compensated running sum in the last bit.
  if (x == node(i + 1)) return cum_[i + 1];
  return cum_[i] + gk15(f_, lo, x);
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y,
                           std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
  if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
    throw DomainError("HermiteTable: need >= 2 nodes with matching arrays");
  for (std::size_t i = 0; i + 1 < x_.size(); ++i)
    if (!(x_[i + 1] > x_[i]))
      throw DomainError("HermiteTable: nodes must be strictly increasing");
}

double HermiteTable::operator()(double q) const {
  if (q <= x_.front()) return y_.front();
  if (q >= x_.back()) return y_.back();
  const std::size_t hi =
      static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), q) -
                               x_.begin());
  const std::size_t i = hi - 1;
  const double dx = x_[hi] - x_[i];
  const double t = (q - x_[i]) / dx;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * dx * d_[i] + h01 * y_[hi] + h11 * dx * d_[hi];
}

double newton_bisect(const Fn1& f, const Fn1& df, double lo, double hi,
                     double x0, double xtol, int max_iter) {
  if (!(hi >= lo)) throw DomainError("newton_bisect: empty bracket");
  if (f(lo) > 0.0 || f(hi) < 0.0)
    throw ContractError("newton_bisect: root not bracketed");
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo <= xtol) return 0.5 * (lo + hi);
    const double d = df(x);
    double xn;
    if (d > 0.0) {
      xn = x - fx / d;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    } else {
      xn = 0.5 * (lo + hi);
    }
    if (std::abs(xn - x) <= xtol) return xn;
    x = xn;
  }
  return x;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ContractError("fit_line: need >= 2 matching samples");
  const double n = static_cast<double>(x.size());
  KahanSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  KahanSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (sxx.value() == 0.0) throw ContractError("fit_line: degenerate abscissae");
  LineFit out;
  out.slope = sxy.value() / sxx.value();
  out.intercept = my - out.slope * mx;
  KahanSum ss_res, ss_tot;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res.add(r * r);
    ss_tot.add((y[i] - my) * (y[i] - my));
  }
  out.r2 = ss_tot.value() == 0.0 ? 1.0 : 1.0 - ss_res.value() / ss_tot.value();
  return out;
}

}  // namespace warpflow
