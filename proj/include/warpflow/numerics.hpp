#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace warpflow {

inline constexpr double kPi = 3.14159265358979323846;

// Bad argument, or evaluation outside a declared domain.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Flow values escaped their admissible interval mid-run.
struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Quadrature or root finding failed to reach tolerance.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Operation precondition violated by the caller.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Fn1 = std::function<double(double)>;

// One Gauss-Kronrod 7-15 panel on [a, b]; *err_est receives the
// |K15 - G7| estimate when non-null.
double gk15(const Fn1& f, double a, double b, double* err_est = nullptr);

// Adaptive panel bisection until the summed error estimate meets abs_tol.
// Orientation-aware: integrate(f, b, a) = -integrate(f, a, b).
double integrate(const Fn1& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 60);

// Compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Prefix table of x -> \int_a^x f on [a, b]: one gk15 panel per uniform cell,
// Kahan-accumulated. Off-node queries add a partial panel on top of the
// nearest prefix below. Queries at table nodes reproduce the stored prefix.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(Fn1 f, double a, double b, std::size_t panels);

  double operator()(double x) const;

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t panels() const { return n_; }
  double node(std::size_t i) const {
    return i == n_ ? b_ : a_ + h_ * static_cast<double>(i);
  }
  double prefix(std::size_t i) const { return cum_[i]; }

 private:
  Fn1 f_;
  double a_ = 0.0, b_ = 0.0, h_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> cum_;
};

// Cubic Hermite interpolant on strictly increasing nodes with caller-supplied
// slopes. Queries outside the node range clamp to the end values.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> y,
               std::vector<double> d);

  double operator()(double q) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

// Root of a nondecreasing f on [lo, hi], Newton iteration from x0 with
// bisection fallback whenever an iterate leaves the current bracket.
// Terminates when the step or the bracket shrinks below xtol.
double newton_bisect(const Fn1& f, const Fn1& df, double lo, double hi,
                     double x0, double xtol = 1e-12, int max_iter = 100);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Ordinary least squares y ~ intercept + slope * x; r2 = 1 for constant y.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace warpflow
