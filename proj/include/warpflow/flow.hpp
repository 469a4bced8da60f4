#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "warpflow/transform.hpp"
#include "warpflow/warp.hpp"

namespace warpflow {

enum class Domain { PeriodicCircle, DirichletArc, Colatitude };
enum class Representation { Rho, Gamma };

// Uniform grid samples. Periodic profiles store N values (node j at j*h,
// theta_N identified with theta_0); arc and colatitude profiles store N+1
// values with both endpoints included.
struct Profile {
  Domain domain = Domain::PeriodicCircle;
  double length = 2.0 * kPi;  // 2*pi | pi/k | pi
  std::vector<double> values;

  std::size_t intervals() const {
    return domain == Domain::PeriodicCircle ? values.size()
                                            : values.size() - 1;
  }
  double h() const { return length / static_cast<double>(intervals()); }
  double theta(std::size_t j) const {
    return length * static_cast<double>(j) / static_cast<double>(intervals());
  }

  static Profile periodic(std::size_t n_intervals, double value = 0.0);
  static Profile arc(double length, std::size_t n_intervals,
                     double value = 0.0);
  static Profile colatitude(std::size_t n_intervals, double value = 0.0);
};

// Exactly one of warp (rho representation) or transform (gamma
// representation) is set; both reference caller-owned immutable objects.
struct FlowState {
  Profile profile;
  double t = 0.0;
  int n = 1;
  Representation rep = Representation::Rho;
  const WarpFunction* warp = nullptr;
  const GammaTransform* transform = nullptr;
};

// Time derivative of the gamma-form flow:
//   (1/psi) * K + n * (psi'/psi^2) * g^2 / sqrt(1+g^2),
// K the conservative face-flux divergence of g/sqrt(1+g^2), with
// sin^{n-1}-weighted fluxes and the symmetric pole limit on colatitude
// domains. Dirichlet endpoints get zero. Values outside J raise RangeError.
std::vector<double> rhs_gamma(const FlowState& s);

// Time derivative of the rho-form flow:
//   K + (n-1) cot(theta) rho_th / W + n (phi'/phi) rho_th^2 / W,
// W = sqrt(phi^2 + rho_th^2) at face midpoints inside the divergence K.
// Values outside I raise RangeError.
std::vector<double> rhs_rho(const FlowState& s);

// Parabolic step-size heuristic
//   0.4 * h^2 * min(psi or phi) * (1 + max g^2)^{3/2} / 2.
// Deliberately optimistic for steep states; the step acceptor is the guard.
double stable_dt(const FlowState& s);

struct StepResult {
  FlowState state;
  double dt_used = 0.0;
  double dt_next = 0.0;
  double error = 0.0;
  bool underflow = false;  // dt fell below dt_min; state is the input
};

// One accepted advance: explicit midpoint trial at dt versus two half steps,
// halving dt until the doubled pair agrees within step_tol; returns the
// half-step result. RangeError from the trials propagates.
StepResult step(const FlowState& s, double dt, double step_tol = 1e-8,
                double dt_min = 1e-14);

enum class Termination { ReachedEnd, BlowupSuspected, RangeErrorStop };

struct RunOptions {
  double t_end = 1.0;
  std::vector<double> dump_times;
  double cadence = 0.01;  // <= 0 disables interior hook calls
  double g_max = 1e3;
  double dt_min = 1e-14;
  double step_tol = 1e-8;
};

struct Snapshot {
  double t;
  Profile profile;
};

struct GradSample {
  double t;
  double sup_grad;
  std::size_t arg_node;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // dump times, plus the final state
  std::vector<GradSample> grad_series;
  Termination reason = Termination::ReachedEnd;
  double t_final = 0.0;
  std::optional<double> t_hat;         // first sup-gradient crossing of g_max
  std::optional<std::size_t> witness;  // node at the crossing
  std::string note;                    // diagnostic for abnormal stops
};

using Hook = std::function<void(const FlowState&)>;

// Adaptive-dt driver: clips steps to land on dump, cadence, and end times,
// calls the hook at start, cadence marks, and termination, and stops early
// when the discrete sup-gradient exceeds g_max or dt underflows (blow-up
// suspected) or the state leaves its admissible interval.
Trajectory run_flow(const FlowState& initial, const RunOptions& opt,
                    const Hook& hook = {});

// Tile 2k alternately reflected copies of a zero-endpoint arc profile over
// the circle: segments j even copy the arc, j odd reverse and negate it.
Profile extend_odd(const Profile& arc_profile, int k);

}  // namespace warpflow
