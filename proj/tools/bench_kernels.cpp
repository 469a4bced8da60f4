// Compares the OpenMP kernels against their serial references on synthetic
// profiles and reports wall times plus the largest output deviation
// (expected exactly zero: the parallel fills write disjoint slots).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "warpflow/blowup.hpp"
#include "warpflow/diagnostics.hpp"
#include "warpflow/flow.hpp"
#include "warpflow/transform.hpp"
#include "warpflow/warp.hpp"

using namespace warpflow;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main() {
  const int full = hardware_threads();
  std::printf("threads available: %d\n", full);

  const WarpFunction w = WarpFunction::make(WarpKind::Cosh, -1.0, 1.0);
  const GammaTransform tr(w, 0.0);

  {
    const std::size_t n = 1 << 14;
    Profile p = Profile::periodic(n);
    for (std::size_t j = 0; j < n; ++j)
      p.values[j] = 0.4 * std::sin(p.theta(j)) + 0.1 * std::sin(7 * p.theta(j));

    set_threads(1);
    double t0 = now_ms();
    const auto m_serial = modulus_of_continuity(p);
    double t1 = now_ms();
    set_threads(full);
    double t2 = now_ms();
    const auto m_par = modulus_of_continuity(p);
    double t3 = now_ms();
    double dev = 0.0;
    for (std::size_t l = 0; l < m_serial.size(); ++l)
      dev = std::max(dev, std::abs(m_serial[l] - m_par[l]));
    std::printf("modulus %zu nodes: serial %.1f ms, parallel %.1f ms, max dev %g\n",
                n, t1 - t0, t3 - t2, dev);
  }

  {
    const std::size_t n = 1 << 16;
    Profile p = Profile::periodic(n);
    for (std::size_t j = 0; j < n; ++j) p.values[j] = 0.5 * std::sin(p.theta(j));
    FlowState s;
    s.profile = p;
    s.n = 1;
    s.rep = Representation::Gamma;
    s.transform = &tr;

    set_threads(1);
    double t0 = now_ms();
    std::vector<double> r_serial;
    for (int rep = 0; rep < 20; ++rep) r_serial = rhs_gamma(s);
    double t1 = now_ms();
    set_threads(full);
    double t2 = now_ms();
    std::vector<double> r_par;
    for (int rep = 0; rep < 20; ++rep) r_par = rhs_gamma(s);
    double t3 = now_ms();
    double dev = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      dev = std::max(dev, std::abs(r_serial[j] - r_par[j]));
    std::printf("rhs_gamma %zu nodes x20: serial %.1f ms, parallel %.1f ms, max dev %g\n",
                n, t1 - t0, t3 - t2, dev);
  }

  {
    // Feasible parameters keep the sweep's residuals finite; hand-picked
    // ones can push the barrier outside J and turn the maxima into -inf.
    const SubsolutionParams sp = choose_params(0.25, 1.0, tr);

    set_threads(1);
    double t0 = now_ms();
    const auto rep_serial = verify_subsolution(sp, tr, 1024, 256);
    double t1 = now_ms();
    set_threads(full);
    double t2 = now_ms();
    const auto rep_par = verify_subsolution(sp, tr, 1024, 256);
    double t3 = now_ms();
    const double dev =
        std::abs(rep_serial.max_residual_zeta1 - rep_par.max_residual_zeta1) +
        std::abs(rep_serial.max_residual_zeta2 - rep_par.max_residual_zeta2);
    std::printf("residual sweep 1024x256: serial %.1f ms, parallel %.1f ms, max dev %g\n",
                t1 - t0, t3 - t2, dev);
  }

  set_threads(full);
  return 0;
}
