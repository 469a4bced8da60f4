#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "warpflow/flow.hpp"
#include "warpflow/warp.hpp"

namespace warpflow {

struct WarpConfig {
  WarpKind kind = WarpKind::SphereSine;
  double lo = 0.0, hi = 1.0;
  std::vector<double> coefficients;
  std::optional<double> rho_bar;  // default: interval midpoint
};

struct InitialSpec {
  enum class Kind { Constant, Cosine, RandomTrig, File };
  Kind kind = Kind::Constant;
  std::vector<double> args;  // constant:c | cosine:a,m,c | random-trig:mmax,amp
  std::string path;          // file:path
};

struct FlowConfig {
  Representation representation = Representation::Rho;
  Domain domain = Domain::PeriodicCircle;
  int n = 1;
  std::size_t grid_n = 256;
  int k = 1;  // arc subdivision count (dirichlet-arc only)
  double t_end = 1.0;
  std::vector<double> dump_times;
  double cadence = 0.01;
  double g_max = 1e3;
  double dt_min = 1e-14;
  double step_tol = 1e-8;
  InitialSpec initial;
};

enum class BarrierMode { Off, Auto, Manual };

struct DiagnosticsConfig {
  BarrierMode barrier = BarrierMode::Off;
  double delta = 0.5;
  double lambda_bar = 0.1;
  double eta = 0.05;
};

struct BlowupRunConfig {
  double sigma = 0.25;
  double lambda = 1.0;
  double g_max = 1e3;
  std::vector<std::size_t> grid_levels{256, 512, 1024};
};

struct RunConfig {
  WarpConfig warp;
  FlowConfig flow;
  DiagnosticsConfig diagnostics;
  BlowupRunConfig blowup;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;  // 0: leave the runtime default
  bool has_warp = false;
  bool has_flow = false;
  bool rho_bar_defaulted = true;  // flagged in output metadata
};

// Sectioned key=value text: [warp]/[flow]/[diagnostics]/[blowup]/[run],
// '#' comments, list values space-separated. Unknown sections or keys and
// malformed values raise ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

WarpFunction make_warp(const WarpConfig& wc);
double resolve_rho_bar(const RunConfig& cfg);

// Initial rho values on the configured grid; gamma-form runs transform them
// afterwards. random-trig draws Fourier amplitudes from the given seed.
std::vector<double> build_initial_rho(const RunConfig& cfg,
                                      const WarpFunction& w);

}  // namespace warpflow
