#include "warpflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "warpflow/blowup.hpp"
#include "warpflow/csv.hpp"
#include "warpflow/diagnostics.hpp"
#include "warpflow/transform.hpp"

namespace warpflow {

namespace {

void ensure_out_dir(const std::string& dir) {
  if (dir.empty() || dir == ".") return;
  std::filesystem::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return (std::filesystem::path(dir) / name).string();
}

void require_warp(const RunConfig& cfg) {
  if (!cfg.has_warp) throw ConfigError("config needs a [warp] section");
}

}  // namespace

int cmd_check_warp(const RunConfig& cfg, std::ostream& out) {
  require_warp(cfg);
  const WarpFunction w = make_warp(cfg.warp);
  out << "warp: " << to_string(w.kind()) << " on [" << format_g17(w.lo())
      << ", " << format_g17(w.hi()) << "]\n";
  const Condition2Report rep = check_condition2(w);
  out << "convexity margin dphi^2 - phi*d2phi: "
      << (rep.holds ? "HOLDS" : "FAILS") << " (min "
      << format_g17(rep.min_value) << " at rho=" << format_g17(rep.argmin)
      << ")\n";
  const double rho_bar = resolve_rho_bar(cfg);
  const GammaTransform tr(w, rho_bar);
  out << "rho_bar: " << format_g17(rho_bar)
      << (cfg.rho_bar_defaulted ? " (defaulted to the interval midpoint)"
                                : "")
      << "\n";
  out << "transformed range J: [" << format_g17(tr.j_lo()) << ", "
      << format_g17(tr.j_hi()) << "]"
      << (tr.mirrored() ? " (symmetric)" : "") << "\n";
  return 0;
}

namespace {

struct RunArtifacts {
  Trajectory traj;
  std::vector<DiagnosticsRecord> records;
  std::optional<BarrierParams> barrier;
  std::string barrier_note;
};

RunArtifacts execute_run(const RunConfig& cfg, const WarpFunction& w) {
  const FlowConfig& fc = cfg.flow;
  const std::vector<double> rho0 = build_initial_rho(cfg, w);

  std::unique_ptr<GammaTransform> tr;
  const bool needs_transform =
      fc.representation == Representation::Gamma ||
      cfg.diagnostics.barrier != BarrierMode::Off;
  if (needs_transform)
    tr = std::make_unique<GammaTransform>(w, resolve_rho_bar(cfg));

  FlowState s;
  switch (fc.domain) {
    case Domain::PeriodicCircle:
      s.profile = Profile::periodic(fc.grid_n);
      break;
    case Domain::DirichletArc:
      s.profile = Profile::arc(kPi / static_cast<double>(fc.k), fc.grid_n);
      break;
    case Domain::Colatitude:
      s.profile = Profile::colatitude(fc.grid_n);
      break;
  }
  s.t = 0.0;
  s.n = fc.n;
  s.rep = fc.representation;
  s.warp = &w;
  s.transform = tr.get();
  if (fc.representation == Representation::Gamma) {
    s.profile.values = tr->forward(rho0);
  } else {
    s.profile.values = rho0;
  }

  RunArtifacts art;
  if (cfg.diagnostics.barrier == BarrierMode::Manual) {
    BarrierParams bp;
    bp.delta = cfg.diagnostics.delta;
    bp.lambda_bar = cfg.diagnostics.lambda_bar;
    bp.eta = cfg.diagnostics.eta;
    bp.validate();
    art.barrier = bp;
  } else if (cfg.diagnostics.barrier == BarrierMode::Auto) {
    // lambda from the rho modulus at exponent 1/2, then delta by bisection
    // against the gamma modulus.
    Profile rp = s.profile;
    rp.values = rho0;
    const auto omega_rho = modulus_of_continuity(rp);
    const double lam = min_holder_coeff(omega_rho, rp.h(), 0.5);
    const double lam_bar = lam > 0.0 ? lam / w.min_phi() : 0.0;
    Profile gp = s.profile;
    gp.values = tr->forward(rho0);
    const auto omega_gamma = modulus_of_continuity(gp);
    if (lam_bar > 0.0) {
      const DeltaFit df = fit_delta(omega_gamma, gp.h(), lam_bar);
      if (df.feasible) {
        BarrierParams bp;
        bp.delta = df.delta;
        bp.lambda_bar = lam_bar;
        bp.eta = cfg.diagnostics.eta;
        art.barrier = bp;
      } else {
        art.barrier_note = "barrier fit infeasible at the initial data";
      }
    } else {
      art.barrier_note = "initial data is constant; barrier fit skipped";
    }
  }

  const CumulativeIntegral vol_prefix = make_volume_prefix(w, fc.n);
  const bool gamma_form = fc.representation == Representation::Gamma;
  const Hook hook = [&](const FlowState& st) {
    DiagnosticsRecord r;
    r.t = st.t;
    Profile rho_p = st.profile;
    if (gamma_form) rho_p.values = tr->inverse(st.profile.values);
    if (st.profile.domain != Domain::DirichletArc) {
      r.area = area(rho_p, w, fc.n);
      r.volume = volume(rho_p, w, fc.n, vol_prefix);
    }
    r.sup_grad = gradient_sup(rho_p);
    const auto omega = modulus_of_continuity(rho_p);
    r.osc = omega.back();
    for (double x : omega) r.osc = std::max(r.osc, x);
    r.holder_half = min_holder_coeff(omega, rho_p.h(), 0.5);
    if (art.barrier) {
      Profile gp = st.profile;
      if (!gamma_form) gp.values = tr->forward(st.profile.values);
      r.max_z = z_monitor_profile(gp, *art.barrier, st.t).max_z;
    }
    art.records.push_back(std::move(r));
  };

  RunOptions opt;
  opt.t_end = fc.t_end;
  opt.dump_times = fc.dump_times;
  opt.cadence = fc.cadence;
  opt.g_max = fc.g_max;
  opt.dt_min = fc.dt_min;
  opt.step_tol = fc.step_tol;
  art.traj = run_flow(s, opt, hook);
  return art;
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  require_warp(cfg);
  if (!cfg.has_flow) throw ConfigError("config needs a [flow] section");
  const WarpFunction w = make_warp(cfg.warp);
  ensure_out_dir(cfg.out_dir);
  RunArtifacts art = execute_run(cfg, w);

  write_diagnostics_csv(join_path(cfg.out_dir, "diagnostics.csv"),
                        art.records);
  write_snapshots_csv(join_path(cfg.out_dir, "snapshots.csv"),
                      art.traj.snapshots);

  const Trajectory& traj = art.traj;
  out << "t_final: " << format_g17(traj.t_final) << "\n";
  switch (traj.reason) {
    case Termination::ReachedEnd:
      out << "termination: reached t_end\n";
      break;
    case Termination::BlowupSuspected:
      out << "termination: blow-up suspected at t_hat="
          << format_g17(traj.t_hat.value_or(traj.t_final)) << " (node "
          << traj.witness.value_or(0) << ")\n";
      break;
    case Termination::RangeErrorStop:
      out << "termination: profile left the admissible range (" << traj.note
          << ")\n";
      break;
  }
  if (!art.records.empty() && art.records.front().volume != 0.0) {
    const double v0 = art.records.front().volume;
    double drift = 0.0;
    for (const auto& r : art.records)
      drift = std::max(drift, std::abs(r.volume - v0));
    out << "relative volume drift: " << format_g17(drift / std::abs(v0))
        << "\n";
  }
  if (!art.barrier_note.empty()) out << "note: " << art.barrier_note << "\n";
  if (art.barrier) {
    double mz = -std::numeric_limits<double>::infinity();
    for (const auto& r : art.records)
      if (r.max_z) mz = std::max(mz, *r.max_z);
    out << "barrier monitor max z: " << format_g17(mz)
        << " (delta=" << format_g17(art.barrier->delta)
        << ", lambda_bar=" << format_g17(art.barrier->lambda_bar)
        << ", eta=" << format_g17(art.barrier->eta) << ")\n";
  }
  return traj.reason == Termination::RangeErrorStop ? 1 : 0;
}

int cmd_modulus(const RunConfig& cfg, const std::string& profile_path,
                std::ostream& out) {
  std::ifstream in(profile_path);
  if (!in) throw ConfigError("cannot open profile: " + profile_path);
  std::vector<double> vals;
  double x;
  while (in >> x) vals.push_back(x);
  if (vals.size() < 2) throw ConfigError("profile needs at least 2 values");

  Profile p;
  switch (cfg.flow.domain) {
    case Domain::PeriodicCircle:
      p = Profile::periodic(vals.size());
      break;
    case Domain::DirichletArc:
      p = Profile::arc(kPi / static_cast<double>(std::max(cfg.flow.k, 1)),
                       vals.size() - 1);
      break;
    case Domain::Colatitude:
      p = Profile::colatitude(vals.size() - 1);
      break;
  }
  p.values = vals;
  const auto omega = modulus_of_continuity(p);
  ensure_out_dir(cfg.out_dir);
  write_modulus_csv(join_path(cfg.out_dir, "modulus.csv"), omega, p.h());
  out << "lags: " << omega.size() - 1 << " (h=" << format_g17(p.h()) << ")\n";
  out << "holder coefficient at exponent 1/2: "
      << format_g17(min_holder_coeff(omega, p.h(), 0.5)) << "\n";
  out << "holder coefficient at exponent " << format_g17(cfg.blowup.sigma)
      << ": " << format_g17(min_holder_coeff(omega, p.h(), cfg.blowup.sigma))
      << "\n";
  return 0;
}

int cmd_blowup(const RunConfig& cfg, std::ostream& out) {
  require_warp(cfg);
  const WarpFunction w = make_warp(cfg.warp);
  const GammaTransform tr(w, resolve_rho_bar(cfg));
  const SubsolutionParams sp =
      choose_params(cfg.blowup.sigma, cfg.blowup.lambda, tr);
  out << "parameters: p=" << format_g17(sp.p) << " k=" << sp.k
      << " tau=" << format_g17(sp.tau) << " c1=" << format_g17(sp.c1)
      << " c2=" << format_g17(sp.c2) << "\n";
  out << "c1 asymptotic reference bound: "
      << format_g17(sp.c1_asymptotic_bound) << "\n";

  const BlowupExperimentReport rep =
      run_blowup_experiment(sp, tr, cfg.blowup.grid_levels, cfg.blowup.g_max);
  out << "residual maxima: cusp " << format_g17(rep.residuals.max_residual_zeta1)
      << ", cap " << format_g17(rep.residuals.max_residual_zeta2) << " ("
      << (rep.residuals.pass ? "pass" : "FAIL") << ")\n";
  ensure_out_dir(cfg.out_dir);
  for (const auto& l : rep.levels) {
    out << "grid " << l.grid_n << ": ";
    if (l.t_hat)
      out << "t_hat=" << format_g17(*l.t_hat) << " (node "
          << l.witness.value_or(0) << ")";
    else
      out << "no detection (final t=" << format_g17(l.final_t)
          << ", peak gradient " << format_g17(l.max_grad) << ")";
    out << ", min margin " << format_g17(l.min_margin)
        << (l.margin_ok ? "" : " [below floor; rerun at twice the grid]")
        << "\n";
    std::ostringstream name;
    name << "margin_" << l.grid_n << ".csv";
    std::ofstream mout(join_path(cfg.out_dir, name.str()),
                       std::ios::binary);
    mout << "t,margin\n";
    for (const auto& row : l.margin_series)
      mout << format_g17(row[0]) << ',' << format_g17(row[1]) << '\n';
  }
  if (rep.t_hat_variation)
    out << "t_hat variation across the two finest grids: "
        << format_g17(*rep.t_hat_variation) << "\n";
  if (rep.extension) {
    out << "whole-circle control (" << rep.extension->grid_n << " nodes): ";
    if (rep.extension->t_hat)
      out << "t_hat=" << format_g17(*rep.extension->t_hat);
    else
      out << "no detection";
    if (rep.extension_variation)
      out << ", variation vs arc " << format_g17(*rep.extension_variation);
    out << "\n";
  }
  out << "tau: " << format_g17(sp.tau) << "\n";
  out << (rep.pass ? "experiment: PASS\n" : "experiment: FAIL\n");
  if (!rep.note.empty()) out << rep.note << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  require_warp(cfg);
  const WarpFunction w = make_warp(cfg.warp);
  const GammaTransform tr(w, resolve_rho_bar(cfg));
  ensure_out_dir(cfg.out_dir);
  const std::string path = join_path(cfg.out_dir, "transform.csv");
  std::ofstream tout(path, std::ios::binary);
  tout << "rho,gamma,psi,dpsi\n";
  const std::size_t rows = 512;
  for (std::size_t i = 0; i <= rows; ++i) {
    const double r =
        w.lo() + (w.hi() - w.lo()) * static_cast<double>(i) /
                     static_cast<double>(rows);
    const double g = tr.gamma(r);
    tout << format_g17(r) << ',' << format_g17(g) << ','
         << format_g17(tr.psi(g)) << ',' << format_g17(tr.dpsi(g)) << '\n';
  }
  out << "J: [" << format_g17(tr.j_lo()) << ", " << format_g17(tr.j_hi())
      << "]"
      << (tr.mirrored() ? " (symmetric)" : "") << "\n";
  out << "rho_bar: " << format_g17(tr.rho_bar())
      << (cfg.rho_bar_defaulted ? " (defaulted to the interval midpoint)"
                                : "")
      << "\n";
  out << "wrote " << path << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"curvature flow laboratory for warped products over spheres"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string profile_path;
  int threads = -1;
  long long seed = -1;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", config_path, "config file");
    if (needs_config) copt->required();
    sub->add_option("--out", out_override, "output directory");
    sub->add_option("--threads", threads, "worker thread count");
    sub->add_option("--seed", seed, "random seed override");
  };

  CLI::App* c_check = app.add_subcommand(
      "check-warp", "validate a warp function and report its range");
  add_common(c_check, true);
  CLI::App* c_run =
      app.add_subcommand("run", "evolve a profile and write diagnostics");
  add_common(c_run, true);
  CLI::App* c_mod = app.add_subcommand(
      "modulus", "modulus of continuity of a stored profile");
  add_common(c_mod, true);
  c_mod->add_option("profile", profile_path, "profile values, one per line")
      ->required();
  CLI::App* c_blow = app.add_subcommand(
      "blowup", "feasibility search and gradient blow-up experiment");
  add_common(c_blow, true);
  CLI::App* c_tr = app.add_subcommand(
      "transform", "tabulate the arclength change of variables");
  add_common(c_tr, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (threads >= 0) cfg.threads = threads;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    if (c_check->parsed()) return cmd_check_warp(cfg, std::cout);
    if (c_run->parsed()) return cmd_run(cfg, std::cout);
    if (c_mod->parsed()) return cmd_modulus(cfg, profile_path, std::cout);
    if (c_blow->parsed()) return cmd_blowup(cfg, std::cout);
    if (c_tr->parsed()) return cmd_transform(cfg, std::cout);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace warpflow
