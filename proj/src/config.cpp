#include "warpflow/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace warpflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("bad number for '" + key + "': " + s);
  return v;
}

long long parse_int(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("bad integer for '" + key + "': " + s);
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, key));
  return out;
}

InitialSpec parse_initial(const std::string& s) {
  const std::string t = trim(s);
  const std::size_t colon = t.find(':');
  const std::string head = colon == std::string::npos ? t : t.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : t.substr(colon + 1);
  InitialSpec spec;
  if (head == "constant") {
    spec.kind = InitialSpec::Kind::Constant;
  } else if (head == "cosine") {
    spec.kind = InitialSpec::Kind::Cosine;
  } else if (head == "random-trig") {
    spec.kind = InitialSpec::Kind::RandomTrig;
  } else if (head == "file") {
    spec.kind = InitialSpec::Kind::File;
    spec.path = trim(rest);
    if (spec.path.empty()) throw ConfigError("initial: file needs a path");
    return spec;
  } else {
    throw ConfigError("initial: unknown kind '" + head + "'");
  }
  std::string args = rest;
  for (char& c : args)
    if (c == ',') c = ' ';
  spec.args = parse_list(args, "initial");
  const std::size_t want =
      spec.kind == InitialSpec::Kind::Constant
          ? 1
          : (spec.kind == InitialSpec::Kind::Cosine ? 3 : 2);
  if (spec.args.size() != want)
    throw ConfigError("initial: '" + head + "' takes " +
                      std::to_string(want) + " arguments");
  return spec;
}

Representation parse_representation(const std::string& s) {
  if (s == "rho") return Representation::Rho;
  if (s == "gamma") return Representation::Gamma;
  throw ConfigError("representation must be rho or gamma, got '" + s + "'");
}

Domain parse_domain(const std::string& s) {
  if (s == "periodic") return Domain::PeriodicCircle;
  if (s == "arc") return Domain::DirichletArc;
  if (s == "colatitude") return Domain::Colatitude;
  throw ConfigError("domain must be periodic, arc or colatitude, got '" + s +
                    "'");
}

BarrierMode parse_barrier(const std::string& s) {
  if (s == "off") return BarrierMode::Off;
  if (s == "auto") return BarrierMode::Auto;
  if (s == "manual") return BarrierMode::Manual;
  throw ConfigError("barrier must be off, auto or manual, got '" + s + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "warp") {
        cfg.has_warp = true;
      } else if (section == "flow") {
        cfg.has_flow = true;
      } else if (section != "diagnostics" && section != "blowup" &&
                 section != "run") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any section");

    if (section == "warp") {
      if (key == "kind") {
        cfg.warp.kind = warp_kind_from_string(val);
      } else if (key == "interval") {
        const auto v = parse_list(val, key);
        if (v.size() != 2) throw ConfigError("interval takes two numbers");
        cfg.warp.lo = v[0];
        cfg.warp.hi = v[1];
      } else if (key == "coefficients") {
        cfg.warp.coefficients = parse_list(val, key);
      } else if (key == "rho_bar") {
        if (val == "auto") {
          cfg.warp.rho_bar.reset();
        } else {
          cfg.warp.rho_bar = parse_double(val, key);
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in [warp]");
      }
    } else if (section == "flow") {
      if (key == "representation") {
        cfg.flow.representation = parse_representation(val);
      } else if (key == "domain") {
        cfg.flow.domain = parse_domain(val);
      } else if (key == "n") {
        cfg.flow.n = static_cast<int>(parse_int(val, key));
      } else if (key == "grid_n") {
        const long long g = parse_int(val, key);
        if (g < 2) throw ConfigError("grid_n must be >= 2");
        cfg.flow.grid_n = static_cast<std::size_t>(g);
      } else if (key == "k") {
        cfg.flow.k = static_cast<int>(parse_int(val, key));
      } else if (key == "t_end") {
        cfg.flow.t_end = parse_double(val, key);
      } else if (key == "dump_times") {
        cfg.flow.dump_times = parse_list(val, key);
      } else if (key == "cadence") {
        cfg.flow.cadence = parse_double(val, key);
      } else if (key == "g_max") {
        cfg.flow.g_max = parse_double(val, key);
      } else if (key == "dt_min") {
        cfg.flow.dt_min = parse_double(val, key);
      } else if (key == "step_tol") {
        cfg.flow.step_tol = parse_double(val, key);
      } else if (key == "initial") {
        cfg.flow.initial = parse_initial(val);
      } else {
        throw ConfigError("unknown key '" + key + "' in [flow]");
      }
    } else if (section == "diagnostics") {
      if (key == "barrier") {
        cfg.diagnostics.barrier = parse_barrier(val);
      } else if (key == "delta") {
        cfg.diagnostics.delta = parse_double(val, key);
      } else if (key == "lambda_bar") {
        cfg.diagnostics.lambda_bar = parse_double(val, key);
      } else if (key == "eta") {
        cfg.diagnostics.eta = parse_double(val, key);
      } else {
        throw ConfigError("unknown key '" + key + "' in [diagnostics]");
      }
    } else if (section == "blowup") {
      if (key == "sigma") {
        cfg.blowup.sigma = parse_double(val, key);
      } else if (key == "lambda") {
        cfg.blowup.lambda = parse_double(val, key);
      } else if (key == "g_max") {
        cfg.blowup.g_max = parse_double(val, key);
      } else if (key == "grid_levels") {
        const auto v = parse_list(val, key);
        cfg.blowup.grid_levels.clear();
        for (double x : v) {
          if (!(x >= 2.0) || x != std::floor(x))
            throw ConfigError("grid_levels must be integers >= 2");
          cfg.blowup.grid_levels.push_back(static_cast<std::size_t>(x));
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in [blowup]");
      }
    } else {  // [run]
      if (key == "out_dir") {
        cfg.out_dir = val;
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(val, key));
      } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_int(val, key));
      } else {
        throw ConfigError("unknown key '" + key + "' in [run]");
      }
    }
  }
  cfg.rho_bar_defaulted = !cfg.warp.rho_bar.has_value();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

WarpFunction make_warp(const WarpConfig& wc) {
  return WarpFunction::make(wc.kind, wc.lo, wc.hi, wc.coefficients);
}

double resolve_rho_bar(const RunConfig& cfg) {
  if (cfg.warp.rho_bar) return *cfg.warp.rho_bar;
  return 0.5 * (cfg.warp.lo + cfg.warp.hi);
}

std::vector<double> build_initial_rho(const RunConfig& cfg,
                                      const WarpFunction& w) {
  const FlowConfig& fc = cfg.flow;
  Profile p;
  switch (fc.domain) {
    case Domain::PeriodicCircle:
      p = Profile::periodic(fc.grid_n);
      break;
    case Domain::DirichletArc: {
      if (fc.k < 1) throw ConfigError("flow.k must be >= 1 on arc domains");
      p = Profile::arc(kPi / static_cast<double>(fc.k), fc.grid_n);
      break;
    }
    case Domain::Colatitude:
      p = Profile::colatitude(fc.grid_n);
      break;
  }
  std::vector<double> v(p.values.size(), 0.0);
  const auto check = [&](double x) {
    w.check_domain(x);
    return x;
  };
  switch (fc.initial.kind) {
    case InitialSpec::Kind::Constant: {
      const double c = fc.initial.args[0];
      for (auto& x : v) x = check(c);
      break;
    }
    case InitialSpec::Kind::Cosine: {
      const double a = fc.initial.args[0];
      const double m = fc.initial.args[1];
      const double c = fc.initial.args[2];
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = check(c + a * std::cos(m * p.theta(j)));
      break;
    }
    case InitialSpec::Kind::RandomTrig: {
      const int mmax = static_cast<int>(fc.initial.args[0]);
      const double amp = fc.initial.args[1];
      if (mmax < 1) throw ConfigError("random-trig: mmax must be >= 1");
      std::mt19937_64 rng(cfg.seed);
      // Platform-independent uniform draw on [-amp, amp].
      const auto draw = [&rng, amp]() {
        const double u =
            static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return amp * (2.0 * u - 1.0);
      };
      const double mid = 0.5 * (w.lo() + w.hi());
      std::vector<double> ac(static_cast<std::size_t>(mmax)),
          bc(static_cast<std::size_t>(mmax));
      for (int m = 0; m < mmax; ++m) {
        const double scale = 1.0 / ((m + 1.0) * (m + 1.0));
        ac[static_cast<std::size_t>(m)] = draw() * scale;
        bc[static_cast<std::size_t>(m)] = draw() * scale;
      }
      for (std::size_t j = 0; j < v.size(); ++j) {
        double x = mid;
        for (int m = 1; m <= mmax; ++m) {
          x += ac[static_cast<std::size_t>(m - 1)] *
                   std::cos(m * p.theta(j)) +
               bc[static_cast<std::size_t>(m - 1)] * std::sin(m * p.theta(j));
        }
        v[j] = check(x);
      }
      break;
    }
    case InitialSpec::Kind::File: {
      std::ifstream in(fc.initial.path);
      if (!in)
        throw ConfigError("cannot open initial profile: " + fc.initial.path);
      std::vector<double> vals;
      double x;
      while (in >> x) vals.push_back(x);
      if (vals.size() != v.size())
        throw ConfigError("initial profile has " +
                          std::to_string(vals.size()) + " values, expected " +
                          std::to_string(v.size()));
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = check(vals[j]);
      break;
    }
  }
  return v;
}

}  // namespace warpflow
