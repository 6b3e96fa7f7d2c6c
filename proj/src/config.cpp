#include "kwg/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kwg/artifacts.hpp"

namespace kwg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& v, int line) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
    throw ConfigError(line, "malformed number '" + v + "'");
  return x;
}

long parse_int(const std::string& v, int line) {
  double x = parse_num(v, line);
  long i = long(x);
  if (double(i) != x) throw ConfigError(line, "expected integer, got '" + v + "'");
  return i;
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_num(item, line));
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  int params_line = 0, grid_line = 0;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(line, "expected 'key = value'");
    std::string id = section + "." + key;

    if (id == "run.subcommand") {
      static const char* known[] = {"simulate", "sweep",           "besov",
                                    "thermo",   "linear-spectrum", "check"};
      bool ok = false;
      for (const char* k : known) ok = ok || val == k;
      if (!ok) throw ConfigError(line, "unknown subcommand '" + val + "'");
      cfg.subcommand = val;
    } else if (id == "run.out") {
      cfg.out_dir = val;
    } else if (id == "run.seed") {
      cfg.seed = std::uint64_t(std::strtoull(val.c_str(), nullptr, 10));
    } else if (id == "run.threads") {
      cfg.threads = int(parse_int(val, line));
      if (cfg.threads < 1) throw ConfigError(line, "threads must be >= 1");
    } else if (id == "grid.d") {
      cfg.d = int(parse_int(val, line));
      grid_line = line;
    } else if (id == "grid.N") {
      cfg.N = int(parse_int(val, line));
      grid_line = line;
    } else if (id == "grid.L") {
      cfg.L = parse_num(val, line);
      grid_line = line;
    } else if (id == "params.mu") {
      cfg.params.mu = parse_num(val, line);
      params_line = line;
    } else if (id == "params.lambda") {
      cfg.params.lambda = parse_num(val, line);
      params_line = line;
    } else if (id == "params.kappa") {
      cfg.params.kappa = parse_num(val, line);
      params_line = line;
    } else if (id == "params.p") {
      cfg.params.p = parse_num(val, line);
      params_line = line;
    } else if (id == "params.eps") {
      cfg.params.eps = parse_num(val, line);
      if (cfg.params.eps < 0) throw ConfigError(line, "eps >= 0 required");
      params_line = line;
    } else if (id == "initial.kind") {
      if (val == "gaussian")
        cfg.initial.kind = InitialRecipe::Kind::gaussian;
      else if (val == "random")
        cfg.initial.kind = InitialRecipe::Kind::random;
      else if (val == "snapshot")
        cfg.initial.kind = InitialRecipe::Kind::snapshot;
      else
        throw ConfigError(line, "unknown initial kind '" + val + "'");
    } else if (id == "initial.amplitude") {
      cfg.initial.amplitude = parse_num(val, line);
    } else if (id == "initial.u_amplitude") {
      cfg.initial.u_amplitude = parse_num(val, line);
    } else if (id == "initial.width") {
      cfg.initial.width = parse_num(val, line);
      if (!(cfg.initial.width > 0)) throw ConfigError(line, "width > 0 required");
    } else if (id == "initial.center_x") {
      cfg.initial.center[0] = parse_num(val, line);
    } else if (id == "initial.center_y") {
      cfg.initial.center[1] = parse_num(val, line);
    } else if (id == "initial.path") {
      cfg.initial.path = val;
    } else if (id == "initial.band_fraction") {
      cfg.initial.band_fraction = parse_num(val, line);
    } else if (id == "sim.T") {
      cfg.T = parse_num(val, line);
      if (!(cfg.T > 0)) throw ConfigError(line, "T > 0 required");
    } else if (id == "sim.dt") {
      cfg.dt = parse_num(val, line);
      if (!(cfg.dt > 0)) throw ConfigError(line, "dt > 0 required");
    } else if (id == "sim.snapshots") {
      cfg.snapshots = int(parse_int(val, line));
      if (cfg.snapshots < 2) throw ConfigError(line, "snapshots >= 2 required");
    } else if (id == "sim.friedrichs_n") {
      cfg.friedrichs_n = parse_num(val, line);
      if (cfg.friedrichs_n < 0) throw ConfigError(line, "friedrichs_n >= 0");
    } else if (id == "sweep.eps_list") {
      cfg.sweep_eps = parse_list(val, line);
      for (std::size_t i = 0; i < cfg.sweep_eps.size(); ++i) {
        if (!(cfg.sweep_eps[i] > 0))
          throw ConfigError(line, "sweep eps must be > 0");
        if (i > 0 && !(cfg.sweep_eps[i] < cfg.sweep_eps[i - 1]))
          throw ConfigError(line, "sweep eps must be strictly decreasing");
      }
    } else if (id == "sweep.alpha") {
      cfg.alpha = parse_num(val, line);
      if (!(cfg.alpha > 0 && cfg.alpha <= 1))
        throw ConfigError(line, "alpha in (0,1] required");
    } else if (id == "sweep.slope_floor") {
      cfg.slope_floor = parse_num(val, line);
    } else if (id == "sweep.eta") {
      cfg.eta = parse_num(val, line);
    } else if (id == "besov.s") {
      cfg.besov_s = parse_num(val, line);
    } else if (id == "besov.r") {
      if (val != "1" && val != "inf")
        throw ConfigError(line, "besov r must be 1 or inf");
      cfg.besov_r = val;
    } else if (id == "thermo.a") {
      cfg.vdw.a = parse_num(val, line);
    } else if (id == "thermo.b") {
      cfg.vdw.b = parse_num(val, line);
    } else if (id == "thermo.R") {
      cfg.vdw.R = parse_num(val, line);
    } else if (id == "thermo.Tstar") {
      cfg.vdw.Tstar = parse_num(val, line);
    } else {
      throw ConfigError(line, "unknown key '" + id + "'");
    }
  }

  try {
    cfg.params.validate();
  } catch (const std::exception& e) {
    throw ConfigError(params_line, e.what());
  }
  try {
    cfg.grid();
  } catch (const std::exception& e) {
    throw ConfigError(grid_line, e.what());
  }
  try {
    cfg.vdw.validate();
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::normalized() const {
  std::ostringstream o;
  o << "[run]\n";
  if (!subcommand.empty()) o << "subcommand = " << subcommand << "\n";
  // out_dir deliberately omitted: artifact bytes must not depend on where
  // the run was written
  o << "seed = " << seed << "\n";
  o << "threads = " << threads << "\n";
  o << "[grid]\n";
  o << "d = " << d << "\nN = " << N << "\nL = " << fmt(L) << "\n";
  o << "[params]\n";
  o << "mu = " << fmt(params.mu) << "\nlambda = " << fmt(params.lambda)
    << "\nkappa = " << fmt(params.kappa) << "\np = " << fmt(params.p)
    << "\neps = " << fmt(params.eps) << "\n";
  o << "[initial]\n";
  const char* kinds[] = {"gaussian", "random", "snapshot"};
  o << "kind = " << kinds[int(initial.kind)] << "\n";
  o << "amplitude = " << fmt(initial.amplitude) << "\n";
  o << "u_amplitude = " << fmt(initial.u_amplitude) << "\n";
  o << "width = " << fmt(initial.width) << "\n";
  o << "center_x = " << fmt(initial.center[0]) << "\n";
  o << "center_y = " << fmt(initial.center[1]) << "\n";
  if (!initial.path.empty()) o << "path = " << initial.path << "\n";
  o << "band_fraction = " << fmt(initial.band_fraction) << "\n";
  o << "[sim]\n";
  o << "T = " << fmt(T) << "\ndt = " << fmt(dt) << "\nsnapshots = " << snapshots
    << "\nfriedrichs_n = " << fmt(friedrichs_n) << "\n";
  o << "[sweep]\n";
  o << "eps_list = ";
  for (std::size_t i = 0; i < sweep_eps.size(); ++i)
    o << (i ? ", " : "") << fmt(sweep_eps[i]);
  o << "\nalpha = " << fmt(alpha) << "\nslope_floor = " << fmt(slope_floor)
    << "\neta = " << fmt(eta) << "\n";
  o << "[besov]\n";
  o << "s = " << fmt(besov_s) << "\nr = " << besov_r << "\n";
  o << "[thermo]\n";
  o << "a = " << fmt(vdw.a) << "\nb = " << fmt(vdw.b) << "\nR = " << fmt(vdw.R)
    << "\nTstar = " << fmt(vdw.Tstar) << "\n";
  return o.str();
}

FluidState build_initial(const RunConfig& cfg) {
  TorusGrid grid = cfg.grid();
  if (cfg.initial.kind == InitialRecipe::Kind::snapshot) {
    FluidState s = read_snapshot(cfg.initial.path);
    if (!(s.q.grid() == grid))
      throw std::runtime_error("snapshot grid does not match config grid");
    s.t = 0;
    return s;
  }
  FluidState s = FluidState::zero(grid);
  if (cfg.initial.kind == InitialRecipe::Kind::random) {
    SplitMix64 rng(cfg.seed);
    s.q = random_band_limited(grid, rng, cfg.initial.band_fraction);
    s.q *= cfg.initial.amplitude;
    for (auto& c : s.u) {
      c = random_band_limited(grid, rng, cfg.initial.band_fraction);
      c *= cfg.initial.u_amplitude;
    }
    return s;
  }
  double L = grid.period();
  double w2 = 2.0 * cfg.initial.width * cfg.initial.width;
  auto bump = [&](const std::array<double, 2>& x) {
    double r2 = 0;
    for (int a = 0; a < grid.dim(); ++a) {
      double dxa = std::remainder(x[std::size_t(a)] -
                                      cfg.initial.center[std::size_t(a)],
                                  L);
      r2 += dxa * dxa;
    }
    return std::exp(-r2 / w2);
  };
  SpectralField profile = SpectralField::from_function(grid, bump);
  s.q = profile;
  s.q *= cfg.initial.amplitude;
  s.q.set_mean_zero();
  for (auto& c : s.u) {
    c = profile;
    c *= cfg.initial.u_amplitude;
  }
  return s;
}

}  // namespace kwg
