// Batch front-end: parses a config, runs one subcommand, writes plot-ready
// CSV artifacts plus a hash manifest. Exit codes: 0 ok, 2 config error,
// 3 physics abort (vacuum, blow-up, CFL), 4 property failure.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kwg/artifacts.hpp"
#include "kwg/config.hpp"
#include "kwg/convergence.hpp"
#include "kwg/diagnostics.hpp"
#include "kwg/kernels.hpp"
#include "kwg/lpaley.hpp"
#include "kwg/solver.hpp"
#include "kwg/thermo.hpp"

namespace fs = std::filesystem;
using namespace kwg;

namespace {

struct PropertyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_dir(const std::string& dir) {
  fs::create_directories(dir);
}

std::string snap_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%03d.kwg1", i);
  return buf;
}

int cmd_simulate(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  FluidState init = build_initial(cfg);
  SimOptions opt = SimOptions::defaults(cfg.params);
  opt.friedrichs_n = cfg.friedrichs_n;

  SmallnessReport small = smallness_report(init);
  Trajectory traj =
      simulate(init, cfg.params, cfg.T, cfg.dt, cfg.snapshots, opt);

  std::vector<std::string> files;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    std::string name = snap_name(int(i));
    write_snapshot((fs::path(cfg.out_dir) / name).string(), traj.states[i],
                   cfg.params);
    files.push_back(name);
  }

  DyadicFamily fam(init.q.grid());
  {
    CsvWriter csv((fs::path(cfg.out_dir) / "metrics.csv").string());
    csv.row({"t", "mass", "u_max", "q_besov_low", "q_besov_high",
             "u_besov_low"});
    double hd = 0.5 * cfg.d;
    for (const auto& st : traj.states) {
      double umax = 0;
      for (const auto& c : st.u) umax = std::max(umax, c.linf_norm());
      csv.row({fmt(st.t), fmt(st.q.mean()), fmt(umax),
               fmt(besov_norm(st.q, hd - 1.0, BlockSum::l1, fam)),
               fmt(besov_norm(st.q, hd, BlockSum::l1, fam)),
               fmt(besov_norm(st.u, hd - 1.0, BlockSum::l1, fam))});
    }
    files.push_back("metrics.csv");
  }
  {
    EnergyLedger led = build_ledger(traj, cfg.params, fam);
    CsvWriter csv((fs::path(cfg.out_dir) / "energy_ledger.csv").string());
    csv.row({"block", "t", "h", "u2", "pq2", "grad2", "cross", "nonlocal",
             "envelope"});
    for (std::size_t k = 0; k < led.times.size(); ++k)
      for (std::size_t b = 0; b < led.block_index.size(); ++b) {
        const BlockEnergy& e = led.entries[k][b];
        csv.row({std::to_string(led.block_index[b]), fmt(led.times[k]),
                 fmt(e.h()), fmt(e.u2), fmt(e.pq2), fmt(e.grad2),
                 fmt(e.cross), fmt(e.nonlocal),
                 fmt(led.envelope(int(b), led.times[k]))});
      }
    files.push_back("energy_ledger.csv");
  }
  {
    std::ofstream out(fs::path(cfg.out_dir) / "run_summary.txt");
    out << "smallness_q_low = " << fmt(small.q_low) << "\n"
        << "smallness_q_high = " << fmt(small.q_high) << "\n"
        << "smallness_u_low = " << fmt(small.u_low) << "\n"
        << "steps_dt = " << fmt(traj.dt) << "\n";
    out << "config_echo_begin\n" << cfg.normalized() << "config_echo_end\n";
    files.push_back("run_summary.txt");
  }
  write_manifest(cfg.out_dir, files);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  SweepPlan plan;
  plan.eps = cfg.sweep_eps;
  plan.initial = build_initial(cfg);
  plan.base = cfg.params;
  plan.T = cfg.T;
  plan.dt = cfg.dt;
  plan.alpha_target = cfg.alpha;
  plan.snapshot_count = cfg.snapshots;
  plan.eta = cfg.eta;
  plan.threads = cfg.threads;

  RateReport rep = run_sweep(plan);

  std::vector<std::string> files;
  {
    CsvWriter csv((fs::path(cfg.out_dir) / "rate_report.csv").string());
    csv.row({"eps", "u_sup", "q_sup_low", "q_sup_high", "u_int", "q_hyb1",
             "q_hyb2", "sum"});
    for (const auto& r : rep.records)
      csv.row({fmt(r.eps), fmt(r.u_sup), fmt(r.q_sup_low), fmt(r.q_sup_high),
               fmt(r.u_int), fmt(r.q_hyb1), fmt(r.q_hyb2), fmt(r.sum())});
    files.push_back("rate_report.csv");
  }
  {
    std::ofstream out(fs::path(cfg.out_dir) / "sweep_summary.txt");
    out << "slope = " << fmt(rep.slope) << "\n"
        << "intercept = " << fmt(rep.intercept) << "\n"
        << "residual = " << fmt(rep.residual) << "\n"
        << "condition = " << fmt(rep.condition) << "\n"
        << "smallness_total = " << fmt(rep.smallness.total()) << "\n"
        << "slope_floor = " << fmt(cfg.slope_floor) << "\n";
    files.push_back("sweep_summary.txt");
  }
  write_manifest(cfg.out_dir, files);
  std::cout << "sweep slope " << fmt(rep.slope) << " (floor "
            << fmt(cfg.slope_floor) << ")\n";
  if (rep.slope < cfg.slope_floor)
    throw PropertyFailure("sweep slope below configured floor");
  return 0;
}

int cmd_besov(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  FluidState init = build_initial(cfg);
  DyadicFamily fam(init.q.grid());
  BlockSum r = cfg.besov_r == "1" ? BlockSum::l1 : BlockSum::linf;

  CsvWriter csv((fs::path(cfg.out_dir) / "norms.csv").string());
  csv.row({"field", "norm", "s", "t", "eps", "value"});
  std::string rname = cfg.besov_r == "1" ? "besov_l1" : "besov_linf";
  csv.row({"q", rname, fmt(cfg.besov_s), "", "",
           fmt(besov_norm(init.q, cfg.besov_s, r, fam))});
  csv.row({"u", rname, fmt(cfg.besov_s), "", "",
           fmt(besov_norm(init.u, cfg.besov_s, r, fam))});
  if (cfg.params.eps > 0) {
    int l_eps = make_threshold(cfg.params.eps).l_eps;
    HybridNormSpec spec{cfg.besov_s + 1.0, cfg.besov_s, cfg.params.eps, l_eps};
    csv.row({"q", "hybrid", fmt(spec.s), fmt(spec.t), fmt(spec.eps),
             fmt(hybrid_norm(init.q, spec, fam))});
  }
  csv.close();
  write_manifest(cfg.out_dir, {"norms.csv"});
  return 0;
}

int cmd_thermo(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  PhaseDiagram pd = phase_diagram(cfg.vdw);
  {
    CsvWriter csv((fs::path(cfg.out_dir) / "phase.csv").string());
    csv.row({"subcritical", "alpha1", "alpha2", "beta1", "beta2"});
    csv.row({pd.subcritical ? "1" : "0", fmt(pd.alpha1), fmt(pd.alpha2),
             fmt(pd.beta1), fmt(pd.beta2)});
  }
  {
    PressureLaw law = PressureLaw::van_der_waals(cfg.vdw);
    CsvWriter csv((fs::path(cfg.out_dir) / "characteristics.csv").string());
    csv.row({"tau", "regime", "lambda1", "lambda2", "gnl1", "gnl2"});
    for (int i = 1; i <= 200; ++i) {
      double rho = cfg.vdw.b * double(i) / 202.0;
      double tau = 1.0 / rho;
      auto c = euler_characteristics(tau, law);
      const char* names[] = {"hyperbolic", "elliptic", "boundary"};
      csv.row({fmt(tau), names[int(c.regime)], fmt(c.lambda1), fmt(c.lambda2),
               fmt(c.gnl1), fmt(c.gnl2)});
    }
  }
  write_manifest(cfg.out_dir, {"phase.csv", "characteristics.csv"});
  return 0;
}

int cmd_linear_spectrum(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  TorusGrid grid = cfg.grid();
  CsvWriter csv((fs::path(cfg.out_dir) / "spectrum.csv").string());
  csv.row({"xi", "re_z1", "im_z1", "re_z2", "im_z2", "re_z3", "im_z3"});
  for (int k = 1; k <= grid.n() / 2 - 1; ++k) {
    std::vector<double> xi(std::size_t(cfg.d), 0.0);
    xi[0] = grid.min_wavenumber() * k;
    LinearSymbol sym = build_linear_symbol(xi, cfg.params);
    std::vector<std::string> row{fmt(xi[0])};
    for (int j = 0; j < cfg.d + 1; ++j) {
      cplx z = std::size_t(j) < sym.eigenvalues.size() ? sym.eigenvalues[j]
                                                       : cplx{0, 0};
      row.push_back(fmt(z.real()));
      row.push_back(fmt(z.imag()));
    }
    while (row.size() < 7) row.push_back("");
    csv.row(row);
  }
  csv.close();
  write_manifest(cfg.out_dir, {"spectrum.csv"});
  return 0;
}

int cmd_check(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  std::ofstream log(fs::path(cfg.out_dir) / "check.txt");
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::string line = std::string(ok ? "PASS" : "FAIL") + " " + name;
    std::cout << line << "\n";
    log << line << "\n";
    if (!ok) ++failures;
  };

  report("kernel gaussian admissible",
         check_admissibility(KernelSymbol::gaussian()).passed);

  {
    bool ok = true;
    double gamma = threshold_gamma();
    for (double e : {0.3, 0.1, 0.02}) {
      auto th = make_threshold(e);
      double lo = e * std::ldexp(th.C0, th.l_eps);
      double hi = e * std::ldexp(th.C0, th.l_eps + 1);
      ok = ok && lo <= std::sqrt(gamma) && hi > std::sqrt(gamma);
    }
    report("frequency threshold two-sided", ok);
  }

  TorusGrid grid(1, 128, cfg.L);
  DyadicFamily fam(grid);
  SplitMix64 rng(cfg.seed);
  {
    bool ok = true;
    for (int t = 0; t < 1000; ++t) {
      std::size_t i =
          1 + std::size_t(rng.next() % std::uint64_t(grid.modes() - 1));
      if (grid.xi_abs(i) == 0.0) continue;
      double sum = 0;
      for (int j = fam.j_min(); j <= fam.j_max(); ++j)
        sum += DyadicFamily::annulus(std::ldexp(grid.xi_abs(i), -j));
      ok = ok && std::abs(sum - 1.0) < 1e-12;
    }
    report("dyadic partition of unity", ok);
  }
  {
    bool ok = true;
    for (int t = 0; t < 5; ++t) {
      SpectralField u = random_band_limited(grid, rng);
      SpectralField v = random_band_limited(grid, rng);
      SpectralField lhs = paraproduct(u, v, fam);
      lhs += paraproduct(v, u, fam);
      lhs += bony_remainder(u, v, fam);
      SpectralField prod = multiply_dealiased(u, v);
      lhs -= prod;
      ok = ok && lhs.l2_norm() <= 1e-10 * std::max(1e-30, prod.l2_norm());
    }
    report("Bony decomposition identity", ok);
  }
  {
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
      SpectralField u = random_band_limited(grid, rng);
      for (double s : {0.0, 1.0, 0.5}) {
        for (double a : {0.5, 1.0, 2.0}) {
          double b = besov_norm(u, s, BlockSum::l1, fam);
          double hi = btilde_norm(u, s, a, BlockSum::linf, fam);
          double lo = btilde_norm(u, s, a, BlockSum::l1, fam);
          ok = ok && b * b <= hi * lo * (1.0 + 1e-12);
        }
      }
    }
    report("interpolation constant 1", ok);
  }
  {
    bool ok = true;
    PhysParams pp = cfg.params;
    if (pp.eps == 0) pp.eps = 0.1;
    for (int t = 0; t < 50; ++t) {
      FluidState st = FluidState::zero(grid);
      st.q = random_band_limited(grid, rng);
      st.u[0] = random_band_limited(grid, rng);
      for (int l = fam.j_min(); l <= fam.j_max(); ++l) {
        BlockEnergy e = energy_block(st, l, pp, fam);
        ok = ok && e.nonlocal >= -1e-12;
        ok = ok && check_equivalence(e, pp).ok;
      }
    }
    report("block energy equivalence and sign", ok);
  }
  {
    bool ok = true;
    for (double x = 1e-6; x < 1e3; x *= 3.7)
      ok = ok && (x + std::expm1(-x)) >= 0.0;
    report("consistency multiplier nonnegative", ok);
  }
  {
    VdWParams w;
    bool ok = true;
    for (double rho : {0.2, 0.7, 1.3, 1.8}) {
      double lhs = vdw_pressure(rho, w);
      double rhs = rho * vdw_energy_density_derivative(rho, w) -
                   vdw_energy_density(rho, w);
      ok = ok && std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs));
    }
    report("energy density consistent with pressure", ok);
  }
  {
    FluidState init = FluidState::zero(grid);
    init.q = random_band_limited(grid, rng);
    init.q *= 0.01;
    PhysParams pp = cfg.params;
    SimOptions opt = SimOptions::defaults(pp);
    Trajectory traj = simulate(init, pp, 0.1, 1e-3, 3, opt);
    bool ok = true;
    for (const auto& st : traj.states) {
      ok = ok && std::abs(st.q.mean()) < 1e-13;
      ok = ok && st.q.hermitian_defect() < 1e-12;
    }
    report("mass conservation and realness", ok);
  }

  log << (failures == 0 ? "ALL PASS\n" : "FAILURES\n");
  log.close();
  write_manifest(cfg.out_dir, {"check.txt"});
  if (failures > 0) throw PropertyFailure("check: " +
                                          std::to_string(failures) +
                                          " properties failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torus toolkit for non-local capillary fluid experiments"};
  app.require_subcommand(0, 1);
  std::string config_path, out_override;
  std::uint64_t seed_override = 0;
  int threads_override = 0;
  app.add_option("--config", config_path, "config file path")
      ->envname("KWG_CONFIG");
  app.add_option("--out", out_override, "output directory override")
      ->envname("KWG_OUT");
  auto* seed_opt = app.add_option("--seed", seed_override, "rng seed override")
                       ->envname("KWG_SEED");
  auto* thr_opt =
      app.add_option("--threads", threads_override, "worker thread override")
          ->envname("KWG_THREADS");
  const char* names[] = {"simulate", "sweep",           "besov",
                         "thermo",   "linear-spectrum", "check"};
  for (const char* n : names) app.add_subcommand(n, "")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_config_file(config_path);
    auto subs = app.get_subcommands();
    if (!subs.empty()) cfg.subcommand = subs.front()->get_name();
    if (cfg.subcommand.empty())
      throw ConfigError(0, "no subcommand given (CLI or [run] subcommand)");
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_opt->count() > 0) cfg.seed = seed_override;
    if (thr_opt->count() > 0) cfg.threads = std::max(1, threads_override);

    if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg);
    if (cfg.subcommand == "besov") return cmd_besov(cfg);
    if (cfg.subcommand == "thermo") return cmd_thermo(cfg);
    if (cfg.subcommand == "linear-spectrum") return cmd_linear_spectrum(cfg);
    if (cfg.subcommand == "check") return cmd_check(cfg);
    throw ConfigError(0, "unknown subcommand " + cfg.subcommand);
  } catch (const ConfigError& e) {
    std::cerr << "error\tconfig\t" << e.what() << "\n";
    return 2;
  } catch (const PropertyFailure& e) {
    std::cerr << "error\tproperty\t" << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error\tphysics\t" << e.what() << "\n";
    return 3;
  }
}
