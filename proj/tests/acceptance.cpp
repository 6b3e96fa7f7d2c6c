// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero when any criterion fails.
// argv[1]: path to the kwgtool binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "kwg/artifacts.hpp"
#include "kwg/convergence.hpp"
#include "kwg/diagnostics.hpp"

using namespace kwg;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  (%s)\n", num, name,
              ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++g_failures;
}

double state_gap(const FluidState& a, const FluidState& b) {
  double m = (a.q - b.q).l2_norm();
  for (std::size_t i = 0; i < a.u.size(); ++i)
    m = std::max(m, (a.u[i] - b.u[i]).l2_norm());
  return m;
}

// 1. partition of unity over 1000 nonzero lattice frequencies
void criterion_partition() {
  TorusGrid g(2, 64, 20 * pi);
  DyadicFamily fam(g);
  double worst = 0;
  std::size_t checked = 0;
  for (std::size_t i = 1; i < g.modes() && checked < 1000; i += 4) {
    if (g.is_nyquist(i) || g.xi_abs(i) == 0.0) continue;
    double s = 0;
    for (int j = fam.j_min(); j <= fam.j_max(); ++j)
      s += DyadicFamily::annulus(g.xi_abs(i) * std::ldexp(1.0, -j));
    worst = std::max(worst, std::abs(s - 1.0));
    ++checked;
  }
  char d[96];
  std::snprintf(d, sizeof d, "max defect %.3e over %zu frequencies", worst,
                checked);
  report(1, "partition of unity", checked == 1000 && worst < 1e-12, d);
}

// 2. Bernstein ratio per block on a d=1, N=1024 grid
void criterion_bernstein() {
  TorusGrid g(1, 1024, 20 * pi);
  DyadicFamily fam(g);
  SplitMix64 rng(101);
  SpectralField u = random_band_limited(g, rng, 0.95);
  double lo = 1e300, hi = 0;
  bool ok = true;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    SpectralField b = fam.block(u, j);
    double n = b.l2_norm();
    if (n < 1e-12) continue;  // block beyond the data band
    double r = b.derivative(0).l2_norm() / n / std::ldexp(1.0, j);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (r < 0.70 || r > 2.70) ok = false;
  }
  char d[96];
  std::snprintf(d, sizeof d, "ratio/2^j in [%.3f, %.3f]", lo, hi);
  report(2, "Bernstein block ratio", ok, d);
}

// 3. interpolation inequality with constant exactly 1
void criterion_interpolation() {
  TorusGrid g(1, 64, 2 * pi);
  DyadicFamily fam(g);
  SplitMix64 rng(202);
  int violations = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    SpectralField q = random_band_limited(g, rng, 0.8);
    for (double s : {0.0, 1.0, 0.5}) {
      for (double alpha : {0.5, 1.0, 2.0}) {
        double b = besov_norm(q, s, BlockSum::l1, fam);
        double prod = btilde_norm(q, s, alpha, BlockSum::linf, fam) *
                      btilde_norm(q, s, alpha, BlockSum::l1, fam);
        worst = std::max(worst, b * b / prod);
        if (b * b > prod * (1 + 1e-12)) ++violations;
      }
    }
  }
  char d[96];
  std::snprintf(d, sizeof d, "%d violations, worst ratio %.6f", violations,
                worst);
  report(3, "interpolation constant 1", violations == 0, d);
}

// 4. Bony decomposition identity on dealiased pairs
void criterion_bony() {
  TorusGrid g(1, 128, 2 * pi);
  DyadicFamily fam(g);
  SplitMix64 rng(303);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    SpectralField u = random_band_limited(g, rng, 0.4);
    SpectralField v = random_band_limited(g, rng, 0.4);
    SpectralField sum = paraproduct(u, v, fam);
    sum += paraproduct(v, u, fam);
    sum += bony_remainder(u, v, fam);
    SpectralField prod = multiply_dealiased(u, v);
    double res = (sum - prod).l2_norm() / prod.l2_norm();
    worst = std::max(worst, res);
  }
  char d[96];
  std::snprintf(d, sizeof d, "worst relative residual %.3e", worst);
  report(4, "Bony identity", worst < 1e-10, d);
}

// 5 + 6. decay envelopes on single-block data, and the h_l sandwich on
// every recorded snapshot of the same runs
void criterion_decay_and_equivalence() {
  TorusGrid g(1, 512, 20 * pi);
  DyadicFamily fam(g);
  PhysParams p;
  p.eps = 0.2;
  int l_eps = make_threshold(p.eps).l_eps;
  SplitMix64 rng(404);

  bool decay_ok = true;
  int equivalence_violations = 0;
  double worst_margin = 0;
  int runs = 0;
  for (int l : {l_eps - 2, l_eps - 1, l_eps, l_eps + 1, l_eps + 2, l_eps + 3}) {
    if (l < fam.j_min() || l > fam.j_max()) continue;
    FluidState st = FluidState::zero(g);
    st.q = fam.block(random_band_limited(g, rng, 0.95), l);
    st.u[0] = fam.block(random_band_limited(g, rng, 0.95), l);
    if (st.q.l2_norm() < 1e-12) continue;
    Trajectory traj =
        simulate_linear({}, SpectralField{}, {}, st, p, 2.0, 0.005, 21);
    EnergyLedger led = build_ledger(traj, p, fam);
    ++runs;
    for (std::size_t b = 0; b < led.block_index.size(); ++b) {
      if (led.block_index[b] != l) continue;
      for (std::size_t k = 0; k < led.times.size(); ++k) {
        double hk = led.entries[k][b].h();
        double env = led.envelope(int(b), led.times[k]);
        if (env > 0) worst_margin = std::max(worst_margin, hk / env);
        if (hk > 1.05 * env + 1e-12) decay_ok = false;
      }
    }
    for (const auto& snap : traj.states)
      for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
        BlockEnergy e = energy_block(snap, j, p, fam);
        if (e.h2() == 0.0) continue;
        if (!check_equivalence(e, p).ok) ++equivalence_violations;
      }
  }
  char d[96];
  std::snprintf(d, sizeof d, "%d runs, worst h/envelope %.4f", runs,
                worst_margin);
  report(5, "linear decay envelopes", runs == 6 && decay_ok, d);
  char d2[96];
  std::snprintf(d2, sizeof d2, "%d violations across all snapshots",
                equivalence_violations);
  report(6, "h_l equivalence sandwich", equivalence_violations == 0, d2);
}

// 7. consistency remainder bound and its eps-rate
void criterion_consistency() {
  TorusGrid g(1, 256, 160 * pi);
  DyadicFamily fam(g);
  SpectralField q = SpectralField::from_function(
      g, [](const std::array<double, 2>& x) {
        double s = x[0] - 80 * pi;
        return 0.1 * std::exp(-s * s / 512.0);
      });
  q.set_mean_zero();
  double alpha = 0.9;
  double s = 0.5 * g.dim() - alpha - 1.0;

  bool bound_ok = true, slope_ok = true;
  double worst_ratio = 0, worst_slope = 1e300;
  std::vector<double> epss{0.2, 0.1, 0.05};
  for (double beta : {1.25, 1.5, 1.75}) {
    std::vector<double> lhs;
    for (double e : epss) {
      PhysParams p;
      p.eps = e;
      auto rep = consistency_remainder(q, p, beta, s, fam).second;
      worst_ratio = std::max(worst_ratio, rep.lhs / rep.rhs);
      if (!rep.holds()) bound_ok = false;
      lhs.push_back(rep.lhs);
    }
    double slope = std::log(lhs.front() / lhs.back()) /
                   std::log(epss.front() / epss.back());
    worst_slope = std::min(worst_slope, slope);
    if (slope < 2.0 * (beta - 1.0) - 0.05) slope_ok = false;
    if (std::abs(slope - 2.0) > 0.2) slope_ok = false;  // smooth bump rate
  }
  char d[96];
  std::snprintf(d, sizeof d, "worst lhs/rhs %.3f, min slope %.3f", worst_ratio,
                worst_slope);
  report(7, "consistency remainder", bound_ok && slope_ok, d);
}

// 8. non-local to local convergence rate, d = 2 desk scale
void criterion_rate_sweep() {
  TorusGrid g(2, 128, 20 * pi);
  SweepPlan plan;
  plan.base = PhysParams{};
  plan.eps = {0.2, 0.14, 0.1, 0.07, 0.05};
  plan.T = 2.0;
  plan.dt = 2e-3;
  plan.alpha_target = 0.9;
  plan.snapshot_count = 41;
  plan.threads = std::min(6u, std::max(1u, std::thread::hardware_concurrency()));

  FluidState st = FluidState::zero(g);
  double c = 0.5 * g.period();
  st.q = SpectralField::from_function(g, [&](const std::array<double, 2>& x) {
    double dx = std::remainder(x[0] - c, g.period());
    double dy = std::remainder(x[1] - c, g.period());
    return std::exp(-(dx * dx + dy * dy) / 8.0);
  });
  st.q.set_mean_zero();
  // scale the bump so the smallness report lands at 0.3
  SmallnessReport pre;
  {
    FluidState probe = st;
    pre = smallness_report(probe);
  }
  st.q *= 0.3 / pre.total();
  plan.initial = st;
  plan.eta = 0.5;

  RateReport rep = run_sweep(plan);
  char d[128];
  std::snprintf(d, sizeof d,
                "slope %.3f, empirical C %.3e, smallness %.3f", rep.slope,
                rep.intercept, rep.smallness.total());
  report(8, "convergence rate in eps", rep.slope >= 0.9, d);
}

// 9. Strang stepping self-convergence at order 2
void criterion_self_convergence() {
  TorusGrid g(1, 64, 2 * pi);
  PhysParams p;
  p.eps = 0.1;
  SimOptions opt = SimOptions::defaults(p);
  FluidState st = FluidState::zero(g);
  st.q = SpectralField::from_function(
      g, [](const std::array<double, 2>& x) { return 0.05 * std::cos(2 * x[0]); });
  st.q.set_mean_zero();
  st.u[0] = SpectralField::from_function(
      g, [](const std::array<double, 2>& x) { return 0.05 * std::sin(x[0]); });
  double T = 0.2;
  auto solve = [&](double dt) {
    FluidState cur = st;
    int n = int(std::round(T / dt));
    for (int i = 0; i < n; ++i) cur = step_strang(cur, dt, p, opt);
    return cur;
  };
  FluidState ref = solve(T / 512);
  double e1 = state_gap(solve(T / 32), ref);
  double e2 = state_gap(solve(T / 64), ref);
  double e3 = state_gap(solve(T / 128), ref);
  double s1 = std::log2(e1 / e2), s2 = std::log2(e2 / e3);
  char d[96];
  std::snprintf(d, sizeof d, "orders %.3f, %.3f under dt halving", s1, s2);
  report(9, "time-step self-convergence",
         std::abs(s1 - 2.0) <= 0.1 && std::abs(s2 - 2.0) <= 0.1, d);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// 10. repeated identical CLI runs produce hash-identical artifacts
void criterion_determinism(const std::string& tool) {
  fs::path base = fs::temp_directory_path() / "kwg_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  fs::path cfg = base / "run.cfg";
  std::ofstream(cfg) << "[run]\nsubcommand = simulate\nseed = 7\n"
                        "[grid]\nd = 1\nN = 64\nL = 62.83185307179586\n"
                        "[params]\neps = 0.2\n"
                        "[initial]\nkind = random\nband_fraction = 0.3\n"
                        "[sim]\nT = 0.2\ndt = 0.005\nsnapshots = 5\n";
  bool ok = true;
  std::string detail = "two runs byte-identical";
  std::vector<fs::path> outs{base / "out1", base / "out2"};
  for (const auto& o : outs) {
    std::string cmd = "\"" + tool + "\" simulate --config \"" + cfg.string() +
                      "\" --out \"" + o.string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      ok = false;
      detail = "tool invocation failed";
    }
  }
  if (ok) {
    std::string m1 = slurp(outs[0] / "manifest.txt");
    std::string m2 = slurp(outs[1] / "manifest.txt");
    if (m1.empty() || m1 != m2) {
      ok = false;
      detail = "manifests differ or missing";
    } else {
      for (const auto& e : fs::directory_iterator(outs[0])) {
        fs::path twin = outs[1] / e.path().filename();
        if (slurp(e.path()) != slurp(twin)) {
          ok = false;
          detail = "artifact bytes differ: " + e.path().filename().string();
        }
      }
    }
  }
  report(10, "CLI determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  auto t0 = std::chrono::steady_clock::now();
  criterion_partition();
  criterion_bernstein();
  criterion_interpolation();
  criterion_bony();
  criterion_decay_and_equivalence();
  criterion_consistency();
  criterion_rate_sweep();
  criterion_self_convergence();
  criterion_determinism(argc > 1 ? argv[1] : "kwgtool");
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0).count();
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
