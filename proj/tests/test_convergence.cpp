#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kwg/convergence.hpp"

using namespace kwg;
using std::numbers::pi;

namespace {

FluidState bump_state(const TorusGrid& g, double amp) {
  FluidState st = FluidState::zero(g);
  double c = 0.5 * g.period();
  st.q = SpectralField::from_function(g, [&](const std::array<double, 2>& x) {
    double r2 = 0;
    for (int a = 0; a < g.dim(); ++a) {
      double s = std::remainder(x[std::size_t(a)] - c, g.period());
      r2 += s * s;
    }
    return amp * std::exp(-r2 / 8.0);
  });
  st.q.set_mean_zero();
  return st;
}

Trajectory shifted(Trajectory t, double factor) {
  for (auto& s : t.states) {
    s.q *= factor;
    for (auto& c : s.u) c *= factor;
  }
  return t;
}

}  // namespace

TEST_CASE("difference norms: zero, homogeneity, single snapshot") {
  TorusGrid g(1, 64, 20 * pi);
  DyadicFamily fam(g);
  PhysParams p;
  p.eps = 0.1;
  SplitMix64 rng(3);
  FluidState st = FluidState::zero(g);
  st.q = random_band_limited(g, rng, 0.3);
  st.u[0] = random_band_limited(g, rng, 0.3);
  Trajectory tr = simulate_linear({}, SpectralField{}, {}, st, p, 0.5, 0.005, 11);

  DifferenceNorms zero = difference_norms(tr, tr, p.eps, 0.9, fam);
  CHECK(zero.sum() == 0.0);

  // scaling one trajectory: the difference scales linearly in each norm
  Trajectory tr2 = shifted(tr, 0.5);
  Trajectory tr3 = shifted(tr, 0.25);
  DifferenceNorms a = difference_norms(tr, tr2, p.eps, 0.9, fam);
  DifferenceNorms b = difference_norms(tr, tr3, p.eps, 0.9, fam);
  CHECK(a.sum() > 0);
  CHECK(b.u_sup == doctest::Approx(1.5 * a.u_sup).epsilon(1e-12));
  CHECK(b.q_sup_low == doctest::Approx(1.5 * a.q_sup_low).epsilon(1e-12));
  CHECK(b.q_sup_high == doctest::Approx(1.5 * a.q_sup_high).epsilon(1e-12));
  CHECK(b.u_int == doctest::Approx(1.5 * a.u_int).epsilon(1e-12));
  CHECK(b.q_hyb1 == doctest::Approx(1.5 * a.q_hyb1).epsilon(1e-12));
  CHECK(b.q_hyb2 == doctest::Approx(1.5 * a.q_hyb2).epsilon(1e-12));

  // mismatched time axes are a caller error
  Trajectory shorter = tr;
  shorter.times.pop_back();
  shorter.states.pop_back();
  CHECK_THROWS(difference_norms(tr, shorter, p.eps, 0.9, fam));
}

TEST_CASE("plan validation") {
  TorusGrid g(1, 64, 20 * pi);
  SweepPlan plan;
  plan.initial = bump_state(g, 0.01);
  plan.eps = {0.2, 0.1};
  CHECK_NOTHROW(plan.validate(1));
  SweepPlan bad = plan;
  bad.eps = {0.1, 0.2};  // not decreasing
  CHECK_THROWS(bad.validate(1));
  bad = plan;
  bad.eps = {0.2, 0.0};
  CHECK_THROWS(bad.validate(1));
  bad = plan;
  bad.dt = 0;
  CHECK_THROWS(bad.validate(1));
  bad = plan;
  bad.alpha_target = 1.5;
  CHECK_THROWS(bad.validate(2));
}

TEST_CASE("small 1d sweep converges at first order in eps") {
  TorusGrid g(1, 128, 20 * pi);
  SweepPlan plan;
  plan.initial = bump_state(g, 0.01);
  plan.base = PhysParams{};
  plan.eps = {0.2, 0.14, 0.1};
  plan.T = 0.5;
  plan.dt = 2e-3;
  plan.alpha_target = 0.4;  // keeps d/2 - alpha - 1 moderate for d = 1
  plan.snapshot_count = 11;

  RateReport rep = run_sweep(plan);
  REQUIRE(rep.records.size() == 3);
  for (std::size_t i = 0; i + 1 < rep.records.size(); ++i)
    CHECK(rep.records[i].sum() > rep.records[i + 1].sum());
  CHECK(rep.slope > 0.9);
  CHECK(rep.residual < 0.1);
  CHECK(std::isfinite(rep.condition));
  CHECK(rep.smallness.total() > 0);

  // determinism: identical plans give bitwise-identical reports
  RateReport rep2 = run_sweep(plan);
  CHECK(rep2.slope == rep.slope);
  CHECK(rep2.intercept == rep.intercept);
  for (std::size_t i = 0; i < rep.records.size(); ++i)
    CHECK(rep2.records[i].sum() == rep.records[i].sum());

  // threaded execution matches sequential bitwise
  SweepPlan par = plan;
  par.threads = 3;
  RateReport rep3 = run_sweep(par);
  CHECK(rep3.slope == rep.slope);
  for (std::size_t i = 0; i < rep.records.size(); ++i)
    CHECK(rep3.records[i].sum() == rep.records[i].sum());

  // eta gate: a tiny budget rejects the data before any run
  SweepPlan gated = plan;
  gated.eta = 1e-12;
  CHECK_THROWS(run_sweep(gated));
}
