#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kwg/thermo.hpp"

using namespace kwg;
using std::numbers::pi;

TEST_CASE("pressure and energy density are consistent") {
  VdWParams w;  // a=1, b=2, R=1, Tstar=1: subcritical
  for (double rho : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    double lhs = vdw_pressure(rho, w);
    double rhs =
        rho * vdw_energy_density_derivative(rho, w) - vdw_energy_density(rho, w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    // finite-difference check of P'
    double h = 1e-6;
    double fd = (vdw_pressure(rho + h, w) - vdw_pressure(rho - h, w)) / (2 * h);
    CHECK(vdw_pressure_derivative(rho, w) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK_THROWS(vdw_pressure(0.0, w));
  CHECK_THROWS(vdw_pressure(2.0, w));
}

TEST_CASE("spinodal points bracket the elliptic region") {
  VdWParams w;
  auto sp = spinodal_points(w);
  REQUIRE(sp.has_value());
  auto [a1, a2] = *sp;
  CHECK(a1 < a2);
  CHECK(std::abs(vdw_pressure_derivative(a1, w)) < 1e-7);
  CHECK(std::abs(vdw_pressure_derivative(a2, w)) < 1e-7);
  CHECK(vdw_pressure_derivative(0.5 * (a1 + a2), w) < 0);
  CHECK(vdw_pressure_derivative(0.5 * a1, w) > 0);
  CHECK(vdw_pressure_derivative(a2 + 0.5 * (w.b - a2), w) > 0);

  // supercritical temperature: P' > 0 everywhere
  VdWParams hot = w;
  hot.Tstar = 10.0;
  CHECK_FALSE(spinodal_points(hot).has_value());
}

TEST_CASE("maxwell states satisfy the equal-area rule") {
  VdWParams w;
  auto [b1, b2] = maxwell_states(w);
  auto [a1, a2] = *spinodal_points(w);
  CHECK(b1 < a1);
  CHECK(b2 > a2);
  // common tangent: equal pressures and equal chemical potentials
  double P1 = vdw_pressure(b1, w), P2 = vdw_pressure(b2, w);
  CHECK(P1 == doctest::Approx(P2).epsilon(1e-8));
  double mu1 = vdw_energy_density_derivative(b1, w);
  double mu2 = vdw_energy_density_derivative(b2, w);
  CHECK(mu1 == doctest::Approx(mu2).epsilon(1e-8));
  // equal-area oracle in specific volume: integral of (P(1/v) - P*) dv = 0
  double v1 = 1.0 / b2, v2 = 1.0 / b1;  // v1 < v2
  int n = 20000;
  double h = (v2 - v1) / n, area = 0;
  for (int i = 0; i <= n; ++i) {
    double v = v1 + i * h;
    double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    area += wgt * (vdw_pressure(1.0 / v, w) - P1) * h;
  }
  CHECK(std::abs(area) < 1e-6 * std::abs(P1) * (v2 - v1) + 1e-8);

  VdWParams hot = w;
  hot.Tstar = 10.0;
  CHECK_THROWS(maxwell_states(hot));
}

TEST_CASE("phase diagram aggregates both constructions") {
  VdWParams w;
  PhaseDiagram d = phase_diagram(w);
  CHECK(d.subcritical);
  CHECK(d.beta1 < d.alpha1);
  CHECK(d.alpha1 < d.alpha2);
  CHECK(d.alpha2 < d.beta2);
}

TEST_CASE("coefficient functions vanish at equilibrium") {
  PressureLaw law = PressureLaw::power_law(1.0, 3.0);
  CHECK(coefficient_K(0.0, law) == doctest::Approx(0.0));
  CHECK(coefficient_I(0.0) == doctest::Approx(0.0));
  CHECK(coefficient_G(0.0, law) == doctest::Approx(0.0));
  // K(q) = P'(1) - P'(1+q)/(1+q) = 3 - 3(1+q)
  CHECK(coefficient_K(0.5, law) == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(coefficient_I(1.0) == doctest::Approx(0.5));
  CHECK_THROWS(coefficient_I(-1.0));
}

TEST_CASE("G is the primitive of K") {
  PressureLaw law = PressureLaw::van_der_waals(VdWParams{});
  for (double q : {-0.4, -0.1, 0.2, 0.6}) {
    double h = 1e-5;
    double fd = (coefficient_G(q + h, law) - coefficient_G(q - h, law)) / (2 * h);
    CHECK(fd == doctest::Approx(coefficient_K(q, law)).epsilon(1e-7));
  }
  // analytic oracle for the cubic law: K(s) = -3c s, G(q) = -1.5 c q^2
  PressureLaw cubic = PressureLaw::power_law(2.0, 3.0);
  CHECK(coefficient_G(0.3, cubic) ==
        doctest::Approx(-0.5 * 6.0 * 0.09).epsilon(1e-10));
}

TEST_CASE("variational functionals with a single-mode density") {
  VdWParams w;
  TorusGrid g(1, 128, 2 * pi);
  double delta = 0.05, rho0 = 0.8;
  int k0 = 4;
  SpectralField rho = SpectralField::from_function(
      g, [&](const std::array<double, 2>& x) {
        return rho0 + delta * std::cos(k0 * x[0]);
      });
  double sharp = eval_sharp_functional(rho, w);
  // direct quadrature oracle
  double ref = 0;
  for (int i = 0; i < 128; ++i) {
    double x = 2 * pi * i / 128;
    ref += vdw_energy_density(rho0 + delta * std::cos(k0 * x), w);
  }
  ref *= g.cell_measure();
  CHECK(sharp == doctest::Approx(ref).epsilon(1e-12));

  double gam = 1.3, eps = 0.2;
  double nonlocal =
      eval_nonlocal_functional(rho, w, gam, eps, KernelSymbol::gaussian());
  double penalty = nonlocal - sharp;
  double expected = 0.5 * gam * g.volume() * 0.5 * delta * delta *
                    (1.0 - std::exp(-eps * eps * k0 * k0));
  CHECK(penalty == doctest::Approx(expected).epsilon(1e-10));

  double local = eval_local_functional(rho, w, gam, eps);
  double loc_pen = local - sharp;
  double loc_expected =
      0.5 * gam * eps * eps * g.volume() * 0.5 * delta * delta * k0 * k0;
  CHECK(loc_pen == doctest::Approx(loc_expected).epsilon(1e-10));
  // small eps: nonlocal penalty below the local one (1-e^-x <= x)
  CHECK(penalty <= loc_pen * (1 + 1e-12));
}

TEST_CASE("euler characteristics") {
  // P(rho) = rho: lambda = -/+ 1/tau, linearly degenerate-free
  PressureLaw lin = PressureLaw::power_law(1.0, 1.0);
  auto c = euler_characteristics(2.0, lin);
  CHECK(c.regime == EulerRegime::hyperbolic);
  CHECK(c.lambda1 == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(c.lambda2 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(c.gnl1 == doctest::Approx(-c.gnl2).epsilon(1e-6));

  // inside the spinodal region the system is elliptic
  VdWParams w;
  auto [a1, a2] = *spinodal_points(w);
  PressureLaw vdw = PressureLaw::van_der_waals(w);
  double rho_mid = 0.5 * (a1 + a2);
  CHECK(euler_characteristics(1.0 / rho_mid, vdw).regime ==
        EulerRegime::elliptic);
  CHECK(euler_characteristics(1.0 / (0.5 * a1), vdw).regime ==
        EulerRegime::hyperbolic);
}
