#include "kwg/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace kwg {

void VdWParams::validate() const {
  if (!(a > 0 && b > 0 && R > 0 && Tstar > 0))
    throw std::invalid_argument("VdWParams: a, b, R, Tstar must be positive");
}

namespace {

void check_density(double rho, const VdWParams& p) {
  if (!(rho > 0.0) || !(rho < p.b))
    throw std::domain_error("density outside (0, b)");
}

}  // namespace

double vdw_pressure(double rho, const VdWParams& p) {
  check_density(rho, p);
  return p.R * p.Tstar * rho / (p.b - rho) - p.a * rho * rho;
}

double vdw_pressure_derivative(double rho, const VdWParams& p) {
  check_density(rho, p);
  double d = p.b - rho;
  return p.R * p.Tstar * p.b / (d * d) - 2.0 * p.a * rho;
}

double vdw_pressure_second_derivative(double rho, const VdWParams& p) {
  check_density(rho, p);
  double d = p.b - rho;
  return 2.0 * p.R * p.Tstar * p.b / (d * d * d) - 2.0 * p.a;
}

double vdw_energy_density(double rho, const VdWParams& p) {
  check_density(rho, p);
  double c = p.R * p.Tstar / p.b;
  return rho * c * std::log(rho / (p.b - rho)) - p.a * rho * rho;
}

double vdw_energy_density_derivative(double rho, const VdWParams& p) {
  check_density(rho, p);
  double c = p.R * p.Tstar / p.b;
  return c * std::log(rho / (p.b - rho)) + p.R * p.Tstar / (p.b - rho) -
         2.0 * p.a * rho;
}

std::optional<std::pair<double, double>> spinodal_points(const VdWParams& p) {
  p.validate();
  const int samples = 4096;
  auto dP = [&](double rho) { return vdw_pressure_derivative(rho, p); };

  std::vector<double> roots;
  double lo = p.b * 1e-9;
  double prev = lo, fprev = dP(lo);
  for (int i = 1; i <= samples; ++i) {
    double rho = p.b * (double(i) / (samples + 1));
    double f = dP(rho);
    if (fprev == 0.0) roots.push_back(prev);
    if (fprev * f < 0) {
      double a = prev, b = rho;
      while ((b - a) > 1e-12 * b) {
        double mid = 0.5 * (a + b);
        (dP(a) * dP(mid) <= 0 ? b : a) = mid;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = rho;
    fprev = f;
  }
  if (roots.size() < 2) return std::nullopt;
  return std::make_pair(roots.front(), roots.back());
}

std::pair<double, double> maxwell_states(const VdWParams& p) {
  auto spin = spinodal_points(p);
  if (!spin) throw std::runtime_error("maxwell_states: supercritical parameters");
  auto [a1, a2] = *spin;

  auto W = [&](double r) { return vdw_energy_density(r, p); };
  auto dW = [&](double r) { return vdw_energy_density_derivative(r, p); };
  auto ddW = [&](double r) { return vdw_pressure_derivative(r, p) / r; };

  // common tangent system:
  //   F1 = W'(b1) - W'(b2)
  //   F2 = W(b2) - W(b1) - W'(b1)(b2 - b1)
  double b1 = 0.5 * a1;
  double b2 = a2 + 0.5 * (p.b - a2);
  double res = 1e300;
  for (int it = 0; it < 200; ++it) {
    double f1 = dW(b1) - dW(b2);
    double f2 = W(b2) - W(b1) - dW(b1) * (b2 - b1);
    res = std::hypot(f1, f2);
    if (res < 1e-12) break;
    double j11 = ddW(b1), j12 = -ddW(b2);
    double j21 = -ddW(b1) * (b2 - b1), j22 = dW(b2) - dW(b1);
    double det = j11 * j22 - j12 * j21;
    if (det == 0.0) throw std::runtime_error("maxwell_states: singular Jacobian");
    double s1 = (f1 * j22 - f2 * j12) / det;
    double s2 = (j11 * f2 - j21 * f1) / det;
    // damp to keep iterates in the convex branches
    double step = 1.0;
    for (int k = 0; k < 60; ++k) {
      double n1 = b1 - step * s1, n2 = b2 - step * s2;
      if (n1 > 0 && n1 < a1 && n2 > a2 && n2 < p.b) {
        double g1 = dW(n1) - dW(n2);
        double g2 = W(n2) - W(n1) - dW(n1) * (n2 - n1);
        if (std::hypot(g1, g2) < res || step < 1e-6) {
          b1 = n1;
          b2 = n2;
          break;
        }
      }
      step *= 0.5;
      if (k == 59)
        throw std::runtime_error("maxwell_states: no two-phase equilibrium");
    }
  }
  if (!(res < 1e-10))
    throw std::runtime_error("maxwell_states: Newton did not converge");
  return {b1, b2};
}

PhaseDiagram phase_diagram(const VdWParams& p) {
  PhaseDiagram d;
  auto spin = spinodal_points(p);
  if (!spin) return d;
  d.subcritical = true;
  d.alpha1 = spin->first;
  d.alpha2 = spin->second;
  auto [b1, b2] = maxwell_states(p);
  d.beta1 = b1;
  d.beta2 = b2;
  return d;
}

PressureLaw PressureLaw::van_der_waals(const VdWParams& p) {
  p.validate();
  return PressureLaw{[p](double rho) { return vdw_pressure(rho, p); },
                     [p](double rho) { return vdw_pressure_derivative(rho, p); }};
}

PressureLaw PressureLaw::power_law(double c, double gamma) {
  return PressureLaw{
      [c, gamma](double rho) { return c * std::pow(rho, gamma); },
      [c, gamma](double rho) { return c * gamma * std::pow(rho, gamma - 1.0); }};
}

double coefficient_K(double q, const PressureLaw& law) {
  if (!(1.0 + q > 0.0)) throw std::domain_error("coefficient_K: 1+q must be > 0");
  return law.dP(1.0) - law.dP(1.0 + q) / (1.0 + q);
}

double coefficient_I(double q) {
  if (!(1.0 + q > 0.0)) throw std::domain_error("coefficient_I: 1+q must be > 0");
  return q / (q + 1.0);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double coefficient_G(double q, const PressureLaw& law) {
  if (!(1.0 + q > 0.0)) throw std::domain_error("coefficient_G: 1+q must be > 0");
  auto f = [&law](double s) { return coefficient_K(s, law); };
  return q >= 0 ? integrate(f, 0.0, q, 1e-12) : -integrate(f, q, 0.0, 1e-12);
}

namespace {

std::vector<double> physical_density(const SpectralField& rho,
                                     const VdWParams& p) {
  auto vals = rho.to_physical();
  for (double v : vals)
    if (!(v > 0.0) || !(v < p.b))
      throw std::domain_error("functional: density exits (0, b)");
  return vals;
}

}  // namespace

double eval_sharp_functional(const SpectralField& rho, const VdWParams& p) {
  auto vals = physical_density(rho, p);
  double s = 0;
  for (double v : vals) s += vdw_energy_density(v, p);
  return s * rho.grid().cell_measure();
}

double eval_local_functional(const SpectralField& rho, const VdWParams& p,
                             double gamma_cap, double eps) {
  double base = eval_sharp_functional(rho, p);
  double grad2 = 0;
  const auto& g = rho.grid();
  for (std::size_t i = 0; i < g.modes(); ++i)
    grad2 += g.xi2(i) * std::norm(rho[i]);
  return base + 0.5 * gamma_cap * eps * eps * g.volume() * grad2;
}

double eval_nonlocal_functional(const SpectralField& rho, const VdWParams& p,
                                double gamma_cap, double eps,
                                const KernelSymbol& kernel) {
  double base = eval_sharp_functional(rho, p);
  double pen = 0;
  const auto& g = rho.grid();
  for (std::size_t i = 0; i < g.modes(); ++i)
    pen += (1.0 - kernel(eps * eps * g.xi2(i))) * std::norm(rho[i]);
  return base + 0.5 * gamma_cap * g.volume() * pen;
}

EulerCharacteristics euler_characteristics(double tau, const PressureLaw& law,
                                           double ddP_eps) {
  if (!(tau > 0)) throw std::domain_error("euler_characteristics: tau > 0");
  double rho = 1.0 / tau;
  double dPt = -law.dP(rho) / (tau * tau);
  // second derivative of Ptilde via central difference of dP
  double h = ddP_eps * std::max(1.0, std::abs(rho));
  double ddP = (law.dP(rho + h) - law.dP(rho - h)) / (2.0 * h);
  double ddPt = ddP / std::pow(tau, 4) + 2.0 * law.dP(rho) / std::pow(tau, 3);

  EulerCharacteristics c;
  if (dPt > 0.0) {
    c.regime = EulerRegime::elliptic;
    return c;
  }
  if (dPt == 0.0) {
    c.regime = EulerRegime::boundary;
    return c;
  }
  c.regime = EulerRegime::hyperbolic;
  double s = std::sqrt(-dPt);
  c.lambda1 = -s;
  c.lambda2 = s;
  c.w1 = {1.0, s};
  c.w2 = {1.0, -s};
  c.gnl1 = ddPt / (2.0 * s);
  c.gnl2 = -ddPt / (2.0 * s);
  return c;
}

}  // namespace kwg
