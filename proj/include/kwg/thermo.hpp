#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kwg/field.hpp"
#include "kwg/kernels.hpp"

namespace kwg {

/// Van der Waals law P(rho) = R*Tstar*rho/(b - rho) - a*rho^2 on (0, b).
struct VdWParams {
  double a = 1.0;      // attraction coefficient
  double b = 2.0;      // covolume
  double R = 1.0;      // specific gas constant
  double Tstar = 1.0;  // fixed temperature

  void validate() const;
};

double vdw_pressure(double rho, const VdWParams& p);
double vdw_pressure_derivative(double rho, const VdWParams& p);
double vdw_pressure_second_derivative(double rho, const VdWParams& p);
/// energy density W with P = rho W' - W (additive affine gauge fixed to 0)
double vdw_energy_density(double rho, const VdWParams& p);
double vdw_energy_density_derivative(double rho, const VdWParams& p);

/// Spinodal densities: the two roots of P' in (0, b), when they exist.
std::optional<std::pair<double, double>> spinodal_points(const VdWParams& p);

/// Maxwell (two-phase equilibrium) densities: common tangent of W, solved by
/// damped Newton seeded from the spinodal points. Throws if the parameters
/// admit no two-phase equilibrium.
std::pair<double, double> maxwell_states(const VdWParams& p);

struct PhaseDiagram {
  bool subcritical = false;
  double alpha1 = 0, alpha2 = 0;  // spinodal densities
  double beta1 = 0, beta2 = 0;    // Maxwell densities
};

PhaseDiagram phase_diagram(const VdWParams& p);

/// A twice-differentiable pressure law P(rho) near rho = 1 (the coefficient
/// functions of the fluctuation system only need P and P').
struct PressureLaw {
  std::function<double(double)> P;
  std::function<double(double)> dP;

  static PressureLaw van_der_waals(const VdWParams& p);
  /// P(rho) = c * rho^gamma
  static PressureLaw power_law(double c = 1.0, double gamma = 2.0);
};

/// K(q) = P'(1) - P'(1+q)/(1+q); vanishes at q = 0.
double coefficient_K(double q, const PressureLaw& law);
/// I(q) = q/(q+1)
double coefficient_I(double q);
/// primitive of K with G(0) = 0, adaptive Simpson to 1e-12
double coefficient_G(double q, const PressureLaw& law);

/// Variational functionals (evaluation only). rho must stay inside (0, b).
double eval_sharp_functional(const SpectralField& rho, const VdWParams& p);
double eval_local_functional(const SpectralField& rho, const VdWParams& p,
                             double gamma_cap, double eps);
double eval_nonlocal_functional(const SpectralField& rho, const VdWParams& p,
                                double gamma_cap, double eps,
                                const KernelSymbol& kernel);

enum class EulerRegime { hyperbolic, elliptic, boundary };

/// Characteristic structure of the isothermal Euler p-system in the specific
/// volume tau = 1/rho, with Ptilde(tau) = P(1/tau).
struct EulerCharacteristics {
  EulerRegime regime = EulerRegime::hyperbolic;
  double lambda1 = 0, lambda2 = 0;          // wave speeds (defined if hyperbolic)
  std::array<double, 2> w1{}, w2{};          // eigenvectors
  double gnl1 = 0, gnl2 = 0;                // grad(lambda_i) . w_i
};

EulerCharacteristics euler_characteristics(double tau, const PressureLaw& law,
                                           double ddP_eps = 1e-6);

}  // namespace kwg
