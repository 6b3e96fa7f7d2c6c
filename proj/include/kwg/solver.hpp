#pragma once

#include <utility>
#include <vector>

#include "kwg/field.hpp"
#include "kwg/kernels.hpp"
#include "kwg/thermo.hpp"

namespace kwg {

/// Physical coefficients of the fluctuation system. eps = 0 selects the
/// local capillarity symbol kappa*|xi|^2.
struct PhysParams {
  double mu = 1.0;      // shear viscosity
  double lambda = 0.0;  // second viscosity
  double kappa = 1.0;   // capillarity strength
  double p = 1.0;       // P'(1)
  double eps = 0.1;     // interaction range; 0 = local limit

  double nu() const { return lambda + 2.0 * mu; }
  double nubar() const { return std::min(mu, nu()); }
  void validate() const;
};

struct FluidState {
  double t = 0.0;
  SpectralField q;                // density fluctuation, zero mean
  std::vector<SpectralField> u;   // velocity components

  static FluidState zero(const TorusGrid& grid);
};

/// Per-wavevector coupling matrix of (q, u) under the linearized system,
/// with its spectrum. The longitudinal/transverse split makes the
/// exponential closed-form; the series branch of sinh(z)/z covers the
/// defective (equal-eigenvalue) case, so no fallback path is needed.
struct LinearSymbol {
  std::vector<cplx> matrix;       // (d+1)x(d+1), row-major, (q, u_1..u_d)
  std::vector<cplx> eigenvalues;  // longitudinal pair, then transverse
};

LinearSymbol build_linear_symbol(const std::vector<double>& xi,
                                 const PhysParams& params);

/// Exact per-mode exponential of the linear system over dt.
FluidState linear_propagate(const FluidState& state, double dt,
                            const PhysParams& params);

struct SimOptions {
  double vacuum_floor = 0.05;   // hard error if min(1+q) dips below
  double blowup_factor = 1e3;   // abort when ||u||_inf exceeds this x initial scale
  double friedrichs_n = 0.0;    // > 0: truncate to 1/n <= |xi| <= n each step
  PressureLaw law;              // defaults to P'(1)-matched quadratic law

  static SimOptions defaults(const PhysParams& params);
};

/// Convective and coefficient nonlinearities (the linear part lives in the
/// propagator): dq = -u.grad q - q div u, du = -u.grad u + K(q)grad q - I(q)Au.
std::pair<SpectralField, std::vector<SpectralField>> nonlinear_rhs(
    const FluidState& state, const PhysParams& params, const SimOptions& opt);

/// Strang step: half linear propagate, explicit midpoint on the
/// nonlinearity, half linear propagate. Enforces dt <= 0.5 dx / max(1, |u|).
FluidState step_strang(const FluidState& state, double dt,
                       const PhysParams& params, const SimOptions& opt);

/// spectral truncation to 1/n <= |xi| <= n
SpectralField friedrichs_project(const SpectralField& f, double n);

struct Trajectory {
  std::vector<double> times;
  std::vector<FluidState> states;
  double dt = 0.0;
};

/// Norms of the initial data reported before a run (small-data regime check).
struct SmallnessReport {
  double q_low = 0, q_high = 0;  // q0 in Bdot^{d/2-1}, Bdot^{d/2}
  double u_low = 0;              // u0 in Bdot^{d/2-1}
  double total() const { return q_low + q_high + u_low; }
};

SmallnessReport smallness_report(const FluidState& initial);

Trajectory simulate(const FluidState& initial, const PhysParams& params,
                    double T, double dt, int snapshot_count,
                    const SimOptions& opt);

/// Linearized system with a frozen convection field v and constant forcing
/// (F scalar, G vector): dq + v.grad q + div u = F, du + v.grad u + ... = G.
Trajectory simulate_linear(const std::vector<SpectralField>& v,
                           const SpectralField& F,
                           const std::vector<SpectralField>& G,
                           const FluidState& initial, const PhysParams& params,
                           double T, double dt, int snapshot_count);

}  // namespace kwg
