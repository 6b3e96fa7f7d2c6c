#include "kwg/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "kwg/lpaley.hpp"

namespace kwg {

void PhysParams::validate() const {
  if (!(mu > 0.0) || !(2.0 * mu + lambda > 0.0))
    throw std::invalid_argument("PhysParams: min(mu, 2mu+lambda) > 0 required");
  if (!(p > 0.0)) throw std::invalid_argument("PhysParams: p = P'(1) > 0 required");
  if (!(kappa > 0.0)) throw std::invalid_argument("PhysParams: kappa > 0 required");
  if (!(eps >= 0.0)) throw std::invalid_argument("PhysParams: eps >= 0 required");
}

FluidState FluidState::zero(const TorusGrid& grid) {
  FluidState s;
  s.q = SpectralField(grid);
  s.u.assign(std::size_t(grid.dim()), SpectralField(grid));
  return s;
}

SimOptions SimOptions::defaults(const PhysParams& params) {
  SimOptions o;
  // cubic law keeps K(q) = -p q nonzero; a quadratic law would cancel it
  o.law = PressureLaw::power_law(params.p / 3.0, 3.0);
  return o;
}

LinearSymbol build_linear_symbol(const std::vector<double>& xi,
                                 const PhysParams& params) {
  params.validate();
  int d = int(xi.size());
  if (d < 1 || d > 2) throw std::invalid_argument("xi must have 1 or 2 components");
  int n = d + 1;
  LinearSymbol sym;
  sym.matrix.assign(std::size_t(n * n), cplx{0, 0});
  double xi2 = 0;
  for (double c : xi) xi2 += c * c;
  if (xi2 == 0.0) {
    sym.eigenvalues.assign(std::size_t(n), cplx{0, 0});
    return sym;
  }
  double c_eps = capillarity_symbol(xi2, params.kappa, params.eps);
  const cplx mi{0, -1};
  for (int a = 0; a < d; ++a) {
    sym.matrix[std::size_t(a + 1)] = mi * xi[std::size_t(a)];
    sym.matrix[std::size_t((a + 1) * n)] =
        mi * xi[std::size_t(a)] * (params.p + c_eps);
    for (int b = 0; b < d; ++b)
      sym.matrix[std::size_t((a + 1) * n + b + 1)] =
          -(params.lambda + params.mu) * xi[std::size_t(a)] * xi[std::size_t(b)] -
          (a == b ? params.mu * xi2 : 0.0);
  }
  // longitudinal pair: z^2 + nu xi2 z + xi2 (p + c_eps) = 0
  cplx m{-0.5 * params.nu() * xi2, 0};
  cplx delta = std::sqrt(m * m - cplx{xi2 * (params.p + c_eps), 0});
  sym.eigenvalues.push_back(m + delta);
  sym.eigenvalues.push_back(m - delta);
  for (int k = 0; k + 1 < d; ++k)
    sym.eigenvalues.push_back(cplx{-params.mu * xi2, 0});
  return sym;
}

namespace {

// sinh(z)/z, series near 0 so the defective (delta = 0) case is smooth
cplx sinhc(cplx z) {
  if (std::abs(z) < 1e-4) {
    cplx z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

struct Propagator2x2 {
  cplx e11, e12, e21, e22;
};

// exp(dt M) for M = [[0, -i r], [-i r (p+c), -nu r^2]], r = |xi|
Propagator2x2 longitudinal_exp(double r, double pc, double nu, double dt) {
  double xi2 = r * r;
  cplx m{-0.5 * nu * xi2, 0};
  cplx delta = std::sqrt(m * m - cplx{xi2 * pc, 0});
  cplx em = std::exp(dt * m);
  cplx ch = std::cosh(dt * delta);
  cplx s = dt * sinhc(dt * delta);  // sinh(dt delta)/delta
  const cplx mir{0, -r};
  Propagator2x2 e;
  e.e11 = em * (ch - m * s);
  e.e12 = em * (mir * s);
  e.e21 = em * (mir * pc * s);
  e.e22 = em * (ch + (cplx{-nu * xi2, 0} - m) * s);
  return e;
}

}  // namespace

FluidState linear_propagate(const FluidState& state, double dt,
                            const PhysParams& params) {
  params.validate();
  const TorusGrid& g = state.q.grid();
  int d = g.dim();
  FluidState out = state;
  out.t = state.t + dt;
  for (std::size_t i = 0; i < g.modes(); ++i) {
    double xi2 = g.xi2(i);
    if (xi2 == 0.0) continue;
    double r = std::sqrt(xi2);
    double pc = params.p + capillarity_symbol(xi2, params.kappa, params.eps);
    auto e = longitudinal_exp(r, pc, params.nu(), dt);
    double transverse = std::exp(-params.mu * xi2 * dt);

    cplx qh = state.q[i];
    cplx a{0, 0};
    std::array<double, 2> dir{0, 0};
    for (int ax = 0; ax < d; ++ax) {
      dir[std::size_t(ax)] = g.xi(i, ax) / r;
      a += dir[std::size_t(ax)] * state.u[std::size_t(ax)][i];
    }
    cplx qn = e.e11 * qh + e.e12 * a;
    cplx an = e.e21 * qh + e.e22 * a;
    out.q[i] = qn;
    for (int ax = 0; ax < d; ++ax) {
      cplx trans = state.u[std::size_t(ax)][i] - dir[std::size_t(ax)] * a;
      out.u[std::size_t(ax)][i] = transverse * trans + dir[std::size_t(ax)] * an;
    }
  }
  return out;
}

namespace {

SpectralField viscous_operator(const std::vector<SpectralField>& u, int a,
                               const PhysParams& params) {
  const TorusGrid& g = u[0].grid();
  SpectralField out(g);
  for (std::size_t i = 0; i < g.modes(); ++i) {
    cplx lap = -params.mu * g.xi2(i) * u[std::size_t(a)][i];
    cplx graddiv{0, 0};
    for (int b = 0; b < g.dim(); ++b)
      graddiv += -(params.lambda + params.mu) * g.xi(i, a) * g.xi(i, b) *
                 u[std::size_t(b)][i];
    out[i] = lap + graddiv;
  }
  return out;
}

}  // namespace

std::pair<SpectralField, std::vector<SpectralField>> nonlinear_rhs(
    const FluidState& state, const PhysParams& params, const SimOptions& opt) {
  const TorusGrid& g = state.q.grid();
  int d = g.dim();
  if (1.0 + min_physical(state.q) <= opt.vacuum_floor)
    throw std::runtime_error("vacuum: min(1+q) fell below the floor");

  SpectralField divu(g);
  for (int a = 0; a < d; ++a) divu += state.u[std::size_t(a)].derivative(a);

  SpectralField dq(g);
  for (int a = 0; a < d; ++a) {
    SpectralField dq_a = state.q.derivative(a);
    dq -= multiply_dealiased(state.u[std::size_t(a)], dq_a);
  }
  dq -= multiply_dealiased(state.q, divu);
  dq[0] = 0;  // zero mode: exact discrete mass conservation

  const PressureLaw& law = opt.law;
  std::vector<SpectralField> du;
  du.reserve(std::size_t(d));
  for (int a = 0; a < d; ++a) {
    SpectralField acc(g);
    for (int b = 0; b < d; ++b)
      acc -= multiply_dealiased(state.u[std::size_t(b)],
                                state.u[std::size_t(a)].derivative(b));
    SpectralField grad_qa = state.q.derivative(a);
    acc += map_dealiased({&state.q, &grad_qa},
                         [&law](const std::vector<double>& v) {
                           return coefficient_K(v[0], law) * v[1];
                         });
    SpectralField visc = viscous_operator(state.u, a, params);
    acc -= map_dealiased({&state.q, &visc},
                         [](const std::vector<double>& v) {
                           return coefficient_I(v[0]) * v[1];
                         });
    du.push_back(std::move(acc));
  }
  return {std::move(dq), std::move(du)};
}

SpectralField friedrichs_project(const SpectralField& f, double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("friedrichs_project: n >= 1");
  const TorusGrid& g = f.grid();
  SpectralField out = f;
  for (std::size_t i = 0; i < g.modes(); ++i) {
    double r = g.xi_abs(i);
    if (r < 1.0 / n || r > n) out[i] = 0;
  }
  return out;
}

namespace {

double max_speed(const FluidState& s) {
  double m = 0;
  for (const auto& c : s.u) m = std::max(m, c.linf_norm());
  return m;
}

void check_cfl(const FluidState& s, double dt) {
  double bound = 0.5 * s.q.grid().dx() / std::max(1.0, max_speed(s));
  if (dt > bound * (1.0 + 1e-12))
    throw std::runtime_error("CFL violation: dt exceeds 0.5 dx / max(1,|u|)");
}

FluidState apply_rhs(const FluidState& base, const SpectralField& dq,
                     const std::vector<SpectralField>& du, double dt) {
  FluidState out = base;
  SpectralField sq = dq;
  sq *= dt;
  out.q += sq;
  for (std::size_t a = 0; a < du.size(); ++a) {
    SpectralField su = du[a];
    su *= dt;
    out.u[a] += su;
  }
  return out;
}

template <class Rhs>
FluidState strang_step(const FluidState& state, double dt,
                       const PhysParams& params, const Rhs& rhs) {
  FluidState half = linear_propagate(state, 0.5 * dt, params);
  auto [k1q, k1u] = rhs(half);
  FluidState mid = apply_rhs(half, k1q, k1u, 0.5 * dt);
  auto [k2q, k2u] = rhs(mid);
  FluidState full = apply_rhs(half, k2q, k2u, dt);
  FluidState out = linear_propagate(full, 0.5 * dt, params);
  out.t = state.t + dt;
  return out;
}

}  // namespace

FluidState step_strang(const FluidState& state, double dt,
                       const PhysParams& params, const SimOptions& opt) {
  check_cfl(state, dt);
  return strang_step(state, dt, params, [&](const FluidState& s) {
    return nonlinear_rhs(s, params, opt);
  });
}

SmallnessReport smallness_report(const FluidState& initial) {
  DyadicFamily fam(initial.q.grid());
  double half_d = 0.5 * initial.q.grid().dim();
  SmallnessReport r;
  r.q_low = besov_norm(initial.q, half_d - 1.0, BlockSum::l1, fam);
  r.q_high = besov_norm(initial.q, half_d, BlockSum::l1, fam);
  for (const auto& c : initial.u)
    r.u_low += besov_norm(c, half_d - 1.0, BlockSum::l1, fam);
  return r;
}

namespace {

template <class Step>
Trajectory run_trajectory(const FluidState& initial, double T, double dt,
                          int snapshot_count, double friedrichs_n,
                          const Step& step) {
  if (!(T > 0) || !(dt > 0)) throw std::invalid_argument("T > 0, dt > 0");
  long steps = long(std::ceil(T / dt - 1e-12));
  double h = T / double(steps);
  snapshot_count = std::max(2, snapshot_count);

  Trajectory traj;
  traj.dt = h;
  FluidState cur = initial;
  long next_snap = 0;
  auto record = [&](const FluidState& s, long k) {
    if (k * (snapshot_count - 1) >= next_snap * steps) {
      traj.times.push_back(s.t);
      traj.states.push_back(s);
      ++next_snap;
    }
  };
  record(cur, 0);
  for (long k = 1; k <= steps; ++k) {
    cur = step(cur, h);
    if (friedrichs_n > 0) {
      cur.q = friedrichs_project(cur.q, friedrichs_n);
      for (auto& c : cur.u) c = friedrichs_project(c, friedrichs_n);
    }
    record(cur, k);
  }
  return traj;
}

}  // namespace

Trajectory simulate(const FluidState& initial, const PhysParams& params,
                    double T, double dt, int snapshot_count,
                    const SimOptions& opt) {
  params.validate();
  // initial data scale: u can start at zero and be excited through q
  double scale =
      std::max({max_speed(initial), initial.q.linf_norm(), 1e-12});
  return run_trajectory(initial, T, dt, snapshot_count, opt.friedrichs_n,
                        [&](const FluidState& s, double h) {
                          FluidState n = step_strang(s, h, params, opt);
                          if (max_speed(n) > opt.blowup_factor * scale)
                            throw std::runtime_error(
                                "blow-up guard: |u| left the small-data regime");
                          return n;
                        });
}

Trajectory simulate_linear(const std::vector<SpectralField>& v,
                           const SpectralField& F,
                           const std::vector<SpectralField>& G,
                           const FluidState& initial, const PhysParams& params,
                           double T, double dt, int snapshot_count) {
  params.validate();
  const TorusGrid& g = initial.q.grid();
  int d = g.dim();
  bool has_v = !v.empty();
  bool has_F = !F.coef().empty();
  bool has_G = !G.empty();
  if (has_v && int(v.size()) != d)
    throw std::invalid_argument("simulate_linear: v needs d components");
  if (has_G && int(G.size()) != d)
    throw std::invalid_argument("simulate_linear: G needs d components");

  auto rhs = [&](const FluidState& s) {
    SpectralField dq(g);
    std::vector<SpectralField> du;
    du.assign(std::size_t(d), SpectralField(g));
    if (has_v) {
      for (int a = 0; a < d; ++a) {
        dq -= multiply_dealiased(v[std::size_t(a)], s.q.derivative(a));
        for (int b = 0; b < d; ++b)
          du[std::size_t(a)] -= multiply_dealiased(
              v[std::size_t(b)], s.u[std::size_t(a)].derivative(b));
      }
    }
    if (has_F) dq += F;
    if (has_G)
      for (int a = 0; a < d; ++a) du[std::size_t(a)] += G[std::size_t(a)];
    dq[0] = 0;
    return std::pair<SpectralField, std::vector<SpectralField>>{
        std::move(dq), std::move(du)};
  };

  return run_trajectory(initial, T, dt, snapshot_count, 0.0,
                        [&](const FluidState& s, double h) {
                          return strang_step(s, h, params, rhs);
                        });
}

}  // namespace kwg
