#include "kwg/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kwg {

double BlockEnergy::h() const {
  double v = h2();
  return v > 0 ? std::sqrt(v) : 0.0;
}

BlockEnergy energy_block(const FluidState& state, int l,
                         const PhysParams& params, const DyadicFamily& fam) {
  const TorusGrid& g = state.q.grid();
  double alpha = params.nubar() / 4.0;
  SpectralField ql = fam.block(state.q, l);

  BlockEnergy e;
  double q2 = 0, grad2 = 0, nl = 0;
  for (std::size_t i = 0; i < g.modes(); ++i) {
    double a2 = std::norm(ql[i]);
    if (a2 == 0.0) continue;
    double xi2 = g.xi2(i);
    q2 += a2;
    grad2 += xi2 * a2;
    nl += capillarity_symbol(xi2, params.kappa, params.eps) * a2;
  }
  double vol = g.volume();
  e.pq2 = params.p * vol * q2;
  e.gradq_l2 = vol * grad2;
  e.grad2 = alpha * params.nu() * e.gradq_l2;
  e.nonlocal = vol * nl;

  const auto& bw = fam.block_weights(l);
  double u2 = 0, cross = 0;
  for (int a = 0; a < g.dim(); ++a) {
    const SpectralField& ua = state.u[std::size_t(a)];
    for (std::size_t i = 0; i < g.modes(); ++i) {
      if (bw[i] == 0.0) continue;
      cplx ul = bw[i] * ua[i];
      u2 += std::norm(ul);
      // (u_l | d_a q_l) with d_a q_l = i xi_a q_l
      cross += (std::conj(ul) * cplx{0, g.xi(i, a)} * ql[i]).real();
    }
  }
  e.u2 = vol * u2;
  e.cross = 2.0 * alpha * vol * cross;
  return e;
}

EquivalenceReport check_equivalence(const BlockEnergy& e,
                                    const PhysParams& params) {
  double alpha = params.nubar() / 4.0;
  double nu = params.nu();
  EquivalenceReport r;
  r.h2 = e.h2();
  r.lower = (1.0 - 2.0 * alpha / nu) * e.u2 + e.pq2 +
            0.5 * alpha * nu * e.gradq_l2 + e.nonlocal;
  r.upper = (1.0 + 2.0 * alpha / nu) * e.u2 + e.pq2 +
            1.5 * alpha * nu * e.gradq_l2 + e.nonlocal;
  double tol = 1e-9 * (1.0 + std::abs(r.h2));
  r.ok = (r.lower - tol <= r.h2) && (r.h2 <= r.upper + tol);
  return r;
}

std::pair<std::vector<SpectralField>, ConsistencyReport> consistency_remainder(
    const SpectralField& q, const PhysParams& params, double beta, double s,
    const DyadicFamily& fam) {
  if (!(params.eps > 0))
    throw std::invalid_argument("consistency_remainder: eps > 0 required");
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("consistency_remainder: beta in (1,2)");
  const TorusGrid& g = q.grid();
  double e2 = params.eps * params.eps;
  std::vector<SpectralField> R(std::size_t(g.dim()), SpectralField(g));
  for (std::size_t i = 0; i < g.modes(); ++i) {
    double x = e2 * g.xi2(i);
    double fac = -(params.kappa / e2) * (x + std::expm1(-x));
    for (int a = 0; a < g.dim(); ++a)
      R[std::size_t(a)][i] = cplx{0, g.xi(i, a)} * fac * q[i];
  }
  ConsistencyReport rep;
  rep.beta = beta;
  rep.eps = params.eps;
  rep.s = s;
  rep.lhs = besov_norm(R, s, BlockSum::l1, fam);
  rep.rhs = params.kappa * consistency_constant(beta) *
            std::pow(params.eps, 2.0 * (beta - 1.0)) *
            besov_norm(q, s + 1.0 + 2.0 * beta, BlockSum::l1, fam);
  return {std::move(R), rep};
}

double decay_m(const PhysParams& params) {
  double alpha = params.nubar() / 4.0;
  return std::min({params.nubar() - alpha, alpha * params.p,
                   0.5 * alpha * params.kappa});
}

double decay_m_prime(const PhysParams& params) {
  double gamma = threshold_gamma();
  const double C0 = 8.0 / 3.0, c0 = 0.75;
  double ratio = c0 / C0;
  return decay_m(params) *
         std::min(gamma / (C0 * C0), -std::expm1(-gamma * ratio * ratio));
}

double EnergyLedger::envelope(int block_pos, double t) const {
  return entries.front()[std::size_t(block_pos)].h() *
         std::exp(-envelope_rate[std::size_t(block_pos)] * t);
}

EnergyLedger build_ledger(const Trajectory& traj, const PhysParams& params,
                          const DyadicFamily& fam) {
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
  EnergyLedger led;
  led.alpha = params.nubar() / 4.0;
  led.m = decay_m(params);
  led.m_prime = decay_m_prime(params);
  led.l_eps = params.eps > 0 ? make_threshold(params.eps).l_eps
                             : std::numeric_limits<int>::max();
  led.times = traj.times;
  for (int l = fam.j_min(); l <= fam.j_max(); ++l) led.block_index.push_back(l);

  for (const auto& st : traj.states) {
    std::vector<BlockEnergy> row;
    row.reserve(led.block_index.size());
    for (int l : led.block_index)
      row.push_back(energy_block(st, l, params, fam));
    led.entries.push_back(std::move(row));
  }

  std::size_t nb = led.block_index.size();
  led.fitted_rate.assign(nb, std::numeric_limits<double>::quiet_NaN());
  led.envelope_rate.assign(nb, 0.0);
  double t_end = led.times.back();
  for (std::size_t b = 0; b < nb; ++b) {
    int l = led.block_index[b];
    if (l <= led.l_eps) {
      double xi = fam.block_min_xi(l);
      led.envelope_rate[b] = 0.5 * led.m * xi * xi;
    } else {
      led.envelope_rate[b] = led.m_prime / (params.eps * params.eps);
    }
    // fit log h_l over the first half of the run, before the round-off floor
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < led.times.size(); ++k) {
      if (led.times[k] > 0.5 * t_end) break;
      double h = led.entries[k][b].h();
      if (!(h > 1e-14)) {
        n = 0;
        break;
      }
      double x = led.times[k], y = std::log(h);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2) {
      double denom = n * sxx - sx * sx;
      if (denom > 0) led.fitted_rate[b] = -(n * sxy - sx * sy) / denom;
    }
  }
  return led;
}

AprioriReport apriori_monitor(const Trajectory& traj,
                              const std::vector<SpectralField>& v,
                              const SpectralField& F,
                              const std::vector<SpectralField>& G,
                              const PhysParams& params, double s,
                              const DyadicFamily& fam) {
  if (traj.states.size() < 2)
    throw std::invalid_argument("apriori_monitor: need >= 2 snapshots");
  if (!(params.eps > 0))
    throw std::invalid_argument("apriori_monitor: eps > 0 required");
  double dt = traj.times[1] - traj.times[0];
  double T = traj.times.back() - traj.times.front();
  int l_eps = make_threshold(params.eps).l_eps;

  std::vector<SpectralField> qs;
  std::vector<std::vector<SpectralField>> us;
  for (const auto& st : traj.states) {
    qs.push_back(st.q);
    us.push_back(st.u);
  }

  AprioriReport rep;
  rep.lhs = tilde_norm(us, dt, TimeAgg::sup, s - 1.0, fam) +
            tilde_norm(qs, dt, TimeAgg::sup, s - 1.0, fam) +
            tilde_norm(qs, dt, TimeAgg::sup, s, fam) +
            tilde_norm(us, dt, TimeAgg::integral, s + 1.0, fam) +
            tilde_hybrid_norm(qs, dt, {s + 1.0, s, params.eps, l_eps}, fam) +
            tilde_hybrid_norm(qs, dt, {s + 2.0, s, params.eps, l_eps}, fam);

  const FluidState& init = traj.states.front();
  rep.data = besov_norm(init.u, s - 1.0, BlockSum::l1, fam) +
             besov_norm(init.q, s - 1.0, BlockSum::l1, fam) +
             besov_norm(init.q, s, BlockSum::l1, fam);
  // constant-in-time forcing: its Chemin-Lerner time integral is T x norm
  if (!F.coef().empty())
    rep.data += T * (besov_norm(F, s - 1.0, BlockSum::l1, fam) +
                     besov_norm(F, s, BlockSum::l1, fam));
  if (!G.empty()) rep.data += T * besov_norm(G, s - 1.0, BlockSum::l1, fam);

  double half_d = 0.5 * fam.grid().dim();
  if (!v.empty()) {
    std::vector<SpectralField> grads;
    for (const auto& c : v)
      for (int a = 0; a < fam.grid().dim(); ++a)
        grads.push_back(c.derivative(a));
    double gv = besov_norm(grads, half_d, BlockSum::l1, fam);
    double nv = besov_norm(v, half_d, BlockSum::l1, fam);
    rep.v_integral = T * (gv + nv * nv);
  }

  if (rep.data <= 0) {
    rep.best_c = rep.lhs <= 1e-14 ? 0.0
                                  : std::numeric_limits<double>::infinity();
    return rep;
  }
  // C exp(C V) data is increasing in C; bisect for the smallest admissible C
  auto f = [&](double c) {
    return c * std::exp(c * rep.v_integral) * rep.data - rep.lhs;
  };
  double hi = 1.0;
  while (f(hi) < 0 && hi < 1e12) hi *= 2;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  rep.best_c = 0.5 * (lo + hi);
  return rep;
}

}  // namespace kwg
