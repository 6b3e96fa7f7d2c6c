#include "kwg/convergence.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace kwg {

void SweepPlan::validate(int dim) const {
  if (eps.size() < 2) throw std::invalid_argument("sweep: need >= 2 eps values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0)) throw std::invalid_argument("sweep: eps must be > 0");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw std::invalid_argument("sweep: eps must be strictly decreasing");
  }
  bool ok = dim == 2 ? (alpha_target > 0 && alpha_target < 1)
                     : (alpha_target > 0 && alpha_target <= 1);
  if (!ok) throw std::invalid_argument("sweep: alpha_target out of range");
  if (!(T > 0) || !(dt > 0)) throw std::invalid_argument("sweep: T, dt > 0");
}

DifferenceNorms difference_norms(const Trajectory& local,
                                 const Trajectory& nonlocal, double eps,
                                 double alpha, const DyadicFamily& fam) {
  if (local.times.size() != nonlocal.times.size())
    throw std::invalid_argument("difference_norms: snapshot count mismatch");
  for (std::size_t k = 0; k < local.times.size(); ++k)
    if (std::abs(local.times[k] - nonlocal.times[k]) > 1e-12)
      throw std::invalid_argument("difference_norms: snapshot time mismatch");
  if (!(local.states.front().q.grid() == nonlocal.states.front().q.grid()))
    throw std::invalid_argument("difference_norms: grid mismatch");

  int d = fam.grid().dim();
  double base = 0.5 * d - alpha;
  double dt = local.times.size() > 1 ? local.times[1] - local.times[0] : 0.0;

  std::vector<SpectralField> dq;
  std::vector<std::vector<SpectralField>> du;
  for (std::size_t k = 0; k < local.states.size(); ++k) {
    dq.push_back(nonlocal.states[k].q - local.states[k].q);
    std::vector<SpectralField> row;
    for (std::size_t a = 0; a < local.states[k].u.size(); ++a)
      row.push_back(nonlocal.states[k].u[a] - local.states[k].u[a]);
    du.push_back(std::move(row));
  }

  int l_eps = make_threshold(eps).l_eps;
  DifferenceNorms r;
  r.eps = eps;
  r.u_sup = tilde_norm(du, dt, TimeAgg::sup, base - 1.0, fam);
  r.q_sup_low = tilde_norm(dq, dt, TimeAgg::sup, base - 1.0, fam);
  r.q_sup_high = tilde_norm(dq, dt, TimeAgg::sup, base, fam);
  r.u_int = tilde_norm(du, dt, TimeAgg::integral, base + 1.0, fam);
  r.q_hyb1 = tilde_hybrid_norm(dq, dt, {base + 1.0, base, eps, l_eps}, fam);
  r.q_hyb2 = tilde_hybrid_norm(dq, dt, {base + 2.0, base, eps, l_eps}, fam);
  return r;
}

RateReport run_sweep(const SweepPlan& plan) {
  const TorusGrid& grid = plan.initial.q.grid();
  plan.validate(grid.dim());
  RateReport rep;
  rep.smallness = smallness_report(plan.initial);
  if (plan.eta > 0 && rep.smallness.total() > plan.eta)
    throw std::runtime_error("sweep: initial data fails the smallness bound");

  DyadicFamily fam(grid);
  auto run_one = [&](double eps) {
    PhysParams p = plan.base;
    p.eps = eps;
    p.validate();
    SimOptions opt = SimOptions::defaults(p);
    return simulate(plan.initial, p, plan.T, plan.dt, plan.snapshot_count,
                    opt);
  };

  Trajectory local = run_one(0.0);
  std::vector<Trajectory> members(plan.eps.size());
  if (plan.threads > 1) {
    std::vector<std::future<Trajectory>> futs;
    for (double e : plan.eps)
      futs.push_back(std::async(std::launch::async, run_one, e));
    for (std::size_t i = 0; i < futs.size(); ++i) members[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < plan.eps.size(); ++i)
      members[i] = run_one(plan.eps[i]);
  }

  for (std::size_t i = 0; i < plan.eps.size(); ++i)
    rep.records.push_back(difference_norms(local, members[i], plan.eps[i],
                                           plan.alpha_target, fam));

  // least squares on log sum vs log eps
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = rep.records.size();
  for (const auto& r : rep.records) {
    double x = std::log(r.eps), y = std::log(r.sum());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = double(n) * sxx - sx * sx;
  if (!(denom > 0)) throw std::runtime_error("sweep: degenerate eps spread");
  rep.slope = (double(n) * sxy - sx * sy) / denom;
  double b = (sy - rep.slope * sx) / double(n);
  rep.intercept = std::exp(b);
  double ss = 0;
  for (const auto& r : rep.records) {
    double e = std::log(r.sum()) - (rep.slope * std::log(r.eps) + b);
    ss += e * e;
  }
  rep.residual = std::sqrt(ss / double(n));
  // condition number of the normal matrix [[n, sx], [sx, sxx]]
  double tr = double(n) + sxx;
  double disc = std::sqrt(tr * tr - 4.0 * denom);
  rep.condition = (tr + disc) / (tr - disc);
  return rep;
}

}  // namespace kwg
