#include "kwg/lpaley.hpp"

#include <cmath>
#include <stdexcept>

namespace kwg {

namespace {
constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;
}  // namespace

double DyadicFamily::profile(double r) {
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  double t = (r - kInner) / (kOuter - kInner);
  double t3 = t * t * t;
  return 1.0 - t3 * (10.0 + t * (-15.0 + 6.0 * t));
}

double DyadicFamily::annulus(double r) {
  return profile(0.5 * r) - profile(r);
}

DyadicFamily::DyadicFamily(const TorusGrid& grid) : grid_(grid) {
  double xi_min = grid.min_wavenumber();
  j_min_ = int(std::floor(std::log2(xi_min * kOuter))) - 1;
  j_max_ = int(std::ceil(std::log2(grid.nyquist() / kInner)));
  if (blocks() < 3)
    throw std::invalid_argument("grid too coarse to host 3 dyadic blocks");

  std::size_t m = grid.modes();
  blockw_.resize(std::size_t(blocks()));
  loww_.resize(std::size_t(blocks()));
  min_xi_.assign(std::size_t(blocks()), 0.0);
  for (int j = j_min_; j <= j_max_; ++j) {
    auto& bw = blockw_[idx(j)];
    auto& lw = loww_[idx(j)];
    bw.resize(m);
    lw.resize(m);
    double scale = std::ldexp(1.0, -j);
    double lo = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = grid.xi_abs(i);
      lw[i] = (r == 0.0) ? 1.0 : profile(scale * r);
      bw[i] = (r == 0.0) ? 0.0 : annulus(scale * r);
      if (bw[i] != 0.0 && (lo == 0.0 || r < lo)) lo = r;
    }
    min_xi_[idx(j)] = lo;
  }
}

std::size_t DyadicFamily::idx(int j) const {
  if (j < j_min_ || j > j_max_)
    throw std::out_of_range("dyadic block index out of range");
  return std::size_t(j - j_min_);
}

SpectralField DyadicFamily::block(const SpectralField& u, int j) const {
  return u.filtered(blockw_[idx(j)]);
}

SpectralField DyadicFamily::low_cutoff(const SpectralField& u, int j) const {
  if (j <= j_min_) {
    // below the range only the zero mode survives
    SpectralField out(u.grid());
    out[0] = u[0];
    return out;
  }
  if (j > j_max_) return u;
  return u.filtered(loww_[idx(j)]);
}

double DyadicFamily::block_l2(const SpectralField& u, int j) const {
  const auto& w = blockw_[idx(j)];
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0.0) s += w[i] * w[i] * std::norm(u[i]);
  return std::sqrt(grid_.volume() * s);
}

double besov_norm(const SpectralField& u, double s, BlockSum r,
                  const DyadicFamily& fam) {
  double acc = 0;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    double v = std::exp2(j * s) * fam.block_l2(u, j);
    acc = (r == BlockSum::l1) ? acc + v : std::max(acc, v);
  }
  return acc;
}

double block_l2(const std::vector<SpectralField>& u, int j,
                const DyadicFamily& fam) {
  double s = 0;
  for (const auto& c : u) {
    double b = fam.block_l2(c, j);
    s += b * b;
  }
  return std::sqrt(s);
}

double besov_norm(const std::vector<SpectralField>& u, double s, BlockSum r,
                  const DyadicFamily& fam) {
  double acc = 0;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    double v = std::exp2(j * s) * block_l2(u, j, fam);
    acc = (r == BlockSum::l1) ? acc + v : std::max(acc, v);
  }
  return acc;
}

double tilde_norm(const std::vector<std::vector<SpectralField>>& snapshots,
                  double dt, TimeAgg rho, double s, const DyadicFamily& fam) {
  if (snapshots.empty()) throw std::invalid_argument("empty snapshot series");
  if (rho == TimeAgg::integral && snapshots.size() < 2)
    throw std::invalid_argument("time integral needs >= 2 snapshots");
  std::vector<double> agg(std::size_t(fam.blocks()), 0.0);
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    bool edge = (k == 0 || k + 1 == snapshots.size());
    double w = edge ? 0.5 * dt : dt;
    for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
      double b = block_l2(snapshots[k], j, fam);
      auto& a = agg[std::size_t(j - fam.j_min())];
      a = (rho == TimeAgg::integral) ? a + w * b : std::max(a, b);
    }
  }
  double acc = 0;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j)
    acc += std::exp2(j * s) * agg[std::size_t(j - fam.j_min())];
  return acc;
}

double hybrid_norm(const SpectralField& u, const HybridNormSpec& spec,
                   const DyadicFamily& fam) {
  if (!(spec.eps > 0))
    throw std::invalid_argument("hybrid_norm: eps > 0 required");
  double acc = 0;
  double w_hi = 1.0 / (spec.eps * spec.eps);
  for (int l = fam.j_min(); l <= fam.j_max(); ++l) {
    double b = fam.block_l2(u, l);
    acc += (l <= spec.l_eps) ? std::exp2(l * spec.s) * b
                             : w_hi * std::exp2(l * spec.t) * b;
  }
  return acc;
}

namespace {

// per-block time quadrature of ||Delta_l u(t)||_{L^2}, trapezoid or max
std::vector<double> block_time_agg(const std::vector<SpectralField>& snaps,
                                   double dt, TimeAgg rho,
                                   const DyadicFamily& fam) {
  if (snaps.empty()) throw std::invalid_argument("empty snapshot series");
  if (rho == TimeAgg::integral && snaps.size() < 2)
    throw std::invalid_argument("time integral needs >= 2 snapshots");
  int nb = fam.blocks();
  std::vector<double> agg(std::size_t(nb), 0.0);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    bool edge = (k == 0 || k + 1 == snaps.size());
    double w = edge ? 0.5 * dt : dt;
    for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
      double b = fam.block_l2(snaps[k], j);
      auto& a = agg[std::size_t(j - fam.j_min())];
      a = (rho == TimeAgg::integral) ? a + w * b : std::max(a, b);
    }
  }
  return agg;
}

}  // namespace

double tilde_norm(const std::vector<SpectralField>& snapshots, double dt,
                  TimeAgg rho, double s, const DyadicFamily& fam) {
  auto agg = block_time_agg(snapshots, dt, rho, fam);
  double acc = 0;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j)
    acc += std::exp2(j * s) * agg[std::size_t(j - fam.j_min())];
  return acc;
}

double tilde_hybrid_norm(const std::vector<SpectralField>& snapshots,
                         double dt, const HybridNormSpec& spec,
                         const DyadicFamily& fam) {
  if (!(spec.eps > 0))
    throw std::invalid_argument("tilde_hybrid_norm: eps > 0 required");
  auto agg = block_time_agg(snapshots, dt, TimeAgg::integral, fam);
  double acc = 0;
  double w_hi = 1.0 / (spec.eps * spec.eps);
  for (int l = fam.j_min(); l <= fam.j_max(); ++l) {
    double b = agg[std::size_t(l - fam.j_min())];
    acc += (l <= spec.l_eps) ? std::exp2(l * spec.s) * b
                             : w_hi * std::exp2(l * spec.t) * b;
  }
  return acc;
}

double btilde_norm(const SpectralField& u, double s, double alpha, BlockSum r,
                   const DyadicFamily& fam) {
  if (!(alpha > 0)) throw std::invalid_argument("btilde_norm: alpha > 0");
  double acc = 0;
  for (int l = fam.j_min(); l <= fam.j_max(); ++l) {
    double w = std::max(alpha, std::exp2(-l));
    if (r == BlockSum::l1) w = 1.0 / w;
    acc += std::exp2(l * s) * w * fam.block_l2(u, l);
  }
  return acc;
}

SpectralField paraproduct(const SpectralField& u, const SpectralField& v,
                          const DyadicFamily& fam) {
  if (!(u.grid() == v.grid()))
    throw std::invalid_argument("paraproduct: grid mismatch");
  SpectralField out(u.grid());
  for (int q = fam.j_min(); q <= fam.j_max(); ++q)
    out += multiply_dealiased(fam.low_cutoff(u, q - 1), fam.block(v, q));
  return out;
}

SpectralField bony_remainder(const SpectralField& u, const SpectralField& v,
                             const DyadicFamily& fam) {
  if (!(u.grid() == v.grid()))
    throw std::invalid_argument("remainder: grid mismatch");
  SpectralField out(u.grid());
  for (int q = fam.j_min(); q <= fam.j_max(); ++q) {
    SpectralField uq = fam.block(u, q);
    for (int qp = std::max(fam.j_min(), q - 1);
         qp <= std::min(fam.j_max(), q + 1); ++qp)
      out += multiply_dealiased(uq, fam.block(v, qp));
  }
  return out;
}

SpectralField commutator(const std::vector<SpectralField>& v,
                         const SpectralField& g, int l,
                         const DyadicFamily& fam) {
  if (v.empty() || int(v.size()) != g.grid().dim())
    throw std::invalid_argument("commutator: v must have d components");
  SpectralField gl = fam.block(g, l);
  SpectralField out(g.grid());
  SpectralField transported(g.grid());
  for (int a = 0; a < g.grid().dim(); ++a) {
    out += multiply_dealiased(v[std::size_t(a)], gl.derivative(a));
    transported += multiply_dealiased(v[std::size_t(a)], g.derivative(a));
  }
  out -= fam.block(transported, l);
  return out;
}

}  // namespace kwg
