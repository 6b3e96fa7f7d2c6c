#pragma once

#include <vector>

#include "kwg/field.hpp"

namespace kwg {

/// Dyadic frequency decomposition on the torus lattice. The radial profile
/// chi is a C^2 quintic smoothstep, identically 1 for r <= 3/4 and 0 for
/// r >= 4/3; phi(r) = chi(r/2) - chi(r) is supported in 3/4 <= r <= 8/3.
/// Block j filters |xi| around 2^j (physical wavenumbers); summing phi over
/// the block range telescopes to 1 at every nonzero lattice frequency. The
/// zero mode is excluded throughout (norms are modulo constants).
class DyadicFamily {
public:
  explicit DyadicFamily(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int blocks() const { return j_max_ - j_min_ + 1; }

  static double profile(double r);               // chi
  static double annulus(double r);               // phi

  /// Delta_j u: multiply coefficients by phi(2^-j |xi|)
  SpectralField block(const SpectralField& u, int j) const;
  /// S_j u: multiply by chi(2^-j |xi|); keeps the zero mode
  SpectralField low_cutoff(const SpectralField& u, int j) const;
  /// ||Delta_j u||_{L^2} without materializing the block
  double block_l2(const SpectralField& u, int j) const;

  /// smallest lattice |xi| carrying nonzero weight in block j (0 if empty);
  /// used to calibrate continuum 2^j decay rates to the actual lattice
  double block_min_xi(int j) const { return min_xi_[idx(j)]; }

  const std::vector<double>& block_weights(int j) const {
    return blockw_[idx(j)];
  }

private:
  std::size_t idx(int j) const;
  TorusGrid grid_;
  int j_min_, j_max_;
  std::vector<std::vector<double>> blockw_, loww_;
  std::vector<double> min_xi_;
};

enum class BlockSum { l1, linf };
enum class TimeAgg { integral, sup };

/// sum_j 2^{js} ||Delta_j u||_{L^2} (l1) or sup_j of the same (linf)
double besov_norm(const SpectralField& u, double s, BlockSum r,
                  const DyadicFamily& fam);
/// vector-field variant; block norms taken in l2 over components
double besov_norm(const std::vector<SpectralField>& u, double s, BlockSum r,
                  const DyadicFamily& fam);
double block_l2(const std::vector<SpectralField>& u, int j,
                const DyadicFamily& fam);

/// Two-regime norm: exponent s on blocks l <= l_eps, weight eps^-2 with
/// exponent t above.
struct HybridNormSpec {
  double s;
  double t;
  double eps;
  int l_eps;
};

double hybrid_norm(const SpectralField& u, const HybridNormSpec& spec,
                   const DyadicFamily& fam);

/// Chemin-Lerner norm of a uniformly sampled time series: per-block time
/// quadrature (trapezoid for integral, running max for sup) before the l1
/// block sum.
double tilde_norm(const std::vector<SpectralField>& snapshots, double dt,
                  TimeAgg rho, double s, const DyadicFamily& fam);
/// vector-field time series: snapshots[k] holds the d components at time k dt
double tilde_norm(const std::vector<std::vector<SpectralField>>& snapshots,
                  double dt, TimeAgg rho, double s, const DyadicFamily& fam);

/// Chemin-Lerner time integral with the hybrid two-regime block weights.
double tilde_hybrid_norm(const std::vector<SpectralField>& snapshots,
                         double dt, const HybridNormSpec& spec,
                         const DyadicFamily& fam);

/// Block-weighted norms entering the interpolation inequality
/// ||q||^2_{Bdot^s} <= btilde(q,s,alpha,linf) * btilde(q,s,alpha,l1):
/// weight max(alpha, 2^-l) for linf, its reciprocal for l1.
double btilde_norm(const SpectralField& u, double s, double alpha, BlockSum r,
                   const DyadicFamily& fam);

/// T_u v = sum_q S_{q-1} u . Delta_q v, every product dealiased
SpectralField paraproduct(const SpectralField& u, const SpectralField& v,
                          const DyadicFamily& fam);
/// R(u,v) = sum over |q-q'| <= 1 of Delta_q u . Delta_q' v
SpectralField bony_remainder(const SpectralField& u, const SpectralField& v,
                             const DyadicFamily& fam);

/// transport commutator v.grad(Delta_l g) - Delta_l(v.grad g)
SpectralField commutator(const std::vector<SpectralField>& v,
                         const SpectralField& g, int l,
                         const DyadicFamily& fam);

}  // namespace kwg
