#pragma once

#include <utility>
#include <vector>

#include "kwg/lpaley.hpp"
#include "kwg/solver.hpp"

namespace kwg {

/// Components of the per-block symmetrized energy
/// h_l^2 = ||u_l||^2 + p||q_l||^2 + alpha(nu||grad q_l||^2 + 2(u_l|grad q_l))
///       + (k/eps^2)(q_l | q_l - phi_eps * q_l), with alpha = nubar/4.
struct BlockEnergy {
  double u2 = 0;         // ||u_l||^2
  double pq2 = 0;        // p ||q_l||^2
  double grad2 = 0;      // alpha nu ||grad q_l||^2
  double cross = 0;      // 2 alpha (u_l | grad q_l), sign free
  double nonlocal = 0;   // (k/eps^2)(q_l | q_l - phi_eps * q_l) >= 0
  double gradq_l2 = 0;   // ||grad q_l||^2 itself, for the equivalence bounds

  double h2() const { return u2 + pq2 + grad2 + cross + nonlocal; }
  double h() const;
};

BlockEnergy energy_block(const FluidState& state, int l,
                         const PhysParams& params, const DyadicFamily& fam);

/// The algebraic sandwich around h_l^2 obtained by Young's inequality on the
/// cross term; a violation means a coding bug, so check hard.
struct EquivalenceReport {
  bool ok = true;
  double lower = 0, upper = 0, h2 = 0;
};

EquivalenceReport check_equivalence(const BlockEnergy& e,
                                    const PhysParams& params);

/// Defect between the non-local capillarity and its local limit, assembled
/// spectrally as -(kappa/eps^2) i xi (e^{-eps^2|xi|^2} - 1 + eps^2|xi|^2)
/// applied to q. The report compares the Besov norm of the defect with
/// kappa C_beta eps^{2(beta-1)} ||q||_{Bdot^{s+1+2beta}}.
struct ConsistencyReport {
  double beta = 0, eps = 0, s = 0;
  double lhs = 0;    // sum over components of besov_norm(R, s, l1)
  double rhs = 0;    // the multiplier bound
  bool holds() const { return lhs <= rhs; }
};

std::pair<std::vector<SpectralField>, ConsistencyReport> consistency_remainder(
    const SpectralField& q, const PhysParams& params, double beta, double s,
    const DyadicFamily& fam);

/// Per-block energy history of a trajectory with fitted decay rates and the
/// theoretical envelopes. Envelope rates are lattice-calibrated: below the
/// threshold the continuum 2^{2l} is replaced by the block's minimum lattice
/// |xi| squared; above it the rate m'/eps^2 is used as displayed.
struct EnergyLedger {
  std::vector<int> block_index;
  std::vector<double> times;
  std::vector<std::vector<BlockEnergy>> entries;  // [time][block]
  std::vector<double> fitted_rate;    // least squares on log h_l, first half
  std::vector<double> envelope_rate;
  double alpha = 0, m = 0, m_prime = 0;
  int l_eps = 0;

  double envelope(int block_pos, double t) const;  // h_l(0) exp(-rate t)
};

EnergyLedger build_ledger(const Trajectory& traj, const PhysParams& params,
                          const DyadicFamily& fam);

/// decay coefficients of the per-block differential inequalities
double decay_m(const PhysParams& params);
double decay_m_prime(const PhysParams& params);

/// Measures the smallest constant C with
///   (six solution norms at exponent s) <= C exp(C V) (data + forcing norms)
/// over a frozen-convection linear trajectory; V integrates
/// ||grad v||_{B^{d/2}} + ||v||^2_{B^{d/2}}. Vector-field norms are summed
/// over components.
struct AprioriReport {
  double lhs = 0;       // the six-norm sum
  double data = 0;      // initial + forcing norms
  double v_integral = 0;
  double best_c = 0;    // smallest C with C e^{CV} data >= lhs
};

AprioriReport apriori_monitor(const Trajectory& traj,
                              const std::vector<SpectralField>& v,
                              const SpectralField& F,
                              const std::vector<SpectralField>& G,
                              const PhysParams& params, double s,
                              const DyadicFamily& fam);

}  // namespace kwg
