#pragma once

#include <vector>

#include "kwg/diagnostics.hpp"
#include "kwg/lpaley.hpp"
#include "kwg/solver.hpp"

namespace kwg {

/// Twin-run comparison plan: the local system (eps = 0) against the
/// non-local one across a decreasing eps list, same data, grid and stepping.
struct SweepPlan {
  std::vector<double> eps;      // strictly decreasing, all > 0
  FluidState initial;
  PhysParams base;              // eps member replaced per run
  double T = 2.0;
  double dt = 2e-3;
  double alpha_target = 0.9;    // difference-norm exponent, in (0,1) for d=2
  int snapshot_count = 41;
  double eta = 0.0;             // > 0: require smallness_report total <= eta
  int threads = 1;

  void validate(int dim) const;
};

/// The six difference norms at exponent alpha (d = grid dimension):
/// sup-in-time norms of (du, dq, dq) at d/2-alpha-1, d/2-alpha-1, d/2-alpha;
/// time-integral norms of du at d/2-alpha+1 and of dq in the two-regime
/// spaces (d/2-alpha+1, d/2-alpha) and (d/2-alpha+2, d/2-alpha).
struct DifferenceNorms {
  double eps = 0;
  double u_sup = 0, q_sup_low = 0, q_sup_high = 0;
  double u_int = 0, q_hyb1 = 0, q_hyb2 = 0;
  double sum() const {
    return u_sup + q_sup_low + q_sup_high + u_int + q_hyb1 + q_hyb2;
  }
};

DifferenceNorms difference_norms(const Trajectory& local,
                                 const Trajectory& nonlocal, double eps,
                                 double alpha, const DyadicFamily& fam);

struct RateReport {
  std::vector<DifferenceNorms> records;
  double slope = 0;       // fitted exponent of sum vs eps
  double intercept = 0;   // empirical prefactor C (sum ~ C eps^slope)
  double residual = 0;    // rms residual of the log-log fit
  double condition = 0;   // condition number of the fit's normal matrix
  SmallnessReport smallness;
};

RateReport run_sweep(const SweepPlan& plan);

}  // namespace kwg
