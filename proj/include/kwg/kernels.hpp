#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kwg {

/// Radial Fourier symbol of an interaction potential: g maps x = |xi|^2 >= 0
/// to [0,1], with g(0) = 1. The scaled potential acts on a mode xi as
/// g(eps^2 |xi|^2). Admissible symbols additionally have h(x) = (1-g(x))/x
/// decreasing from 1 to 0 and k(x) = 1-g(x) increasing from 0 to 1.
class KernelSymbol {
public:
  enum class Family { gaussian, custom };

  static KernelSymbol gaussian();
  /// custom symbol from a strictly-increasing (x, g(x)) table, >= 16 rows,
  /// evaluated by monotone cubic interpolation; constant beyond the table
  static KernelSymbol from_table(std::vector<double> x, std::vector<double> g);
  /// two-column text file (x, g), '#' comments allowed
  static KernelSymbol from_file(const std::string& path);

  double operator()(double x) const;  // g(x), x = |xi|^2
  Family family() const { return family_; }

private:
  KernelSymbol() = default;
  Family family_ = Family::gaussian;
  std::vector<double> xs_, gs_, slopes_;  // empty for gaussian
};

/// Capillarity multiplier of the momentum equation:
/// (kappa/eps^2)(1 - g(eps^2 xi2)) for eps > 0, kappa*xi2 at eps = 0
/// (the local Korteweg limit).
double capillarity_symbol(double xi2, double kappa, double eps,
                          const KernelSymbol& symbol = KernelSymbol::gaussian());

/// Largest gamma with (1 - e^-gamma)/gamma >= 1/2, by bisection to 1e-12.
double threshold_gamma();

/// Frequency-threshold data: the greatest integer l with
/// eps * 2^l * C0 <= sqrt(gamma) (and eps * 2^(l+1) * C0 > sqrt(gamma)).
struct ThresholdSpec {
  double gamma;
  double C0;
  double eps;
  int l_eps;
};

int frequency_threshold(double eps, double gamma, double C0);
ThresholdSpec make_threshold(double eps, double C0 = 8.0 / 3.0);

/// sup over x > 0 of (e^-x - 1 + x)/x^beta, for 1 < beta < 2,
/// located by golden-section maximization.
double consistency_constant(double beta);
/// the maximizer argument (exposed for reports)
double consistency_maximizer(double beta);

struct AdmissibilityReport {
  bool passed = true;
  std::vector<std::string> violations;  // clause + witnessing sample
};

/// Checks g(0)=1, range in [0,1], monotone h and k with their limits, and
/// finiteness of the C_beta bound for beta in {1.25, 1.5, 1.75} on a
/// log-spaced sample grid.
AdmissibilityReport check_admissibility(
    const std::function<double(double)>& g);
AdmissibilityReport check_admissibility(const KernelSymbol& symbol);

}  // namespace kwg
