#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace kwg {

using cplx = std::complex<double>;

/// Periodic computational domain: d in {1,2}, n points per axis (power of
/// two, >= 16), period length L. Lattice wavevectors are 2*pi*k/L with
/// integer k per axis in [-n/2, n/2); the Nyquist row k = -n/2 is zeroed
/// whenever a real-valued field is constructed.
class TorusGrid {
public:
  TorusGrid(int dim, int points_per_axis, double period);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double period() const { return length_; }
  std::size_t modes() const { return modes_; }
  double dx() const { return length_ / n_; }
  double cell_measure() const;   // (L/n)^d
  double volume() const;         // L^d
  double min_wavenumber() const { return 2.0 * std::numbers::pi / length_; }
  double nyquist() const { return std::numbers::pi * n_ / length_; }
  /// largest |xi| on the lattice (corner mode)
  double max_wavenumber() const;

  /// integer frequency along axis for a flat row-major index
  int freq(std::size_t flat, int axis) const;
  /// wavevector component 2*pi*k/L
  double xi(std::size_t flat, int axis) const;
  double xi2(std::size_t flat) const;
  double xi_abs(std::size_t flat) const;
  bool is_nyquist(std::size_t flat) const;

  bool operator==(const TorusGrid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

private:
  int dim_;
  int n_;
  double length_;
  std::size_t modes_;
};

/// Complex Fourier-coefficient field on a TorusGrid. Coefficients follow the
/// series convention u(x) = sum_k c_k exp(i xi_k . x), so Parseval reads
/// ||u||_{L^2}^2 = L^d sum_k |c_k|^2.
class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(const TorusGrid& grid);

  static SpectralField from_physical(const TorusGrid& grid,
                                     const std::vector<double>& values);
  /// sample fn at grid nodes (arguments: x, then y when d = 2)
  static SpectralField from_function(
      const TorusGrid& grid,
      const std::function<double(const std::array<double, 2>&)>& fn);

  const TorusGrid& grid() const { return grid_; }
  std::vector<cplx>& coef() { return coef_; }
  const std::vector<cplx>& coef() const { return coef_; }
  cplx& operator[](std::size_t i) { return coef_[i]; }
  const cplx& operator[](std::size_t i) const { return coef_[i]; }

  std::vector<double> to_physical() const;

  double l2_norm() const;
  double linf_norm() const;
  double mean() const;          // zero-mode value
  void set_mean_zero();
  void zero_nyquist();
  /// max Hermitian-symmetry defect, 0 for exactly real fields
  double hermitian_defect() const;

  SpectralField derivative(int axis) const;        // multiply by i*xi_a
  std::vector<SpectralField> gradient() const;
  /// coefficient-wise multiply by m(|xi|^2)
  SpectralField multiplied(const std::function<double(double)>& sym) const;
  /// coefficient-wise multiply by a precomputed per-mode weight
  SpectralField filtered(const std::vector<double>& weights) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double c);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    a += b;
    return a;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    a -= b;
    return a;
  }
  friend SpectralField operator*(double c, SpectralField a) {
    a *= c;
    return a;
  }

private:
  TorusGrid grid_{1, 16, 1.0};
  std::vector<cplx> coef_;
};

/// Pointwise product with 2/3-rule zero padding: both factors are evaluated
/// on the 3n/2 grid, multiplied there, and the result truncated back to the
/// original modes. Exact (to round-off) for band-limited inputs.
SpectralField multiply_dealiased(const SpectralField& a,
                                 const SpectralField& b);

/// Evaluate fn pointwise on the padded physical representation of the given
/// fields and return the truncated spectral result. Used for compositions
/// like K(q) grad(q).
SpectralField map_dealiased(
    const std::vector<const SpectralField*>& fields,
    const std::function<double(const std::vector<double>&)>& fn);

/// Physical-space min over the padded grid of 1 + q (vacuum check helper).
double min_physical(const SpectralField& f);

/// Counter-based generator used for reproducible test corpora
/// (algorithm identifier: "splitmix64").
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// uniform in [-1, 1)
  double next_symmetric();

private:
  std::uint64_t state_;
};

/// Random real band-limited field: coefficients drawn on modes with
/// |xi| <= frac * max lattice |xi|, Hermitian-symmetrized, zero mean.
SpectralField random_band_limited(const TorusGrid& grid, SplitMix64& rng,
                                  double band_fraction = 0.5);

}  // namespace kwg
