#include "kwg/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace kwg {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plan cache. Planning is not thread-safe; execution via
// fftw_execute_dft is. Plans are created with FFTW_UNALIGNED so they can be
// executed on any buffer of matching shape.
class FftEngine {
public:
  static FftEngine& instance() {
    static FftEngine e;
    return e;
  }

  // sign: FFTW_FORWARD or FFTW_BACKWARD, c2c, dim in {1,2}, n per axis
  void execute(int dim, int n, int sign, cplx* in, cplx* out) {
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto key = std::make_tuple(dim, n, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<cplx> buf(dim == 1 ? n : std::size_t(n) * n);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        plan = dim == 1 ? fftw_plan_dft_1d(n, p, p, sign, flags)
                        : fftw_plan_dft_2d(n, n, p, p, sign, flags);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

private:
  FftEngine() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

std::size_t flat_count(int dim, int n) {
  return dim == 1 ? std::size_t(n) : std::size_t(n) * n;
}

int freq_of(int idx, int n) { return idx < n / 2 ? idx : idx - n; }
int idx_of(int freq, int n) { return freq >= 0 ? freq : freq + n; }

}  // namespace

TorusGrid::TorusGrid(int dim, int points_per_axis, double period)
    : dim_(dim), n_(points_per_axis), length_(period) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: d must be 1 or 2");
  if (!is_power_of_two(n_) || n_ < 16)
    throw std::invalid_argument("grid: n must be a power of two >= 16");
  if (!(length_ > 0)) throw std::invalid_argument("grid: period must be positive");
  modes_ = flat_count(dim_, n_);
}

double TorusGrid::cell_measure() const {
  double h = dx();
  return dim_ == 1 ? h : h * h;
}

double TorusGrid::volume() const {
  return dim_ == 1 ? length_ : length_ * length_;
}

double TorusGrid::max_wavenumber() const {
  double axis = min_wavenumber() * (n_ / 2);
  return dim_ == 1 ? axis : std::sqrt(2.0) * axis;
}

int TorusGrid::freq(std::size_t flat, int axis) const {
  if (dim_ == 1) return freq_of(int(flat), n_);
  int i = int(flat / n_);
  int j = int(flat % n_);
  return freq_of(axis == 0 ? i : j, n_);
}

double TorusGrid::xi(std::size_t flat, int axis) const {
  return min_wavenumber() * freq(flat, axis);
}

double TorusGrid::xi2(std::size_t flat) const {
  double s = 0;
  for (int a = 0; a < dim_; ++a) {
    double c = xi(flat, a);
    s += c * c;
  }
  return s;
}

double TorusGrid::xi_abs(std::size_t flat) const { return std::sqrt(xi2(flat)); }

bool TorusGrid::is_nyquist(std::size_t flat) const {
  for (int a = 0; a < dim_; ++a)
    if (freq(flat, a) == -n_ / 2) return true;
  return false;
}

SpectralField::SpectralField(const TorusGrid& grid)
    : grid_(grid), coef_(grid.modes(), cplx{0.0, 0.0}) {}

SpectralField SpectralField::from_physical(const TorusGrid& grid,
                                           const std::vector<double>& values) {
  if (values.size() != grid.modes())
    throw std::invalid_argument("from_physical: size mismatch");
  SpectralField f(grid);
  std::vector<cplx> buf(values.begin(), values.end());
  FftEngine::instance().execute(grid.dim(), grid.n(), FFTW_FORWARD, buf.data(),
                                f.coef_.data());
  double scale = 1.0 / double(grid.modes());
  for (auto& c : f.coef_) c *= scale;
  f.zero_nyquist();
  return f;
}

SpectralField SpectralField::from_function(
    const TorusGrid& grid,
    const std::function<double(const std::array<double, 2>&)>& fn) {
  std::vector<double> vals(grid.modes());
  double h = grid.dx();
  if (grid.dim() == 1) {
    for (int i = 0; i < grid.n(); ++i) vals[i] = fn({i * h, 0.0});
  } else {
    for (int i = 0; i < grid.n(); ++i)
      for (int j = 0; j < grid.n(); ++j)
        vals[std::size_t(i) * grid.n() + j] = fn({i * h, j * h});
  }
  return from_physical(grid, vals);
}

std::vector<double> SpectralField::to_physical() const {
  std::vector<cplx> buf(coef_);
  std::vector<cplx> out(coef_.size());
  FftEngine::instance().execute(grid_.dim(), grid_.n(), FFTW_BACKWARD,
                                buf.data(), out.data());
  std::vector<double> vals(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) vals[i] = out[i].real();
  return vals;
}

double SpectralField::l2_norm() const {
  double s = 0;
  for (const auto& c : coef_) s += std::norm(c);
  return std::sqrt(grid_.volume() * s);
}

double SpectralField::linf_norm() const {
  auto vals = to_physical();
  double m = 0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::mean() const { return coef_[0].real(); }

void SpectralField::set_mean_zero() { coef_[0] = 0.0; }

void SpectralField::zero_nyquist() {
  for (std::size_t i = 0; i < coef_.size(); ++i)
    if (grid_.is_nyquist(i)) coef_[i] = 0.0;
}

double SpectralField::hermitian_defect() const {
  double worst = 0;
  int n = grid_.n();
  if (grid_.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      int k = freq_of(i, n);
      if (k == -n / 2) continue;
      int j = idx_of(-k, n);
      worst = std::max(worst, std::abs(coef_[i] - std::conj(coef_[j])));
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int ki = freq_of(i, n), kj = freq_of(j, n);
        if (ki == -n / 2 || kj == -n / 2) continue;
        std::size_t a = std::size_t(i) * n + j;
        std::size_t b = std::size_t(idx_of(-ki, n)) * n + idx_of(-kj, n);
        worst = std::max(worst, std::abs(coef_[a] - std::conj(coef_[b])));
      }
  }
  return worst;
}

SpectralField SpectralField::derivative(int axis) const {
  SpectralField g(grid_);
  for (std::size_t i = 0; i < coef_.size(); ++i)
    g.coef_[i] = cplx{0.0, grid_.xi(i, axis)} * coef_[i];
  return g;
}

std::vector<SpectralField> SpectralField::gradient() const {
  std::vector<SpectralField> g;
  for (int a = 0; a < grid_.dim(); ++a) g.push_back(derivative(a));
  return g;
}

SpectralField SpectralField::multiplied(
    const std::function<double(double)>& sym) const {
  SpectralField g(grid_);
  for (std::size_t i = 0; i < coef_.size(); ++i)
    g.coef_[i] = sym(grid_.xi2(i)) * coef_[i];
  return g;
}

SpectralField SpectralField::filtered(const std::vector<double>& weights) const {
  if (weights.size() != coef_.size())
    throw std::invalid_argument("filtered: weight size mismatch");
  SpectralField g(grid_);
  for (std::size_t i = 0; i < coef_.size(); ++i)
    g.coef_[i] = weights[i] * coef_[i];
  return g;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("field grid mismatch");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("field grid mismatch");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (auto& v : coef_) v *= c;
  return *this;
}

namespace {

// scatter coefficients of an n-grid into an m-grid (m >= n), zero elsewhere
std::vector<cplx> pad_coef(const SpectralField& f, int m) {
  const TorusGrid& g = f.grid();
  int n = g.n();
  std::vector<cplx> out(flat_count(g.dim(), m), cplx{0.0, 0.0});
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) out[idx_of(freq_of(i, n), m)] = f[i];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[std::size_t(idx_of(freq_of(i, n), m)) * m +
            idx_of(freq_of(j, n), m)] = f[std::size_t(i) * n + j];
  }
  return out;
}

SpectralField truncate_coef(const TorusGrid& g, const std::vector<cplx>& big,
                            int m) {
  int n = g.n();
  SpectralField f(g);
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) f[i] = big[idx_of(freq_of(i, n), m)];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        f[std::size_t(i) * n + j] =
            big[std::size_t(idx_of(freq_of(i, n), m)) * m +
                idx_of(freq_of(j, n), m)];
  }
  f.zero_nyquist();
  return f;
}

}  // namespace

SpectralField multiply_dealiased(const SpectralField& a,
                                 const SpectralField& b) {
  return map_dealiased({&a, &b}, [](const std::vector<double>& v) {
    return v[0] * v[1];
  });
}

SpectralField map_dealiased(
    const std::vector<const SpectralField*>& fields,
    const std::function<double(const std::vector<double>&)>& fn) {
  if (fields.empty()) throw std::invalid_argument("map_dealiased: no fields");
  const TorusGrid& g = fields[0]->grid();
  for (const auto* f : fields)
    if (!(f->grid() == g)) throw std::invalid_argument("field grid mismatch");
  int m = 3 * g.n() / 2;
  std::size_t count = flat_count(g.dim(), m);
  auto& eng = FftEngine::instance();

  std::vector<std::vector<double>> phys(fields.size());
  std::vector<cplx> buf(count), out(count);
  for (std::size_t f = 0; f < fields.size(); ++f) {
    buf = pad_coef(*fields[f], m);
    eng.execute(g.dim(), m, FFTW_BACKWARD, buf.data(), out.data());
    phys[f].resize(count);
    for (std::size_t i = 0; i < count; ++i) phys[f][i] = out[i].real();
  }

  std::vector<double> args(fields.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t f = 0; f < fields.size(); ++f) args[f] = phys[f][i];
    buf[i] = fn(args);
  }
  eng.execute(g.dim(), m, FFTW_FORWARD, buf.data(), out.data());
  double scale = 1.0 / double(count);
  for (auto& c : out) c *= scale;
  return truncate_coef(g, out, m);
}

double min_physical(const SpectralField& f) {
  auto vals = f.to_physical();
  double m = vals[0];
  for (double v : vals) m = std::min(m, v);
  return m;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_symmetric() {
  return 2.0 * (double(next() >> 11) * 0x1.0p-53) - 1.0;
}

SpectralField random_band_limited(const TorusGrid& grid, SplitMix64& rng,
                                  double band_fraction) {
  SpectralField f(grid);
  double cutoff = band_fraction * grid.nyquist();
  for (std::size_t i = 0; i < grid.modes(); ++i) {
    if (grid.is_nyquist(i)) continue;
    if (grid.xi_abs(i) > cutoff) continue;
    f[i] = cplx{rng.next_symmetric(), rng.next_symmetric()};
  }
  f.set_mean_zero();
  // Hermitian-symmetrize so the field is real-valued
  int n = grid.n();
  auto sym = [&](std::size_t a, std::size_t b) {
    cplx v = 0.5 * (f[a] + std::conj(f[b]));
    f[a] = v;
    f[b] = std::conj(v);
  };
  if (grid.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      int k = freq_of(i, n);
      if (k <= 0 || k == n / 2) continue;
      sym(std::size_t(i), std::size_t(idx_of(-k, n)));
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int ki = freq_of(i, n), kj = freq_of(j, n);
        if (ki == -n / 2 || kj == -n / 2) continue;
        if (ki < 0 || (ki == 0 && kj <= 0)) continue;
        sym(std::size_t(i) * n + j,
            std::size_t(idx_of(-ki, n)) * n + idx_of(-kj, n));
      }
  }
  return f;
}

}  // namespace kwg
