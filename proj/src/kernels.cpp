#include "kwg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kwg {

namespace {

// relative difference of 1-e^{-x} vs x matters near 0; expm1 keeps it exact
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// Fritsch-Carlson monotone cubic Hermite slopes
std::vector<double> monotone_slopes(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  std::size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    m[i] = (d[i - 1] * d[i] <= 0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    double a = m[i] / d[i], b = m[i + 1] / d[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double t = 3.0 / std::sqrt(s);
      m[i] = t * a * d[i];
      m[i + 1] = t * b * d[i];
    }
  }
  return m;
}

}  // namespace

KernelSymbol KernelSymbol::gaussian() {
  KernelSymbol s;
  s.family_ = Family::gaussian;
  return s;
}

KernelSymbol KernelSymbol::from_table(std::vector<double> x,
                                      std::vector<double> g) {
  if (x.size() != g.size() || x.size() < 16)
    throw std::invalid_argument("kernel table: need >= 16 matching rows");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("kernel table: x must be strictly increasing");
  KernelSymbol s;
  s.family_ = Family::custom;
  s.slopes_ = monotone_slopes(x, g);
  s.xs_ = std::move(x);
  s.gs_ = std::move(g);
  auto report = check_admissibility(s);
  if (!report.passed)
    throw std::invalid_argument("kernel table not admissible: " +
                                report.violations.front());
  return s;
}

KernelSymbol KernelSymbol::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open kernel table: " + path);
  std::vector<double> x, g;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double a, b;
    if (ss >> a >> b) {
      x.push_back(a);
      g.push_back(b);
    }
  }
  return from_table(std::move(x), std::move(g));
}

double KernelSymbol::operator()(double x) const {
  if (x < 0) throw std::domain_error("kernel symbol: x >= 0 required");
  if (family_ == Family::gaussian) return std::exp(-x);
  if (x <= xs_.front()) return gs_.front();
  if (x >= xs_.back()) return gs_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = std::size_t(it - xs_.begin()) - 1;
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * gs_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * gs_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double capillarity_symbol(double xi2, double kappa, double eps,
                          const KernelSymbol& symbol) {
  if (xi2 < 0) throw std::domain_error("capillarity_symbol: xi2 >= 0");
  if (eps < 0) throw std::domain_error("capillarity_symbol: eps >= 0");
  if (eps == 0.0) return kappa * xi2;
  double x = eps * eps * xi2;
  if (symbol.family() == KernelSymbol::Family::gaussian)
    return kappa / (eps * eps) * one_minus_exp_neg(x);
  return kappa / (eps * eps) * (1.0 - symbol(x));
}

double threshold_gamma() {
  auto f = [](double z) { return one_minus_exp_neg(z) / z; };
  double lo = 1.0, hi = 2.0;  // f(1) > 1/2 > f(2)
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int frequency_threshold(double eps, double gamma, double C0) {
  if (!(eps > 0) || !(gamma > 0) || !(C0 > 0))
    throw std::domain_error("frequency_threshold: positive arguments required");
  double target = std::sqrt(gamma) / (eps * C0);
  int l = int(std::floor(std::log2(target)));
  // repair round-off at the boundary: exact two-sided characterization
  while (eps * std::ldexp(C0, l) > std::sqrt(gamma)) --l;
  while (eps * std::ldexp(C0, l + 1) <= std::sqrt(gamma)) ++l;
  return l;
}

ThresholdSpec make_threshold(double eps, double C0) {
  double gamma = threshold_gamma();
  return ThresholdSpec{gamma, C0, eps, frequency_threshold(eps, gamma, C0)};
}

namespace {

double consistency_ratio(double x, double beta) {
  if (x <= 0) return 0.0;
  // e^-x - 1 + x, computed stably
  double num = x - one_minus_exp_neg(x);
  return num / std::pow(x, beta);
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12 * (1.0 + b)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double bracket_and_maximize(double beta) {
  auto f = [beta](double x) { return consistency_ratio(x, beta); };
  // coarse log scan for a bracket around the interior critical point
  double best_x = 1.0, best = f(1.0);
  for (double lx = -20; lx <= 20; lx += 0.25) {
    double x = std::exp2(lx);
    double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return golden_max(f, best_x / 4.0, best_x * 4.0);
}

}  // namespace

double consistency_maximizer(double beta) {
  if (!(beta > 1.0 && beta < 2.0))
    throw std::domain_error("consistency_constant: beta in (1,2) required");
  return bracket_and_maximize(beta);
}

double consistency_constant(double beta) {
  double xstar = consistency_maximizer(beta);
  // near beta = 2 the sup is approached as x -> 0 with limit 1/2
  double at_zero = consistency_ratio(1e-9, beta);
  return std::max(consistency_ratio(xstar, beta), at_zero);
}

AdmissibilityReport check_admissibility(
    const std::function<double(double)>& g) {
  AdmissibilityReport rep;
  auto fail = [&](const std::string& msg) {
    rep.passed = false;
    rep.violations.push_back(msg);
  };

  if (std::abs(g(0.0) - 1.0) > 1e-9) fail("g(0) != 1");

  std::vector<double> xs;
  for (double lx = -12; lx <= 12; lx += 0.05) xs.push_back(std::exp2(lx));

  double prev_h = 1.0, prev_k = 0.0;
  bool range_ok = true, h_mono = true, k_mono = true;
  double witness_h = 0, witness_k = 0, witness_r = 0;
  for (double x : xs) {
    double gx = g(x);
    if (gx < -1e-12 || gx > 1.0 + 1e-12) {
      range_ok = false;
      witness_r = x;
    }
    double h = (1.0 - gx) / x;
    double k = 1.0 - gx;
    if (h > prev_h + 1e-10) {
      h_mono = false;
      witness_h = x;
    }
    if (k < prev_k - 1e-10) {
      k_mono = false;
      witness_k = x;
    }
    prev_h = h;
    prev_k = k;
  }
  // h must be strictly decreasing, not merely nonincreasing: compare
  // decade-spaced samples (a flat plateau is a violation)
  for (double x : xs) {
    double x10 = 10.0 * x;
    if (x10 > xs.back()) break;
    double ha = (1.0 - g(x)) / x, hb = (1.0 - g(x10)) / x10;
    if (!(hb < ha - 1e-12 * ha)) {
      h_mono = false;
      witness_h = x;
      break;
    }
  }

  if (!range_ok) fail("g out of [0,1] at x=" + std::to_string(witness_r));
  if (!h_mono) fail("h=(1-g)/x not decreasing near x=" + std::to_string(witness_h));
  if (!k_mono) fail("k=1-g not increasing near x=" + std::to_string(witness_k));

  double h0 = (1.0 - g(1e-8)) / 1e-8;
  if (std::abs(h0 - 1.0) > 1e-3) fail("h does not tend to 1 at 0");
  double h_inf = (1.0 - g(xs.back())) / xs.back();
  if (h_inf > 1e-3) fail("h does not tend to 0 at infinity");
  double k_inf = 1.0 - g(xs.back());
  if (std::abs(k_inf - 1.0) > 1e-3) fail("k does not tend to 1 at infinity");

  for (double beta : {1.25, 1.5, 1.75}) {
    double cb = 0.0;
    for (double x : xs) {
      double r = (g(x) - 1.0 + x) / std::pow(x, beta);
      if (r < -1e-10) {
        fail("g(x)-1+x negative at x=" + std::to_string(x));
        break;
      }
      cb = std::max(cb, r);
    }
    if (!std::isfinite(cb) || cb > 1e6)
      fail("C_beta unbounded for beta=" + std::to_string(beta));
  }
  return rep;
}

AdmissibilityReport check_admissibility(const KernelSymbol& symbol) {
  return check_admissibility([&symbol](double x) { return symbol(x); });
}

}  // namespace kwg
