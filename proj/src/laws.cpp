#include "rmt/laws.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rmt/numeric.hpp"

namespace rmt {

namespace {

// Lower incomplete gamma by its power series, for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by modified Lentz continued fraction, for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double quarter_circular_density(double x) {
  if (x < 0.0 || x > 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / M_PI;
}

double quarter_circular_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return (x * std::sqrt(4.0 - x * x) / 2.0 + 2.0 * std::asin(x / 2.0)) / M_PI;
}

double circular_modulus_cdf(double r) {
  return std::clamp(r * r, 0.0, 1.0);
}

double ginibre_mean_density(int n, Complex z) {
  if (n < 1) throw std::invalid_argument("ginibre_mean_density: invalid dimension");
  // e^{-w} sum_{l<n} w^l/l! is the upper regularized gamma Q(n,w).
  const double w = std::norm(z);
  return gamma_q(static_cast<double>(n), w) / (n * M_PI);
}

double kostlan_radius_cdf(int n, double r) {
  if (n < 1) throw std::invalid_argument("kostlan_radius_cdf: invalid dimension");
  if (r < 0.0) throw std::invalid_argument("kostlan_radius_cdf: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double x = n * r * r;
  double logp = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double p = gamma_p(static_cast<double>(k), x);
    if (p <= 0.0) return 0.0;
    logp += std::log(p);
  }
  return std::exp(logp);
}

double gumbel_gamma_n(int n) {
  return std::log(n / (2.0 * M_PI)) - 2.0 * std::log(std::log(static_cast<double>(n)));
}

double gumbel_standardize(int n, double radius) {
  const double g = gumbel_gamma_n(n);
  if (!(g > 0.0))
    throw std::invalid_argument(
        "gumbel_standardize: gamma_n = log(n/2pi) - 2 log log n must be positive; need n >= " +
        std::string("673"));
  return std::sqrt(4.0 * n * g) * (radius - 1.0 - std::sqrt(g / (4.0 * n)));
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

namespace {

// Roots of z^3 + a2 z^2 + a1 z + a0 over C (Cardano).
std::array<Complex, 3> cubic_roots(Complex a2, Complex a1, Complex a0) {
  const Complex p = a1 - a2 * a2 / 3.0;
  const Complex q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const Complex disc = q * q / 4.0 + p * p * p / 27.0;
  Complex u3 = -q / 2.0 + std::sqrt(disc);
  if (std::abs(u3) < 1e-30) u3 = -q / 2.0 - std::sqrt(disc);
  Complex u = std::pow(u3, 1.0 / 3.0);
  std::array<Complex, 3> roots;
  const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
  for (int k = 0; k < 3; ++k) {
    const Complex uk = u * (k == 0 ? Complex(1.0) : (k == 1 ? omega : omega * omega));
    const Complex v = (std::abs(uk) < 1e-30) ? Complex(0.0) : -p / (3.0 * uk);
    roots[static_cast<std::size_t>(k)] = uk + v - a2 / 3.0;
  }
  return roots;
}

// The three candidate alphas at q(z,eta): roots beta of
// beta^3 - eta beta^2 + (1-|z|^2) beta + eta |z|^2, shifted by -eta.
std::array<Complex, 3> alpha_candidates(Complex z, Complex eta) {
  const double r2 = std::norm(z);
  auto roots = cubic_roots(-eta, Complex(1.0 - r2), eta * r2);
  for (auto& b : roots) b -= eta;
  return roots;
}

// h = Im alpha at eta = it solves 1 = (1 + t/h) / (|z|^2 + (h+t)^2),
// decreasing in h; bisection on (0, 1/t].
double solve_h(double r2, double t) {
  auto f = [&](double h) { return (1.0 + t / h) / (r2 + (h + t) * (h + t)) - 1.0; };
  double lo = 1e-300, hi = 1.0 / t;
  if (f(hi) > 0.0) return hi;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Complex nu_z_fixed_point(Complex z, Complex eta) {
  if (!(eta.imag() > 0.0)) throw std::invalid_argument("nu_z_fixed_point: need Im eta > 0");

  if (eta.real() == 0.0) {
    const double h = solve_h(std::norm(z), eta.imag());
    return Complex(0.0, h);
  }

  // Closest candidate to `target` among roots above the floor; counts strict
  // upper-half-plane hits in *hits.
  auto pick_at = [&](Complex e, Complex target, double floor, int* hits) -> Complex {
    const auto cands = alpha_candidates(z, e);
    int in_upper = 0;
    Complex best;
    double best_dist = 1e300;
    for (const Complex& c : cands) {
      if (c.imag() > 0.0) ++in_upper;
      if (c.imag() > floor) {
        const double d = std::abs(c - target);
        if (d < best_dist) {
          best_dist = d;
          best = c;
        }
      }
    }
    if (hits) *hits = in_upper;
    if (best_dist == 1e300)
      throw std::runtime_error("nu_z_fixed_point: no root in C+ (numerical fault)");
    return best;
  };

  int hits = 0;
  const Complex direct = pick_at(eta, Complex(0.0, 1.0), 0.0, &hits);
  if (hits == 1) return direct;

  // Roots nearly collide; follow the branch continuous in Im eta from t = 1.
  double t = std::max(1.0, 2.0 * eta.imag());
  Complex guess = pick_at(Complex(eta.real(), t), Complex(0.0, 1.0), 0.0, nullptr);
  while (t > eta.imag()) {
    t = std::max(eta.imag(), 0.7 * t);
    guess = pick_at(Complex(eta.real(), t), guess, -1e-13, nullptr);
  }
  return guess;
}

Complex nu_z_beta(Complex z, Complex eta) {
  const Complex alpha = nu_z_fixed_point(z, eta);
  const Complex s = alpha + eta;
  return -z / (std::norm(z) - s * s);
}

double nu_z_residual(Complex z, Complex eta, Complex alpha) {
  const Complex s = alpha + eta;
  return std::abs(alpha * (std::norm(z) - s * s) - s);
}

double circular_h_limit(Complex z) {
  return std::sqrt(std::max(0.0, 1.0 - std::norm(z)));
}

double nu_z_density(Complex z, double x, const std::vector<double>& eps_seq) {
  if (eps_seq.size() < 2) throw std::invalid_argument("nu_z_density: need >= 2 eps values");
  std::vector<double> es, hs;
  for (double e : eps_seq) {
    es.push_back(e);
    hs.push_back(nu_z_fixed_point(z, Complex(x, e)).imag());
  }
  auto [intercept, slope] = fit_line(es, hs);
  (void)slope;
  return std::max(0.0, 2.0 / M_PI * intercept);
}

double LawDescriptor::cdf(double x) const {
  switch (kind) {
    case Kind::kQuarterCircular:
      return quarter_circular_cdf(x);
    case Kind::kCircularModulus:
      return circular_modulus_cdf(x);
    case Kind::kUniformInterval:
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    case Kind::kGumbel:
      return gumbel_cdf(x);
    case Kind::kExponentialRate1:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x);
  }
  return 0.0;
}

}  // namespace rmt
