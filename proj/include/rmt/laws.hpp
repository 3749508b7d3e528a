// Closed-form limiting laws and finite-n exact formulas: the circular and
// quarter-circular families, Ginibre mean density, Kostlan radius CDF,
// Gumbel standardization, and the finite-variance nu_z fixed point.

#pragma once

#include <complex>
#include <vector>

namespace rmt {

using Complex = std::complex<double>;

// Regularized lower incomplete gamma P(a,x); Q(a,x) = 1 - P(a,x).
// Series for x < a+1, continued fraction otherwise; ~1e-12 relative.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Density pi^{-1} sqrt(4-x^2) on [0,2].
double quarter_circular_density(double x);
double quarter_circular_cdf(double x);

// CDF of the modulus under the circular law: clamp(r^2, 0, 1).
double circular_modulus_cdf(double r);

// Mean eigenvalue density of the n x n complex Ginibre ensemble:
// phi_{n,1}(z) = (n pi)^{-1} e^{-|z|^2} sum_{l<n} |z|^{2l}/l!.
double ginibre_mean_density(int n, Complex z);

// P(|lambda_1(G)| <= sqrt(n) r) = prod_k P(Gamma(k,1) <= n r^2).
double kostlan_radius_cdf(int n, double r);

double gumbel_gamma_n(int n);  // log(n/2pi) - 2 log log n

// sqrt(4 n gamma_n) (radius - 1 - sqrt(gamma_n / 4n)); compare to the
// Gumbel CDF exp(-exp(-x)). Rejects n with gamma_n <= 0.
double gumbel_standardize(int n, double radius);

double gumbel_cdf(double x);

// Unique alpha(q) in the upper half plane solving
// alpha = (alpha + eta) / (|z|^2 - (alpha + eta)^2), for Im eta > 0.
// Pure imaginary eta uses monotone bisection on h = Im alpha; general eta
// solves the cubic with the root picked by C+ membership, falling back to a
// homotopy in Im eta when roots nearly collide.
Complex nu_z_fixed_point(Complex z, Complex eta);

// beta(q) = -z / (|z|^2 - (alpha+eta)^2) at the solved alpha.
Complex nu_z_beta(Complex z, Complex eta);

// |alpha (|z|^2 - (alpha+eta)^2) - (alpha+eta)|, the defining-equation residual.
double nu_z_residual(Complex z, Complex eta, Complex alpha);

// lim_{t->0} h(z,t) = sqrt(max(0, 1-|z|^2)).
double circular_h_limit(Complex z);

// Density of nu_z at x >= 0 (the unfolded, R_+ version):
// (2/pi) Im alpha(q(z, x+i eps)) extrapolated linearly over eps.
double nu_z_density(Complex z, double x, const std::vector<double>& eps_seq = {1e-2, 5e-3, 2.5e-3});

// Reference distributions the goodness-of-fit machinery can test against.
struct LawDescriptor {
  enum class Kind {
    kQuarterCircular,
    kCircularModulus,   // CDF r^2 on [0,1]
    kUniformInterval,   // on [a,b]
    kGumbel,
    kExponentialRate1,
  };
  Kind kind = Kind::kQuarterCircular;
  double a = 0.0, b = 1.0;  // uniform-interval parameters

  double cdf(double x) const;

  static LawDescriptor quarter_circular() { return {Kind::kQuarterCircular}; }
  static LawDescriptor circular_modulus() { return {Kind::kCircularModulus}; }
  static LawDescriptor uniform(double a, double b) { return {Kind::kUniformInterval, a, b}; }
  static LawDescriptor gumbel() { return {Kind::kGumbel}; }
  static LawDescriptor exponential() { return {Kind::kExponentialRate1}; }
};

}  // namespace rmt
