#include <doctest.h>

#include <cmath>
#include <functional>

#include "rmt/ensembles.hpp"
#include "rmt/laws.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"

using namespace rmt;

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

TEST_CASE("incomplete gamma: reference values") {
  // P(1,x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 3.0})
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  // P(2,x) = 1 - e^{-x}(1+x)
  CHECK(gamma_p(2.0, 2.5) == doctest::Approx(1.0 - std::exp(-2.5) * 3.5).epsilon(1e-12));
  // complementarity across the series/continued-fraction boundary
  for (double a : {0.5, 3.0, 20.0, 150.0})
    for (double x : {0.2, 2.0, 25.0, 180.0})
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quarter circular density and normalization") {
  CHECK(quarter_circular_density(0.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
  CHECK(quarter_circular_density(2.0) == 0.0);
  CHECK(quarter_circular_density(-0.5) == 0.0);
  const double mass = integrate([](double x) { return quarter_circular_density(x); }, 0.0, 2.0,
                                1e-9);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
  CHECK(quarter_circular_cdf(2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circular modulus cdf") {
  CHECK(circular_modulus_cdf(0.0) == 0.0);
  CHECK(circular_modulus_cdf(1.0) == 1.0);
  CHECK(circular_modulus_cdf(1.0 / std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(circular_modulus_cdf(2.0) == 1.0);
}

TEST_CASE("log integral matches between quarter-circular and circular modulus") {
  // int log dQ2 against int_0^1 log(r) 2r dr = -1/2, by quadrature; the
  // singularity head [0, delta] is handled with the series of the density.
  const double delta = 1e-3;
  auto f = [](double x) { return std::log(x) * quarter_circular_density(x); };
  const double head =
      (2.0 / M_PI) * (delta * std::log(delta) - delta);  // sqrt(4-x^2) ~ 2 near 0
  const double body = integrate(f, delta, 2.0, 1e-10);
  const double direct = integrate([](double r) { return 2.0 * r * std::log(r); }, 1e-6, 1.0,
                                  1e-10);
  CHECK(std::abs((head + body) - direct) <= 1e-5);
  CHECK(std::abs(direct - (-0.5)) <= 1e-6);
}

TEST_CASE("ginibre mean density: n=1 and bulk/outside limits at n=200") {
  for (double r : {0.0, 0.7, 1.3})
    CHECK(ginibre_mean_density(1, Complex(r, 0.1)) ==
          doctest::Approx(std::exp(-(r * r + 0.01)) / M_PI).epsilon(1e-12));
  const int n = 200;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double inside = n * ginibre_mean_density(n, Complex(root_n * 0.5, 0.0));
  const double outside = n * ginibre_mean_density(n, Complex(root_n * 1.5, 0.0));
  CHECK(std::abs(inside - 1.0 / M_PI) <= 0.01);
  CHECK(std::abs(outside) <= 0.01);
}

TEST_CASE("kostlan radius cdf: exact small cases and sampler cross-check") {
  CHECK(kostlan_radius_cdf(1, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(kostlan_radius_cdf(5, 0.0) == 0.0);
  CHECK(kostlan_radius_cdf(50, 1e9) == doctest::Approx(1.0));

  const int n = 100, reps = 2000;
  const double root_n = std::sqrt(static_cast<double>(n));
  for (double r : {0.9, 1.0, 1.1}) {
    long count = 0;
    for (int k = 0; k < reps; ++k)
      if (sample_kostlan_max(n, Seed{1000, static_cast<std::uint64_t>(k)}) <= root_n * r)
        ++count;
    const double p = kostlan_radius_cdf(n, r);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-8) / reps);
    CHECK(std::abs(count / static_cast<double>(reps) - p) <= 3.0 * sigma);
  }
}

TEST_CASE("gumbel standardization") {
  const double g1000 = gumbel_gamma_n(1000);
  CHECK(g1000 == doctest::Approx(1.20474).epsilon(1e-4));
  const double centered = 1.0 + std::sqrt(g1000 / 4000.0);
  CHECK(gumbel_standardize(1000, centered) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(gumbel_standardize(10, 1.0), std::invalid_argument);
  CHECK(gumbel_cdf(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("nu_z fixed point: imaginary axis bisection and residuals") {
  // z=0, t -> 0: h -> 1
  CHECK(nu_z_fixed_point(Complex(0, 0), Complex(0, 1e-8)).imag() ==
        doctest::Approx(1.0).epsilon(1e-6));
  // defining-equation residual at |z| = 3, t = 1
  const Complex alpha = nu_z_fixed_point(Complex(3, 0), Complex(0, 1));
  CHECK(nu_z_residual(Complex(3, 0), Complex(0, 1), alpha) <= 1e-10);
  CHECK_THROWS_AS(nu_z_fixed_point(Complex(0, 0), Complex(0, -1)), std::invalid_argument);
}

TEST_CASE("nu_z fixed point: general eta picks the unique C+ root") {
  const std::vector<Complex> zs = {{0.0, 0.0}, {0.4, 0.2}, {1.1, -0.3}, {2.5, 1.0}};
  const std::vector<Complex> etas = {{0.3, 0.8}, {-1.2, 0.05}, {2.0, 1.5}, {0.7, 0.01}};
  for (const auto& z : zs) {
    for (const auto& eta : etas) {
      const Complex alpha = nu_z_fixed_point(z, eta);
      CHECK(alpha.imag() > 0.0);
      CHECK(nu_z_residual(z, eta, alpha) <= 1e-8 * (1.0 + std::abs(alpha)));
    }
  }
}

TEST_CASE("nu_z solver agrees with the closed-form circular h limit") {
  for (double r : {0.0, 0.5, 0.9}) {
    const Complex alpha = nu_z_fixed_point(Complex(r, 0.0), Complex(0.0, 1e-4));
    CHECK(std::abs(alpha.imag() - circular_h_limit(Complex(r, 0.0))) <= 1e-3);
  }
  CHECK(circular_h_limit(Complex(0.6, 0.0)) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(circular_h_limit(Complex(1.7, 0.0)) == 0.0);
}

TEST_CASE("beta limit: -z inside the disc, anti-holomorphic outside") {
  for (double r : {0.0, 0.5, 0.9}) {
    const Complex beta = nu_z_beta(Complex(r, 0.0), Complex(0.0, 1e-4));
    CHECK(std::abs(beta - Complex(-r, 0.0)) <= 1e-3);
  }
  // Outside the disc h -> 0 and the fixed point gives beta -> -z/|z|^2,
  // i.e. -1/conj(z): a function of conj(z) alone, so its d-derivative (and
  // with it the recovered density) vanishes there.
  const Complex z(1.5, 0.0);
  const Complex outside = nu_z_beta(z, Complex(0.0, 1e-4));
  CHECK(std::abs(outside - (-z / std::norm(z))) <= 1e-3);
}

TEST_CASE("nu_0 density reconstruction matches the quarter circular law") {
  // coarse grid here; the acceptance suite runs the full [0.1, 1.9] sweep
  for (double x : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    const double d = nu_z_density(Complex(0, 0), x);
    CHECK(std::abs(d - quarter_circular_density(x)) <= 1e-3);
  }
}

TEST_CASE("law descriptor cdfs") {
  CHECK(LawDescriptor::uniform(-1.0, 1.0).cdf(0.0) == doctest::Approx(0.5));
  CHECK(LawDescriptor::exponential().cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(LawDescriptor::gumbel().cdf(0.0) == doctest::Approx(std::exp(-1.0)));
}
