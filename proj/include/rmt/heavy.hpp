// Heavy-tailed limit machinery: recursive distribution equation solvers on
// the PWIT driven by one-sided stable sample banks, the limiting densities
// g_alpha and nu_{alpha,z}, the tree-resolvent recursion, and a Hill
// estimator for tail diagnostics.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/transforms.hpp"

namespace rmt {

// Two independent arrays of draws of the positive alpha/2-stable S with
// E exp(-xS) = exp(-Gamma(1-alpha/2) x^{alpha/2}). Fixed-point solves reuse
// the same bank across iterates so the Monte Carlo moment maps stay exactly
// monotone (common random numbers).
struct StableSampleBank {
  double alpha = 1.0;
  Seed seed;
  std::vector<double> s;
  std::vector<double> s2;

  std::size_t size() const { return s.size(); }
};

StableSampleBank make_stable_bank(double alpha, std::size_t count, Seed seed);

// Bank of the unit-scale one-sided stable, E exp(-xT) = exp(-x^{alpha/2}).
// Under this normalization T tends to a Dirac mass at 1 as alpha -> 2, so
// the RDE laws converge to the circular/quarter-circular limits instead of
// spreading with the Gamma(1-alpha/2) factor.
StableSampleBank make_stable_bank_unit(double alpha, std::size_t count, Seed seed);

struct RdeSolution {
  double y = 0.0;        // E[h^{alpha/2}]^{2/alpha}
  double residual = 0.0;  // |bank moment - 1| at the solution
};

// Unique y > 0 solving
//   1 = E[ ((t/y + S) / (|z|^2 + (t+yS)(t+yS')))^{alpha/2} ]
// over the bank; bisection to relative 1e-10. t = 0 uses the limit form
// (requires |z| > 0). Banks under 10^3 samples are rejected.
RdeSolution rde_y(Complex z, double t, const StableSampleBank& bank);

struct RdeMoments {
  double e_h = 0.0;   // E[h] = Im a(q(z,it))
  Complex e_b{0.0, 0.0};
  RdeSolution y;
};

// Bank averages of h = (t+yS)/(|z|^2+(t+yS)(t+yS')) and
// b = -z/(|z|^2+(t+yS)(t+yS')) at the solved y.
RdeMoments rde_h_moments(Complex z, double t, const StableSampleBank& bank);

// Density g_alpha of mu_alpha at radius r:
//   (1/pi) (y*^2 - 2 r^2 y* y*') E[ SS' / (r^2 + y*^2 SS')^2 ]
// with y*(r^2) from the t=0 equation and y*' by central finite differences
// in r^2 (step fd_step, default 1e-3 (1+r^2)). Values below -1e-4 signal a
// bad bank or step and raise; small negative noise clips to zero.
double heavy_density_g(double r, const StableSampleBank& bank, double fd_step = 0.0);

// Density of nu_{alpha,z} at x >= 0, via the complex fixed point
//   w = E[ a(w)^{alpha/2} ]^{2/alpha},
//   a(w) = (eta + wS) / (|z|^2 - (eta+wS)(eta+wS')),  eta = x + i eps,
// then (2/pi) Im E[a] extrapolated linearly over the eps sequence. The
// factor 2 unfolds the symmetrization onto R_+.
double nu_alpha_z_density(Complex z, double x, const StableSampleBank& bank,
                          const std::vector<double>& eps_seq = {1e-2, 5e-3, 2.5e-3});

// Ascending-x sweep that reuses each fixed point as the warm start for the
// next point; equivalent to calling nu_alpha_z_density pointwise.
std::vector<double> nu_alpha_z_density_scan(Complex z, const std::vector<double>& xs,
                                            const StableSampleBank& bank,
                                            const std::vector<double>& eps_seq = {1e-2, 5e-3,
                                                                                  2.5e-3});

// Bottom-up 2x2 resolvent recursion on a truncated PWIT; vertices beyond the
// truncation contribute R = -q^{-1}. Throws if Im a ever leaves the upper
// half plane during the recursion.
QTransform pwit_resolvent_root(const PwitTree& tree, const QPoint& q, double alpha);

// Same recursion on a lazily generated tree (no materialization); marks are
// drawn exactly as sample_pwit with the deterministic-one phase, so the same
// seed reproduces pwit_resolvent_root(sample_pwit(...)).
QTransform pwit_resolvent_stream(int depth, int branching, double alpha, const QPoint& q,
                                 Seed seed);

struct PwitMcResult {
  QTransform mean;
  double se_a_imag = 0.0;  // standard error of Im a over trees
  std::size_t trees = 0;
};

// Monte Carlo mean of the root transform over independent trees.
PwitMcResult pwit_resolvent_mc(int depth, int branching, double alpha, const QPoint& q,
                               std::size_t trees, Seed seed);

// Hill estimator over the top `fraction` order statistics. Needs >= 100
// samples and fraction in (0, 0.2].
double tail_index_estimate(std::vector<double> samples, double fraction);

}  // namespace rmt
