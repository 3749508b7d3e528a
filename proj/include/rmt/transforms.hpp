// Logarithmic potential, Cauchy-Stieltjes transform, logarithmic energy,
// and the quaternionic transform Gamma_A(q) with density recovery from its
// off-diagonal entry.

#pragma once

#include <limits>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/spectral.hpp"

namespace rmt {

// Evaluation point q(z,eta) = [[eta, z], [conj z, eta]] with Im eta > 0.
struct QPoint {
  Complex z;
  Complex eta;
};

// Value Gamma = [[a, b], [conj b, a]].
struct QTransform {
  Complex a;
  Complex b;
};

// Trace-norm of Gamma - Gamma'.
double qtransform_distance(const QTransform& x, const QTransform& y);

// Atoms closer to z than 1e-14 (1+|z|) collide; potential/transform report
// the collision instead of clipping it.
bool atom_collision(Complex atom, Complex z);

// -(1/n) sum log|lambda_i - z|; +infinity when z sits on an atom.
double log_potential_empirical(const Spectrum& s, Complex z);

// Potential of the uniform law on the disc of radius kappa.
double log_potential_circular(Complex z, double kappa);

// mean of 1/(atom - z); throws on atom collision.
Complex cauchy_stieltjes(const EmpiricalMeasure2D& m, Complex z);
Complex cauchy_stieltjes(const EmpiricalMeasure1D& m, Complex z);

// Gamma_A(q) by direct inversion of the 2n x 2n matrix
// [[-eta, A-z], [(A-z)*, -eta]] with 2x2 diagonal-block averaging.
QTransform quaternionic_transform(const ComplexMatrix& a, const QPoint& q);

// Same value through the singular-value side: a from the resolvent of
// (A-z)(A-z)*, b from the mixed block. This is the fast route for lattices.
QTransform quaternionic_transform_gram(const ComplexMatrix& a, const QPoint& q);

// Uniform z-lattice, row-major over (ix, iy).
struct Lattice {
  double x0 = 0.0, y0 = 0.0;
  double step = 0.0;
  int nx = 0, ny = 0;

  Complex point(int ix, int iy) const { return {x0 + ix * step, y0 + iy * step}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

// b(q(z, it)) over the lattice.
std::vector<Complex> b_field(const ComplexMatrix& a, const Lattice& lat, double t);

// Pointwise linear-in-t extrapolation of b-grids to t = 0.
std::vector<Complex> extrapolate_b(const std::vector<std::vector<Complex>>& grids,
                                   const std::vector<double>& ts);

struct DensityGrid {
  Lattice lat;
  std::vector<double> density;
  double worst_negative = 0.0;  // most negative recovered value
  double max_abs_imag = 0.0;    // discretization residual of the real part
  bool negative_dip_flag = false;  // any value below -0.05
};

// mu density as -(1/pi) d b with d = (d/dx - i d/dy)/2 by central finite
// differences (4th order when >= 5 points per axis). Lattices with fewer
// than 3 points per axis are rejected.
DensityGrid recover_density_from_b(const std::vector<Complex>& b, const Lattice& lat);

// -(1/n^2) sum_{i != j} log|z_i - z_j|; throws on duplicate atoms.
double log_energy(const EmpiricalMeasure2D& m);

}  // namespace rmt
