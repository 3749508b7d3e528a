// Dense spectral computations: eigenvalues, singular values, bipartization,
// and the empirical spectral measures built from them.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rmt/ensembles.hpp"

namespace rmt {

// Eigenvalues ordered by decreasing modulus, ties broken by growing phase
// in [0,2pi); zero eigenvalues take phase 0.
struct Spectrum {
  std::vector<Complex> values;
};

// Non-negative singular values, descending.
struct SingularSpectrum {
  std::vector<double> values;
};

struct EmpiricalMeasure2D {
  std::vector<Complex> atoms;  // uniform weight 1/n each
};

struct EmpiricalMeasure1D {
  std::vector<double> atoms;
};

// Phase in [0,2pi) used for the ordering convention; 0 for z == 0.
double eigen_phase(Complex z);

// Backward-stable dense nonsymmetric eigensolver (LAPACK zgeev behind the
// scenes). Throws on non-square or non-finite input; a QR convergence
// failure surfaces as std::runtime_error with the failing index.
Spectrum eigenvalues(const ComplexMatrix& a);

// Eigenvalues of a real matrix via dgeev; complex pairs come out exactly
// conjugate, real eigenvalues exactly real.
Spectrum eigenvalues_real(const Eigen::MatrixXd& a);

// Descending singular values via zgesdd (zgesvd fallback).
SingularSpectrum singular_values(const ComplexMatrix& a);

// Eigenvalues of a Hermitian matrix, ascending (zheevd).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

// The 2n x 2n Hermitian matrix [[0, A], [A*, 0]]; spectrum {+-s_i(A)}.
ComplexMatrix bipartize(const ComplexMatrix& a);

// mu and nu of scale*A.
std::pair<EmpiricalMeasure2D, EmpiricalMeasure1D> empirical_measures(const ComplexMatrix& a,
                                                                     double scale);

// Count of eigenvalues with |Im| <= tol.
int real_eigenvalue_count(const Spectrum& s, double tol);

// Default tolerance 1e-7 * sqrt(n) * ||A||_2 (trace norm).
double default_real_tol(const ComplexMatrix& a);

}  // namespace rmt
