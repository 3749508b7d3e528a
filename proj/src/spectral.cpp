#include "rmt/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmt {

namespace {

lapack_complex_double* lp(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check_square_finite(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

void sort_spectrum(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](const Complex& x, const Complex& y) {
    const double mx = std::abs(x), my = std::abs(y);
    if (mx != my) return mx > my;
    return eigen_phase(x) < eigen_phase(y);
  });
}

}  // namespace

double eigen_phase(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  double ph = std::arg(z);
  if (ph < 0.0) ph += 2.0 * M_PI;
  if (ph >= 2.0 * M_PI) ph = 0.0;
  return ph;
}

Spectrum eigenvalues(const ComplexMatrix& a) {
  check_square_finite(a, "eigenvalues");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  ComplexMatrix work = a;  // zgeev destroys its input
  std::vector<Complex> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(work.data()), n,
                                        lp(w.data()), nullptr, 1, nullptr, 1);
  if (info < 0) throw std::invalid_argument("eigenvalues: bad argument to zgeev");
  if (info > 0)
    throw std::runtime_error("eigenvalues: QR iteration failed to converge past index " +
                             std::to_string(info));
  sort_spectrum(w);
  return Spectrum{std::move(w)};
}

Spectrum eigenvalues_real(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues_real: matrix not square");
  if (!a.allFinite()) throw std::invalid_argument("eigenvalues_real: non-finite entries");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                                        wi.data(), nullptr, 1, nullptr, 1);
  if (info < 0) throw std::invalid_argument("eigenvalues_real: bad argument to dgeev");
  if (info > 0)
    throw std::runtime_error("eigenvalues_real: QR iteration failed to converge past index " +
                             std::to_string(info));
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (lapack_int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = Complex(wr[i], wi[i]);
  sort_spectrum(w);
  return Spectrum{std::move(w)};
}

SingularSpectrum singular_values(const ComplexMatrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("singular_values: non-finite entries");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  std::vector<double> s(static_cast<std::size_t>(k));
  ComplexMatrix work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(work.data()), m, s.data(),
                                   nullptr, 1, nullptr, 1);
  if (info != 0) {
    work = a;  // divide-and-conquer failed, retry with the QR-based driver
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, lp(work.data()), m, s.data(), nullptr,
                          1, nullptr, 1, nullptr);
  }
  if (info != 0) throw std::runtime_error("singular_values: SVD failed to converge");
  return SingularSpectrum{std::move(s)};
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  check_square_finite(h, "hermitian_eigenvalues");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  ComplexMatrix work = h;
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, lp(work.data()), n, w.data());
  if (info != 0) throw std::runtime_error("hermitian_eigenvalues: zheevd failed");
  return w;
}

ComplexMatrix bipartize(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("bipartize: matrix not square");
  const Eigen::Index n = a.rows();
  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  h.topRightCorner(n, n) = a;
  h.bottomLeftCorner(n, n) = a.adjoint();
  return h;
}

std::pair<EmpiricalMeasure2D, EmpiricalMeasure1D> empirical_measures(const ComplexMatrix& a,
                                                                     double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("empirical_measures: scale must be positive");
  const ComplexMatrix b = scale * a;
  EmpiricalMeasure2D mu{eigenvalues(b).values};
  EmpiricalMeasure1D nu{singular_values(b).values};
  return {std::move(mu), std::move(nu)};
}

int real_eigenvalue_count(const Spectrum& s, double tol) {
  if (tol < 0.0) throw std::invalid_argument("real_eigenvalue_count: tol must be >= 0");
  int count = 0;
  for (const Complex& z : s.values)
    if (std::abs(z.imag()) <= tol) ++count;
  return count;
}

double default_real_tol(const ComplexMatrix& a) {
  return 1e-7 * std::sqrt(static_cast<double>(a.rows())) * a.norm();
}

}  // namespace rmt
