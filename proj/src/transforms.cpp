#include "rmt/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "rmt/numeric.hpp"

namespace rmt {

namespace {

void check_qpoint(const QPoint& q) {
  if (!(q.eta.imag() > 0.0))
    throw std::invalid_argument("quaternionic transform: need Im eta > 0");
}

}  // namespace

double qtransform_distance(const QTransform& x, const QTransform& y) {
  return std::sqrt(2.0 * std::norm(x.a - y.a) + 2.0 * std::norm(x.b - y.b));
}

bool atom_collision(Complex atom, Complex z) {
  return std::abs(atom - z) < 1e-14 * (1.0 + std::abs(z));
}

double log_potential_empirical(const Spectrum& s, Complex z) {
  if (s.values.empty()) throw std::invalid_argument("log_potential_empirical: empty spectrum");
  std::vector<double> logs;
  logs.reserve(s.values.size());
  for (const Complex& lam : s.values) {
    if (atom_collision(lam, z)) return std::numeric_limits<double>::infinity();
    logs.push_back(std::log(std::abs(lam - z)));
  }
  return -pairwise_mean(logs);
}

double log_potential_circular(Complex z, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("log_potential_circular: kappa must be > 0");
  const double r = std::abs(z);
  if (r > kappa) return -std::log(r);
  return 0.5 * (1.0 - (r * r) / (kappa * kappa)) - std::log(kappa);
}

Complex cauchy_stieltjes(const EmpiricalMeasure2D& m, Complex z) {
  if (m.atoms.empty()) throw std::invalid_argument("cauchy_stieltjes: empty measure");
  std::vector<Complex> terms;
  terms.reserve(m.atoms.size());
  for (const Complex& lam : m.atoms) {
    if (atom_collision(lam, z)) throw std::invalid_argument("cauchy_stieltjes: z is an atom");
    terms.push_back(1.0 / (lam - z));
  }
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

Complex cauchy_stieltjes(const EmpiricalMeasure1D& m, Complex z) {
  EmpiricalMeasure2D lifted;
  lifted.atoms.assign(m.atoms.begin(), m.atoms.end());
  return cauchy_stieltjes(lifted, z);
}

QTransform quaternionic_transform(const ComplexMatrix& a, const QPoint& q) {
  check_qpoint(q);
  const Eigen::Index n = a.rows();
  if (a.rows() != a.cols()) throw std::invalid_argument("quaternionic_transform: not square");
  ComplexMatrix big = ComplexMatrix::Zero(2 * n, 2 * n);
  const ComplexMatrix m = a - q.z * ComplexMatrix::Identity(n, n);
  big.topLeftCorner(n, n).diagonal().setConstant(-q.eta);
  big.bottomRightCorner(n, n).diagonal().setConstant(-q.eta);
  big.topRightCorner(n, n) = m;
  big.bottomLeftCorner(n, n) = m.adjoint();
  const ComplexMatrix res = big.partialPivLu().inverse();

  Complex sa = 0.0, sd = 0.0, sb = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    sa += res(k, k);
    sd += res(n + k, n + k);
    sb += res(k, n + k);
  }
  // The two diagonal averages agree identically; b is the plain average of
  // the upper-right entries (the conjugate symmetry with the lower-left
  // holds on the eta = it ray, where b feeds the density recovery).
  const double dn = static_cast<double>(n);
  return QTransform{(sa + sd) / (2.0 * dn), sb / dn};
}

QTransform quaternionic_transform_gram(const ComplexMatrix& a, const QPoint& q) {
  check_qpoint(q);
  if (a.rows() != a.cols())
    throw std::invalid_argument("quaternionic_transform_gram: not square");
  const Eigen::Index n = a.rows();
  const double dn = static_cast<double>(n);
  const ComplexMatrix m = a - q.z * ComplexMatrix::Identity(n, n);
  const ComplexMatrix gram = m.adjoint() * m;

  if (q.eta.real() == 0.0) {
    // eta = it: shifted Gram matrix is Hermitian positive definite.
    const double t = q.eta.imag();
    ComplexMatrix shifted = gram;
    shifted.diagonal().array() += t * t;
    Eigen::LLT<ComplexMatrix> llt(shifted);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("quaternionic_transform_gram: Cholesky failed");
    const ComplexMatrix winv = llt.solve(ComplexMatrix::Identity(n, n));
    const Complex trw = winv.trace();
    // a = i t tau((MM*+t^2)^{-1}), b = tau(M (M*M+t^2)^{-1})
    const Complex av = Complex(0.0, t) * trw / dn;
    const Complex bv = (m.cwiseProduct(winv.transpose())).sum() / dn;
    return QTransform{av, bv};
  }

  const Complex eta2 = q.eta * q.eta;
  ComplexMatrix shifted = -gram;
  shifted.diagonal().array() += eta2;
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const ComplexMatrix winv = lu.inverse();
  const Complex av = -q.eta * winv.trace() / dn;
  const Complex bv = -(m.cwiseProduct(winv.transpose())).sum() / dn;
  return QTransform{av, bv};
}

std::vector<Complex> b_field(const ComplexMatrix& a, const Lattice& lat, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("b_field: t must be positive");
  std::vector<Complex> out(lat.size());
  parallel_for(lat.size(), [&](std::size_t idx) {
    const int ix = static_cast<int>(idx) / lat.ny;
    const int iy = static_cast<int>(idx) % lat.ny;
    const QPoint q{lat.point(ix, iy), Complex(0.0, t)};
    out[idx] = quaternionic_transform_gram(a, q).b;
  });
  return out;
}

std::vector<Complex> extrapolate_b(const std::vector<std::vector<Complex>>& grids,
                                   const std::vector<double>& ts) {
  if (grids.size() != ts.size() || grids.size() < 2)
    throw std::invalid_argument("extrapolate_b: need >= 2 matching grids");
  const std::size_t npts = grids[0].size();
  for (const auto& g : grids)
    if (g.size() != npts) throw std::invalid_argument("extrapolate_b: grid size mismatch");
  std::vector<Complex> out(npts);
  std::vector<double> re(ts.size()), im(ts.size());
  for (std::size_t p = 0; p < npts; ++p) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      re[k] = grids[k][p].real();
      im[k] = grids[k][p].imag();
    }
    out[p] = Complex(fit_line(ts, re).first, fit_line(ts, im).first);
  }
  return out;
}

namespace {

// d/dx along one axis with 4th-order central stencils in the interior,
// falling back to 2nd-order central then one-sided at the edges.
Complex axis_derivative(const std::vector<Complex>& f, std::size_t idx, int i, int npts,
                        std::size_t stride, double h, bool fourth) {
  auto at = [&](int off) { return f[idx + static_cast<std::size_t>(off) * stride]; };
  if (fourth && i >= 2 && i + 2 < npts) {
    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  if (i >= 1 && i + 1 < npts) {
    return (at(1) - at(-1)) / (2.0 * h);
  }
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
}

}  // namespace

DensityGrid recover_density_from_b(const std::vector<Complex>& b, const Lattice& lat) {
  if (lat.nx < 3 || lat.ny < 3)
    throw std::invalid_argument("recover_density_from_b: lattice too coarse (need >= 3 per axis)");
  if (b.size() != lat.size())
    throw std::invalid_argument("recover_density_from_b: grid size mismatch");

  DensityGrid out;
  out.lat = lat;
  out.density.resize(lat.size());
  const bool fourth_x = lat.nx >= 5, fourth_y = lat.ny >= 5;
  const std::size_t stride_x = static_cast<std::size_t>(lat.ny);

  for (int ix = 0; ix < lat.nx; ++ix) {
    for (int iy = 0; iy < lat.ny; ++iy) {
      const std::size_t idx = static_cast<std::size_t>(ix) * stride_x + static_cast<std::size_t>(iy);
      const Complex dx = axis_derivative(b, idx, ix, lat.nx, stride_x, lat.step, fourth_x);
      const Complex dy = axis_derivative(b, idx, iy, lat.ny, 1, lat.step, fourth_y);
      const Complex del = 0.5 * (dx - Complex(0.0, 1.0) * dy);
      const Complex val = -del / M_PI;
      out.density[idx] = val.real();
      out.max_abs_imag = std::max(out.max_abs_imag, std::abs(val.imag()));
      out.worst_negative = std::min(out.worst_negative, val.real());
    }
  }
  out.negative_dip_flag = out.worst_negative < -0.05;
  return out;
}

double log_energy(const EmpiricalMeasure2D& m) {
  const std::size_t n = m.atoms.size();
  if (n < 2) throw std::invalid_argument("log_energy: need at least two atoms");
  std::vector<double> terms;
  terms.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(m.atoms[i] - m.atoms[j]);
      if (d < 1e-14 * (1.0 + std::abs(m.atoms[i])))
        throw std::invalid_argument("log_energy: duplicate atoms");
      terms.push_back(std::log(d));
    }
  }
  const double dn = static_cast<double>(n);
  return -2.0 * pairwise_sum(terms) / (dn * dn);
}

}  // namespace rmt
