#include "rmt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rmt/numeric.hpp"

namespace rmt {

GofReport GofReport::make(std::string name, long sample_size, long replicas, double statistic,
                          double critical_value, Seed seed) {
  GofReport r;
  r.test_name = std::move(name);
  r.sample_size = sample_size;
  r.replicas = replicas;
  r.statistic = statistic;
  r.critical_value = critical_value;
  r.pass = statistic <= critical_value;
  r.seed = seed;
  return r;
}

std::string GofReport::to_json() const {
  nlohmann::json j;
  j["test-name"] = test_name;
  j["sample-size"] = sample_size;
  j["replicas"] = replicas;
  j["statistic"] = statistic;
  j["critical-value"] = critical_value;
  j["pass"] = pass;
  j["seed"] = {{"master", seed.master}, {"stream", seed.stream}};
  return j.dump(2);
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::max(0.0, 1.0 - 2.0 * sum);
}

double kolmogorov_critical(double alpha) {
  double lo = 0.1, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < 1.0 - alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_distance(std::vector<double> sample, const LawDescriptor& law) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = law.cdf(sample[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_one_sample(std::size_t n, double alpha) {
  return kolmogorov_critical(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  return kolmogorov_critical(alpha) * std::sqrt((static_cast<double>(n + m)) / nm);
}

double wasserstein2_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("wasserstein2_sorted: length mismatch");
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(pairwise_mean(sq));
}

std::vector<double> row_distances(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("row_distances: matrix not square");
  const Eigen::Index n = a.rows();
  const SingularSpectrum sv = singular_values(a);
  if (sv.values.back() < 1e-12 * a.norm())
    throw std::invalid_argument("row_distances: rank-deficient input");

  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix others(n, n - 1);  // the other rows, as columns
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      others.col(c++) = a.row(j).adjoint();
    }
    const Eigen::HouseholderQR<ComplexMatrix> qr(others);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n - 1);
    const Eigen::VectorXcd ri = a.row(i).adjoint();
    dist[static_cast<std::size_t>(i)] = (ri - q * (q.adjoint() * ri)).norm();
  }
  return dist;
}

SmallestSvBounds smallest_sv_bounds_check(const ComplexMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("smallest_sv_bounds_check: matrix not square");
  const Eigen::Index n = a.rows();
  SmallestSvBounds out;
  out.s_n = singular_values(a).values.back();

  // Projection distances without the full-rank precondition of row_distances.
  double mind = 1e300;
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix others(n, n - 1);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      others.col(c++) = a.row(j).adjoint();
    }
    const Eigen::HouseholderQR<ComplexMatrix> qr(others);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n - 1);
    const Eigen::VectorXcd ri = a.row(i).adjoint();
    mind = std::min(mind, (ri - q * (q.adjoint() * ri)).norm());
  }
  out.upper = mind;
  out.lower = mind / std::sqrt(static_cast<double>(n));
  return out;
}

SmallSvProfile small_sv_profile(const std::vector<double>& descending_sv) {
  const int n = static_cast<int>(descending_sv.size());
  if (n < 50) throw std::invalid_argument("small_sv_profile: need n >= 50");
  const int i_lo = static_cast<int>(std::ceil(std::pow(n, 0.8)));

  SmallSvProfile out;
  out.c_hat = 1e300;
  for (int i = i_lo; i <= n - 1; ++i) {
    // descending order: s_{n-i} is entry n-i-1 of s_1 >= ... >= s_n
    const double ratio = descending_sv[static_cast<std::size_t>(n - i - 1)] /
                         (static_cast<double>(i) / static_cast<double>(n));
    out.c_hat = std::min(out.c_hat, ratio);
  }
  std::vector<double> lx, ly;
  for (int i = i_lo; i <= n - 1; ++i) {
    SmallSvCountRow row;
    row.i = i;
    row.s_n_minus_i = descending_sv[static_cast<std::size_t>(n - i - 1)];
    row.profile = out.c_hat * static_cast<double>(i) / static_cast<double>(n);
    out.table.push_back(row);
    lx.push_back(std::log(static_cast<double>(i) / static_cast<double>(n)));
    ly.push_back(std::log(row.s_n_minus_i));
  }
  out.loglog_slope = fit_line(lx, ly).second;
  return out;
}

SmallSvCountResult small_sv_count_experiment(int n, const EntryLaw& law, const ComplexMatrix& m,
                                             int replicas, Seed seed) {
  if (n < 50) throw std::invalid_argument("small_sv_count_experiment: need n >= 50");
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("small_sv_count_experiment: shift dimension mismatch");
  SmallSvCountResult out;
  out.c_hat.resize(static_cast<std::size_t>(replicas));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<std::vector<double>> spectra(static_cast<std::size_t>(replicas));
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    const ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(r));
    spectra[r] = singular_values(scale * x + m).values;
  });

  for (std::size_t r = 0; r < spectra.size(); ++r) {
    SmallSvProfile prof = small_sv_profile(spectra[r]);
    out.c_hat[r] = prof.c_hat;
    if (r + 1 == spectra.size()) {
      out.last_table = std::move(prof.table);
      out.loglog_slope = prof.loglog_slope;
    }
  }
  return out;
}

SmallestSvTailCurve smallest_sv_tail_experiment(int n, const EntryLaw& law, double shift_norm,
                                                int replicas, const std::vector<double>& t_grid,
                                                Seed seed) {
  if (replicas < 200)
    throw std::invalid_argument("smallest_sv_tail_experiment: need >= 200 replicas");
  SmallestSvTailCurve out;
  out.t = t_grid;
  std::vector<double> t_sorted = t_grid;
  std::sort(t_sorted.begin(), t_sorted.end());
  if (t_sorted != t_grid)
    throw std::invalid_argument("smallest_sv_tail_experiment: t grid must ascend");

  std::vector<double> sn(static_cast<std::size_t>(replicas)), s1(static_cast<std::size_t>(replicas));
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(r));
    if (shift_norm != 0.0) x.diagonal().array() += shift_norm;
    const auto s = singular_values(x).values;
    sn[r] = s.back();
    s1[r] = s.front();
  });

  const double rootn = std::sqrt(static_cast<double>(n));
  out.prob.resize(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    long count = 0;
    for (std::size_t r = 0; r < sn.size(); ++r)
      if (sn[r] <= t_grid[k] / rootn) ++count;
    out.prob[k] = static_cast<double>(count) / static_cast<double>(replicas);
  }
  double c_hat = 0.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    c_hat = std::max(c_hat, out.prob[k] / (t_grid[k] + 1.0 / rootn));
  out.c_hat = c_hat;

  long singular = 0;
  for (std::size_t r = 0; r < sn.size(); ++r)
    if (sn[r] <= 1e-10 * s1[r]) ++singular;
  out.singular_fraction = static_cast<double>(singular) / static_cast<double>(replicas);
  return out;
}

IncompressibleSupport incompressible_support(const std::vector<Complex>& x, double delta,
                                             double rho) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("incompressible_support: empty vector");
  double norm2 = 0.0;
  for (const Complex& v : x) norm2 += std::norm(v);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
    throw std::invalid_argument("incompressible_support: vector is not unit norm");

  // Nearest floor(delta n)-sparse vector keeps the largest-modulus entries.
  const std::size_t keep = static_cast<std::size_t>(delta * static_cast<double>(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(x[i]) > std::abs(x[j]); });
  double tail2 = 0.0;
  for (std::size_t k = keep; k < n; ++k) tail2 += std::norm(x[order[k]]);

  IncompressibleSupport out;
  if (std::sqrt(tail2) <= rho) {
    out.compressible = true;
    std::vector<Complex> cert(n, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < keep; ++k) cert[order[k]] = x[order[k]];
    out.sparse_certificate = std::move(cert);
    return out;
  }

  const double lo = rho / std::sqrt(static_cast<double>(n));
  const double hi = std::sqrt(2.0 / (delta * static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(x[i]);
    if (m >= lo && m <= hi) out.indices.push_back(static_cast<int>(i));
  }
  if (out.indices.size() * 2 < static_cast<std::size_t>(delta * static_cast<double>(n)))
    throw std::runtime_error("incompressible_support: support smaller than delta n / 2");
  return out;
}

namespace {

double eval_test_function(TestFunction f, double threshold, double x) {
  switch (f) {
    case TestFunction::kIndicatorStep:
      return x <= threshold ? 1.0 : 0.0;
    case TestFunction::kSmoothRamp: {
      if (x <= threshold) return 1.0;
      if (x >= threshold + 1.0) return 0.0;
      const double u = x - threshold;
      return 1.0 - u * u * (3.0 - 2.0 * u);  // C^1, decreasing, TV = 1
    }
  }
  return 0.0;
}

}  // namespace

ConcentrationResult concentration_experiment(int n, const EntryLaw& law, TestFunction f,
                                             double threshold, int replicas,
                                             const std::vector<double>& t_grid, Seed seed) {
  std::vector<double> integrals(static_cast<std::size_t>(replicas));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    const ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(r));
    const auto s = singular_values(scale * x).values;
    std::vector<double> vals(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) vals[k] = eval_test_function(f, threshold, s[k]);
    integrals[r] = pairwise_mean(vals);
  });
  const double mean = pairwise_mean(integrals);

  ConcentrationResult out;
  out.t = t_grid;
  out.pass = true;
  for (double t : t_grid) {
    long count = 0;
    for (double v : integrals)
      if (std::abs(v - mean) >= t) ++count;
    const double freq = static_cast<double>(count) / static_cast<double>(replicas);
    const double base = 2.0 * std::exp(-2.0 * n * t * t);
    const double sigma = std::sqrt(std::max(base * (1.0 - base), 1e-12) /
                                   static_cast<double>(replicas));
    out.frequency.push_back(freq);
    out.bound.push_back(std::min(1.0, base + 3.0 * sigma));
    if (freq > out.bound.back()) out.pass = false;
  }
  return out;
}

double ecdf_sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  return ks_distance(a, b);
}

}  // namespace rmt
