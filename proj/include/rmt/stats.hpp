// Exact small-singular-value identities, invertibility experiments,
// concentration harnesses, and goodness-of-fit statistics.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/laws.hpp"
#include "rmt/spectral.hpp"

namespace rmt {

struct GofReport {
  std::string test_name;
  long sample_size = 0;
  long replicas = 0;
  double statistic = 0.0;
  double critical_value = 0.0;
  bool pass = false;
  Seed seed;

  static GofReport make(std::string name, long sample_size, long replicas, double statistic,
                        double critical_value, Seed seed);
  std::string to_json() const;
};

// Asymptotic Kolmogorov distribution K(x) = P(sup |B| <= x) and the
// two-sided critical value at level `alpha` (K^{-1}(1-alpha)).
double kolmogorov_cdf(double x);
double kolmogorov_critical(double alpha);

// One-sample KS statistic against a reference CDF; sample gets sorted.
double ks_distance(std::vector<double> sample, const LawDescriptor& law);
// Two-sample KS statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);
// Critical values at level alpha (asymptotic).
double ks_critical_one_sample(std::size_t n, double alpha);
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha);

// W2 between sorted equal-length atom lists: sqrt((1/n) sum (a_i-b_i)^2).
double wasserstein2_sorted(const std::vector<double>& a, const std::vector<double>& b);

// dist(R_i, span of the other rows) for every row, by QR projection.
// Satisfies sum s_i^{-2} = sum dist_i^{-2} on full-rank square input;
// rank-deficient matrices (s_n < 1e-12 ||A||_2) are rejected.
std::vector<double> row_distances(const ComplexMatrix& a);

struct SmallestSvBounds {
  double lower = 0.0;  // n^{-1/2} min_i dist_i
  double upper = 0.0;  // min_i dist_i
  double s_n = 0.0;
};

// lower <= s_n <= upper on every square matrix.
SmallestSvBounds smallest_sv_bounds_check(const ComplexMatrix& a);

struct SmallSvCountRow {
  int i = 0;
  double s_n_minus_i = 0.0;
  double profile = 0.0;  // c_hat * i/n for the replica's fitted c_hat
};

struct SmallSvCountResult {
  std::vector<double> c_hat;                 // per replica: min_i s_{n-i} / (i/n)
  std::vector<SmallSvCountRow> last_table;   // profile of the last replica
  double loglog_slope = 0.0;                 // slope of log s_{n-i} vs log(i/n), last replica
};

struct SmallSvProfile {
  double c_hat = 0.0;
  double loglog_slope = 0.0;
  std::vector<SmallSvCountRow> table;
};

// Profile of one descending singular spectrum over i in [n^{0.8}, n-1];
// c_hat is exactly 1-homogeneous in the spectrum.
SmallSvProfile small_sv_profile(const std::vector<double>& descending_sv);

// Singular values of n^{-1/2} X + M against the linear profile c i/n over
// i in [n^{0.8}, n-1].
SmallSvCountResult small_sv_count_experiment(int n, const EntryLaw& law, const ComplexMatrix& m,
                                             int replicas, Seed seed);

struct SmallestSvTailCurve {
  std::vector<double> t;
  std::vector<double> prob;   // empirical P(s_n(X+M) <= t/sqrt(n))
  double c_hat = 0.0;         // max_t prob / (t + n^{-1/2})
  double singular_fraction = 0.0;  // frequency of numerically singular draws
};

// Monte Carlo tail curve of the smallest singular value, with the fitted
// affine envelope constant.
SmallestSvTailCurve smallest_sv_tail_experiment(int n, const EntryLaw& law, double shift_norm,
                                                int replicas, const std::vector<double>& t_grid,
                                                Seed seed);

struct IncompressibleSupport {
  std::vector<int> indices;                  // the set pi
  std::optional<std::vector<Complex>> sparse_certificate;  // set when rejected
  bool compressible = false;
};

// For a unit vector x incompressible at (delta, rho): indices pi with
// |pi| >= delta n / 2 and rho/sqrt(n) <= |x_i| <= sqrt(2/(delta n)).
// Compressible input is rejected with the certifying sparse approximant.
IncompressibleSupport incompressible_support(const std::vector<Complex>& x, double delta,
                                             double rho);

enum class TestFunction {
  kIndicatorStep,  // 1_{(-inf, s]}, TV = 1
  kSmoothRamp,     // C^1 ramp from 1 to 0 across [s, s+1], TV = 1
};

struct ConcentrationResult {
  std::vector<double> t;
  std::vector<double> frequency;  // empirical P(|int f dnu - mean| >= t)
  std::vector<double> bound;      // 2 exp(-2 n t^2) + 3 binomial sigma
  bool pass = false;
};

// Deviations of int f dnu_{n^{-1/2}X} across replicas against the
// exponential concentration bound.
ConcentrationResult concentration_experiment(int n, const EntryLaw& law, TestFunction f,
                                             double threshold, int replicas,
                                             const std::vector<double>& t_grid, Seed seed);

// sup-distance between the ECDFs of two singular spectra (rank-one
// interlacing checks).
double ecdf_sup_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rmt
