#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "rmt/ensembles.hpp"
#include "rmt/heavy.hpp"
#include "rmt/numeric.hpp"
#include "rmt/stats.hpp"

using namespace rmt;

TEST_CASE("identical seeds reproduce identical matrices") {
  const Seed s{123, 7};
  const auto a = sample_iid_matrix(16, EntryLaw::complex_gaussian(), s);
  const auto b = sample_iid_matrix(16, EntryLaw::complex_gaussian(), s);
  CHECK(a == b);
  const auto c = sample_iid_matrix(16, EntryLaw::complex_gaussian(), Seed{123, 8});
  CHECK(a != c);
}

TEST_CASE("top-left minor is stable across dimension") {
  const Seed s{42, 0};
  for (const EntryLaw& law : {EntryLaw::complex_gaussian(), EntryLaw::bernoulli(),
                              EntryLaw::heavy(1.0, PhaseKind::kUniformCircle)}) {
    const auto big = sample_iid_matrix(11, law, s);
    const auto small = sample_iid_matrix(4, law, s);
    CHECK(big.topLeftCorner(4, 4) == small);
  }
}

TEST_CASE("dimension zero is rejected") {
  CHECK_THROWS_AS(sample_iid_matrix(0, EntryLaw::bernoulli(), Seed{}), std::invalid_argument);
}

TEST_CASE("bernoulli n=1 support") {
  for (std::uint64_t k = 0; k < 32; ++k) {
    const auto m = sample_iid_matrix(1, EntryLaw::bernoulli(), Seed{k, 0});
    CHECK(std::abs(std::abs(m(0, 0).real()) - 1.0) == 0.0);
    CHECK(m(0, 0).imag() == 0.0);
  }
}

TEST_CASE("variance-1 laws pass moment checks at 4 sigma with 1e6 draws") {
  const int n = 1000;  // 1e6 entries
  struct Case {
    EntryLaw law;
    double var_of_sq;  // Var(|X|^2), for the tolerance
  };
  // Var(|X|^2): complex gaussian -> 1 (exponential), real gaussian -> 2,
  // bernoulli -> 0.
  for (const Case& c : {Case{EntryLaw::complex_gaussian(), 1.0}, Case{EntryLaw::real_gaussian(), 2.0},
                        Case{EntryLaw::bernoulli(), 0.0}}) {
    const auto m = sample_iid_matrix(n, c.law, Seed{5, 11});
    double sum_sq = 0.0;
    Complex sum{0.0, 0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        sum_sq += std::norm(m(i, j));
        sum += m(i, j);
      }
    const double cnt = static_cast<double>(n) * n;
    const double mean_sq = sum_sq / cnt;
    CHECK(std::abs(mean_sq - 1.0) <= 4.0 * std::sqrt(c.var_of_sq / cnt) + 1e-12);
    CHECK(std::abs(sum / cnt) <= 4.0 / std::sqrt(cnt));
  }
}

TEST_CASE("complex gaussian 1e4 entries: mean |.|^2 within 3 sigma of 1") {
  const auto m = sample_iid_matrix(100, EntryLaw::complex_gaussian(), Seed{9, 0});
  double acc = 0.0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) acc += std::norm(m(i, j));
  CHECK(std::abs(acc / 1e4 - 1.0) <= 3.0 / 100.0);
}

TEST_CASE("heavy tail alpha=1: t P(|X| >= t) near 1 at t=100") {
  const auto m = sample_iid_matrix(100, EntryLaw::heavy(1.0), Seed{77, 0});
  const double t = 100.0;
  long count = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      if (std::abs(m(i, j)) >= t) ++count;
  const double p_hat = count / 1e4;
  // exact Pareto: P = 1/t = 0.01; 3 sigma of the binomial count
  CHECK(std::abs(t * p_hat - 1.0) <= 3.0 * t * std::sqrt(0.01 * 0.99 / 1e4));
}

TEST_CASE("heavy tail exact Pareto modulus for t >= 1") {
  // |X| = U^{-1/alpha} with U in (0,1], so |X| >= 1 always.
  const auto m = sample_iid_matrix(40, EntryLaw::heavy(0.5, PhaseKind::kRademacher), Seed{3, 1});
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) CHECK(std::abs(m(i, j)) >= 1.0);
}

TEST_CASE("heavy tail alpha validation") {
  CHECK_THROWS_AS(sample_iid_matrix(2, EntryLaw::heavy(2.0), Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(sample_positive_stable(0.0, 10, Seed{}), std::invalid_argument);
}

TEST_CASE("kostlan n=1: P(Z <= 1) = 1 - exp(-1)") {
  const int reps = 4000;
  long count = 0;
  for (int r = 0; r < reps; ++r) {
    if (sample_kostlan_moduli(1, Seed{11, static_cast<std::uint64_t>(r)})[0] <= 1.0) ++count;
  }
  const double p = 1.0 - std::exp(-1.0);
  CHECK(std::abs(count / static_cast<double>(reps) - p) <=
        3.0 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("kostlan output is sorted descending and max agrees") {
  const auto z = sample_kostlan_moduli(64, Seed{2, 5});
  CHECK(std::is_sorted(z.begin(), z.end(), std::greater<>()));
  CHECK(sample_kostlan_max(64, Seed{2, 5}) == doctest::Approx(z.front()).epsilon(1e-15));
}

TEST_CASE("positive stable: support and Laplace transform oracle") {
  const auto s = sample_positive_stable(1.0, 1 << 20, Seed{21, 0});
  double m1 = 0.0, m4 = 0.0, v1 = 0.0, v4 = 0.0;
  for (double x : s) {
    CHECK(x > 0.0);
    m1 += std::exp(-x);
    m4 += std::exp(-4.0 * x);
  }
  const double n = static_cast<double>(s.size());
  m1 /= n;
  m4 /= n;
  for (double x : s) {
    v1 += (std::exp(-x) - m1) * (std::exp(-x) - m1);
    v4 += (std::exp(-4.0 * x) - m4) * (std::exp(-4.0 * x) - m4);
  }
  // E e^{-xS} = exp(-Gamma(1/2) sqrt(x)): evaluate the closed form directly.
  const double want1 = std::exp(-std::sqrt(M_PI));
  const double want4 = std::exp(-std::sqrt(M_PI) * 2.0);
  CHECK(std::abs(m1 - want1) <= 3.0 * std::sqrt(v1 / (n * n)));
  CHECK(std::abs(m4 - want4) <= 3.0 * std::sqrt(v4 / (n * n)));
}

TEST_CASE("poisson weights: monotone, law of large numbers at the tail") {
  const std::size_t k = 10000;
  const auto xi = sample_poisson_weights(1.0, k, Seed{8, 3});
  CHECK(std::is_sorted(xi.begin(), xi.end(), std::greater<>()));
  // xi_K = x_K^{-2/alpha} with x_K a sum of K unit exponentials.
  const double x_k = std::pow(xi.back(), -0.5);
  CHECK(std::abs(x_k / static_cast<double>(k) - 1.0) <= 0.05);
}

TEST_CASE("magic formula: deterministic marks factor exactly") {
  const auto xi = sample_poisson_weights(1.2, 500, Seed{14, 0});
  const double y = 3.7;
  double lhs = 0.0, rhs = 0.0;
  for (double x : xi) {
    lhs += x * y;
    rhs += x;
  }
  CHECK(lhs == doctest::Approx(y * rhs).epsilon(1e-14));
}

TEST_CASE("magic formula: random marks match the rescaled stable law") {
  // sum xi_k Y_k  =d  E[Y^{alpha/2}]^{2/alpha} S  for Y = U^2, alpha = 1:
  // E[Y^{1/2}] = E[U] = 1/2, so the factor is 1/4.
  const double alpha = 1.0;
  const std::size_t trunc = 3000, nsamp = 3000;
  std::vector<double> sums(nsamp);
  for (std::size_t r = 0; r < nsamp; ++r) {
    const auto xi = sample_poisson_weights(alpha, trunc, Seed{31, r});
    Rng g(Seed{77, r});
    double acc = 0.0;
    for (double x : xi) {
      const double u = g.uniform();
      acc += x * u * u;
    }
    sums[r] = acc;
  }
  auto stab = sample_positive_stable(alpha, nsamp, Seed{99, 0});
  for (double& x : stab) x *= 0.25;
  const double d = ks_distance(sums, stab);
  CHECK(d <= ks_critical_two_sample(nsamp, nsamp, 0.01));
}

TEST_CASE("pwit shape and mark statistics") {
  const auto t = sample_pwit(1, 3, 1.0, PhaseKind::kDeterministicOne, Seed{4, 4});
  CHECK(t.size() == 4);
  CHECK(t.vertices[0].first_child == 1);
  for (int k = 1; k <= 3; ++k) {
    CHECK(t.vertices[static_cast<std::size_t>(k)].parent == 0);
    CHECK(t.vertices[static_cast<std::size_t>(k)].first_child == -1);
  }
  CHECK(t.vertices[1].y < t.vertices[2].y);
  CHECK(t.vertices[2].y < t.vertices[3].y);

  // Root gaps are Exp(rate 2): mean 1/2; eps is Be(1/2).
  const int wide = 4000;
  const auto big = sample_pwit(1, wide, 1.5, PhaseKind::kDeterministicOne, Seed{4, 9});
  double prev = 0.0, gap_sum = 0.0;
  long eps_count = 0;
  for (int k = 1; k <= wide; ++k) {
    gap_sum += big.vertices[static_cast<std::size_t>(k)].y - prev;
    prev = big.vertices[static_cast<std::size_t>(k)].y;
    eps_count += big.vertices[static_cast<std::size_t>(k)].eps ? 1 : 0;
  }
  CHECK(std::abs(gap_sum / wide - 0.5) <= 3.0 * 0.5 / std::sqrt(wide));
  CHECK(std::abs(eps_count / static_cast<double>(wide) - 0.5) <=
        3.0 * 0.5 / std::sqrt(wide));
}

TEST_CASE("pwit vertex count matches sum of powers") {
  const auto t = sample_pwit(3, 4, 1.0, PhaseKind::kUniformCircle, Seed{6, 6});
  CHECK(t.size() == 1 + 4 + 16 + 64);
}

TEST_CASE("parallel monte carlo is independent of thread count") {
  const QPoint q{Complex(0.3, 0.1), Complex(0.0, 1.0)};
  set_default_threads(1);
  const auto one = pwit_resolvent_mc(3, 6, 1.0, q, 40, Seed{50, 0});
  set_default_threads(2);
  const auto two = pwit_resolvent_mc(3, 6, 1.0, q, 40, Seed{50, 0});
  set_default_threads(0);
  CHECK(one.mean.a == two.mean.a);
  CHECK(one.mean.b == two.mean.b);
  CHECK(one.se_a_imag == two.se_a_imag);
}
