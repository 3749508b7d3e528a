#include "rmt/heavy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmt/numeric.hpp"

namespace rmt {

namespace {

constexpr std::size_t kMinBank = 1000;

void check_bank(const StableSampleBank& bank) {
  if (bank.size() < kMinBank || bank.s2.size() != bank.s.size())
    throw std::invalid_argument("stable bank too small (need >= 1000 paired samples)");
}

// x^{alpha/2} with the common alpha = 1 case short-circuited to sqrt.
struct HalfAlphaPow {
  double rho;
  bool is_sqrt;
  explicit HalfAlphaPow(double alpha) : rho(alpha / 2.0), is_sqrt(std::abs(alpha - 1.0) < 1e-14) {}
  double operator()(double x) const { return is_sqrt ? std::sqrt(x) : std::pow(x, rho); }
};

// Deterministic blocked mean of f(i) over [0, n): per-block sequential sums,
// pairwise over block sums. Independent of threading decisions by callers.
template <typename F>
double block_mean(std::size_t n, F&& f) {
  constexpr std::size_t kBlock = 4096;
  std::vector<double> blocks;
  blocks.reserve(n / kBlock + 1);
  std::size_t i = 0;
  while (i < n) {
    const std::size_t end = std::min(n, i + kBlock);
    double acc = 0.0;
    for (; i < end; ++i) acc += f(i);
    blocks.push_back(acc);
  }
  return pairwise_sum(blocks) / static_cast<double>(n);
}

template <typename F>
Complex block_mean_complex(std::size_t n, F&& f) {
  const double re = block_mean(n, [&](std::size_t i) { return f(i).real(); });
  const double im = block_mean(n, [&](std::size_t i) { return f(i).imag(); });
  return {re, im};
}

// Bank moment map whose root in y defines the RDE solution.
double y_equation_moment(double r2, double t, double y, const StableSampleBank& bank) {
  const HalfAlphaPow hp(bank.alpha);
  const auto& s = bank.s;
  const auto& s2 = bank.s2;
  if (t == 0.0) {
    const double y2 = y * y;
    return block_mean(s.size(), [&](std::size_t i) {
      return hp(s[i] / (r2 + y2 * s[i] * s2[i]));
    });
  }
  const double ty = t / y;
  return block_mean(s.size(), [&](std::size_t i) {
    const double u = t + y * s[i];
    const double v = t + y * s2[i];
    return hp((ty + s[i]) / (r2 + u * v));
  });
}

}  // namespace

StableSampleBank make_stable_bank(double alpha, std::size_t count, Seed seed) {
  StableSampleBank bank;
  bank.alpha = alpha;
  bank.seed = seed;
  bank.s = sample_positive_stable(alpha, count, seed.sub(1));
  bank.s2 = sample_positive_stable(alpha, count, seed.sub(2));
  return bank;
}

StableSampleBank make_stable_bank_unit(double alpha, std::size_t count, Seed seed) {
  StableSampleBank bank = make_stable_bank(alpha, count, seed);
  const double c = std::pow(std::tgamma(1.0 - alpha / 2.0), 2.0 / alpha);
  for (double& x : bank.s) x /= c;
  for (double& x : bank.s2) x /= c;
  return bank;
}

RdeSolution rde_y(Complex z, double t, const StableSampleBank& bank) {
  check_bank(bank);
  const double r2 = std::norm(z);
  if (t < 0.0) throw std::invalid_argument("rde_y: t must be >= 0");
  if (t == 0.0 && r2 == 0.0)
    throw std::invalid_argument("rde_y: t = 0 requires |z| > 0");

  auto phi = [&](double y) { return y_equation_moment(r2, t, y, bank); };

  double lo = 1e-8, hi = 1e8;
  if (phi(lo) < 1.0 || phi(hi) > 1.0)
    throw std::runtime_error("rde_y: moment map does not bracket 1 (numerical fault)");
  // Geometric bisection; the map is strictly decreasing in y on a fixed bank.
  while (hi - lo > 1e-10 * hi) {
    const double mid = std::sqrt(lo * hi);
    (phi(mid) > 1.0 ? lo : hi) = mid;
  }
  const double y = std::sqrt(lo * hi);
  return RdeSolution{y, std::abs(phi(y) - 1.0)};
}

RdeMoments rde_h_moments(Complex z, double t, const StableSampleBank& bank) {
  RdeMoments out;
  out.y = rde_y(z, t, bank);
  const double y = out.y.y;
  const double r2 = std::norm(z);
  const auto& s = bank.s;
  const auto& s2 = bank.s2;
  out.e_h = block_mean(s.size(), [&](std::size_t i) {
    const double u = t + y * s[i];
    const double v = t + y * s2[i];
    return u / (r2 + u * v);
  });
  const double denom_mean = block_mean(s.size(), [&](std::size_t i) {
    const double u = t + y * s[i];
    const double v = t + y * s2[i];
    return 1.0 / (r2 + u * v);
  });
  out.e_b = -z * denom_mean;
  return out;
}

namespace {

double solve_y_t0(double r2, const StableSampleBank& bank) {
  // At the origin the t = 0 form is replaced by a vanishing t; the h limit
  // there is finite and the y solution is continuous in t.
  if (r2 <= 0.0) return rde_y(Complex(0.0, 0.0), 1e-6, bank).y;
  return rde_y(Complex(std::sqrt(r2), 0.0), 0.0, bank).y;
}

}  // namespace

double heavy_density_g(double r, const StableSampleBank& bank, double fd_step) {
  check_bank(bank);
  if (r < 0.0) throw std::invalid_argument("heavy_density_g: radius must be >= 0");
  const double r2 = r * r;
  const double step = fd_step > 0.0 ? fd_step : 1e-3 * (1.0 + r2);

  const double y0 = solve_y_t0(r2, bank);
  double yprime;
  if (r2 >= step) {
    yprime = (solve_y_t0(r2 + step, bank) - solve_y_t0(r2 - step, bank)) / (2.0 * step);
  } else {
    yprime = (solve_y_t0(r2 + step, bank) - y0) / step;
  }

  const double y02 = y0 * y0;
  const auto& s = bank.s;
  const auto& s2 = bank.s2;
  const double kernel = block_mean(s.size(), [&](std::size_t i) {
    const double p = s[i] * s2[i];
    const double d = r2 + y02 * p;
    return p / (d * d);
  });
  const double g = (y02 - 2.0 * r2 * y0 * yprime) * kernel / M_PI;
  if (g < -1e-4)
    throw std::runtime_error("heavy_density_g: negative density beyond tolerance (bad bank/step)");
  return std::max(0.0, g);
}

namespace {

// One sweep of the complex magic-formula fixed point at eta in C+:
//   F(w) = E[ a(w)^{alpha/2} ]^{2/alpha},
//   a(w) = (eta + wS) / (|z|^2 - (eta+wS)(eta+wS')).
class ComplexRdeMap {
 public:
  ComplexRdeMap(double r2, Complex eta, const StableSampleBank& bank)
      : r2_(r2), eta_(eta), bank_(bank), rho_(bank.alpha / 2.0) {}

  Complex apply(Complex w) const {
    const auto& s = bank_.s;
    const auto& s2 = bank_.s2;
    const Complex mom = block_mean_complex(s.size(), [&](std::size_t i) {
      return std::pow(value(w, s[i], s2[i]), rho_);
    });
    return std::pow(mom, 1.0 / rho_);
  }

  Complex mean_a(Complex w) const {
    const auto& s = bank_.s;
    const auto& s2 = bank_.s2;
    return block_mean_complex(s.size(),
                              [&](std::size_t i) { return value(w, s[i], s2[i]); });
  }

  // Damped Picard iteration from `w`; throws if it fails to settle.
  Complex solve(Complex w) const {
    const double damp = 0.5;
    for (int it = 0; it < 400; ++it) {
      const Complex next = (1.0 - damp) * w + damp * apply(w);
      if (std::abs(next - w) <= 1e-10 * (1.0 + std::abs(next))) return next;
      w = next;
    }
    throw std::runtime_error("nu_alpha_z_density: fixed point did not converge");
  }

 private:
  Complex value(Complex w, double si, double sj) const {
    const Complex u = eta_ + w * si;
    const Complex v = eta_ + w * sj;
    return u / (r2_ - u * v);
  }

  double r2_;
  Complex eta_;
  const StableSampleBank& bank_;
  double rho_;
};

// Warm start for eta = x + i eps: continue the solution along x from the
// imaginary axis, where w = i y is known from the monotone solver.
Complex walk_fixed_point(double r2, double x, double eps, const StableSampleBank& bank) {
  const double t0 = std::max(eps, 0.05);
  Complex w(0.0, rde_y(Complex(std::sqrt(r2), 0.0), t0, bank).y);
  // First bring the imaginary part down to eps, then walk the real part.
  for (double t = t0; t > eps; t = std::max(eps, 0.6 * t)) {
    w = ComplexRdeMap(r2, Complex(0.0, t), bank).solve(w);
    if (t == eps) break;
  }
  w = ComplexRdeMap(r2, Complex(0.0, eps), bank).solve(w);
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(x) / 0.25)));
  for (int k = 1; k <= steps; ++k) {
    const double xk = x * k / steps;
    w = ComplexRdeMap(r2, Complex(xk, eps), bank).solve(w);
  }
  return w;
}

double density_from_w(double r2, Complex eta, Complex w, const StableSampleBank& bank) {
  const Complex m = ComplexRdeMap(r2, eta, bank).mean_a(w);
  return 2.0 / M_PI * m.imag();
}

}  // namespace

double nu_alpha_z_density(Complex z, double x, const StableSampleBank& bank,
                          const std::vector<double>& eps_seq) {
  check_bank(bank);
  if (x < 0.0) throw std::invalid_argument("nu_alpha_z_density: x must be >= 0");
  if (eps_seq.size() < 2)
    throw std::invalid_argument("nu_alpha_z_density: need >= 2 eps values");
  const double r2 = std::norm(z);
  std::vector<double> es, ds;
  for (double eps : eps_seq) {
    const Complex w = walk_fixed_point(r2, x, eps, bank);
    es.push_back(eps);
    ds.push_back(density_from_w(r2, Complex(x, eps), w, bank));
  }
  return std::max(0.0, fit_line(es, ds).first);
}

std::vector<double> nu_alpha_z_density_scan(Complex z, const std::vector<double>& xs,
                                            const StableSampleBank& bank,
                                            const std::vector<double>& eps_seq) {
  check_bank(bank);
  if (eps_seq.size() < 2)
    throw std::invalid_argument("nu_alpha_z_density_scan: need >= 2 eps values");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1])
      throw std::invalid_argument("nu_alpha_z_density_scan: xs must ascend");
  const double r2 = std::norm(z);

  std::vector<std::vector<double>> per_eps(eps_seq.size());
  parallel_for(eps_seq.size(), [&](std::size_t e) {
    const double eps = eps_seq[e];
    per_eps[e].resize(xs.size());
    Complex w = walk_fixed_point(r2, xs.empty() ? 0.0 : xs.front(), eps, bank);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const ComplexRdeMap map(r2, Complex(xs[i], eps), bank);
      w = map.solve(w);
      per_eps[e][i] = density_from_w(r2, Complex(xs[i], eps), w, bank);
    }
  });

  std::vector<double> out(xs.size());
  std::vector<double> es(eps_seq.begin(), eps_seq.end()), ds(eps_seq.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t e = 0; e < eps_seq.size(); ++e) ds[e] = per_eps[e][i];
    out[i] = std::max(0.0, fit_line(es, ds).first);
  }
  return out;
}

namespace {

struct RootEntries {
  Complex a, c, b;
};

RootEntries combine(const QPoint& q, Complex sum_a, Complex sum_c) {
  const Complex p = q.eta + sum_c;
  const Complex r = q.eta + sum_a;
  const Complex d = std::norm(q.z) - r * p;
  return {r / d, p / d, -q.z / d};
}

void check_upper(const Complex& a) {
  if (!(a.imag() > 0.0))
    throw std::runtime_error("pwit resolvent: diagonal entry left the upper half plane");
}

}  // namespace

QTransform pwit_resolvent_root(const PwitTree& tree, const QPoint& q, double alpha) {
  if (!(q.eta.imag() > 0.0)) throw std::invalid_argument("pwit_resolvent_root: need Im eta > 0");
  const std::size_t n = tree.size();
  std::vector<Complex> av(n), cv(n);
  const double expo = -2.0 / alpha;
  // Vertices are stored breadth-first, so a reverse sweep is bottom-up.
  RootEntries root{};
  for (std::size_t v = n; v-- > 0;) {
    const auto& vert = tree.vertices[v];
    Complex sum_a = 0.0, sum_c = 0.0;
    if (vert.first_child >= 0) {
      for (int k = 0; k < tree.branching; ++k) {
        const std::size_t child = static_cast<std::size_t>(vert.first_child) + static_cast<std::size_t>(k);
        const double w = std::pow(tree.vertices[child].y, expo);
        if (tree.vertices[child].eps)
          sum_a += w * av[child];
        else
          sum_c += w * cv[child];
      }
    }
    const RootEntries r = combine(q, sum_a, sum_c);
    check_upper(r.a);
    check_upper(r.c);
    av[v] = r.a;
    cv[v] = r.c;
    if (v == 0) root = r;
  }
  return QTransform{root.a, root.b};
}

namespace {

struct StreamRecursion {
  int depth;
  int branching;
  double expo;  // -2/alpha
  QPoint q;
  Seed seed;
  std::vector<std::size_t> level_offset;  // breadth-first offsets per level

  RootEntries visit(int level, std::size_t pos) const {
    if (level == depth) return combine(q, 0.0, 0.0);
    const std::size_t v = level_offset[static_cast<std::size_t>(level)] + pos;
    Rng g(seed.sub(v));
    Complex sum_a = 0.0, sum_c = 0.0;
    double y = 0.0;
    for (int k = 0; k < branching; ++k) {
      y += g.exponential(2.0);
      const bool eps = g.coin();
      const RootEntries child =
          visit(level + 1, pos * static_cast<std::size_t>(branching) + static_cast<std::size_t>(k));
      const double w = std::pow(y, expo);
      if (eps)
        sum_a += w * child.a;
      else
        sum_c += w * child.c;
    }
    const RootEntries r = combine(q, sum_a, sum_c);
    check_upper(r.a);
    check_upper(r.c);
    return r;
  }
};

}  // namespace

QTransform pwit_resolvent_stream(int depth, int branching, double alpha, const QPoint& q,
                                 Seed seed) {
  if (depth < 0 || branching < 1)
    throw std::invalid_argument("pwit_resolvent_stream: bad tree shape");
  if (!(q.eta.imag() > 0.0))
    throw std::invalid_argument("pwit_resolvent_stream: need Im eta > 0");
  StreamRecursion rec;
  rec.depth = depth;
  rec.branching = branching;
  rec.expo = -2.0 / alpha;
  rec.q = q;
  rec.seed = seed;
  rec.level_offset.resize(static_cast<std::size_t>(depth) + 1);
  std::size_t off = 0, width = 1;
  for (int l = 0; l <= depth; ++l) {
    rec.level_offset[static_cast<std::size_t>(l)] = off;
    off += width;
    width *= static_cast<std::size_t>(branching);
  }
  const RootEntries r = rec.visit(0, 0);
  return QTransform{r.a, r.b};
}

PwitMcResult pwit_resolvent_mc(int depth, int branching, double alpha, const QPoint& q,
                               std::size_t trees, Seed seed) {
  if (trees < 1) throw std::invalid_argument("pwit_resolvent_mc: need >= 1 tree");
  std::vector<Complex> as(trees), bs(trees);
  parallel_for(trees, [&](std::size_t r) {
    const QTransform g = pwit_resolvent_stream(depth, branching, alpha, q, seed.sub(r));
    as[r] = g.a;
    bs[r] = g.b;
  });
  PwitMcResult out;
  out.trees = trees;
  out.mean.a = pairwise_sum(as) / static_cast<double>(trees);
  out.mean.b = pairwise_sum(bs) / static_cast<double>(trees);
  std::vector<double> dev(trees);
  for (std::size_t r = 0; r < trees; ++r) {
    const double d = as[r].imag() - out.mean.a.imag();
    dev[r] = d * d;
  }
  const double var = pairwise_sum(dev) / static_cast<double>(trees);
  out.se_a_imag = std::sqrt(var / static_cast<double>(trees));
  return out;
}

double tail_index_estimate(std::vector<double> samples, double fraction) {
  if (samples.size() < 100)
    throw std::invalid_argument("tail_index_estimate: need >= 100 samples");
  if (!(fraction > 0.0) || fraction > 0.2)
    throw std::invalid_argument("tail_index_estimate: fraction must lie in (0, 0.2]");
  std::sort(samples.begin(), samples.end(), std::greater<>());
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(fraction * static_cast<double>(samples.size())));
  if (!(samples[k] > 0.0))
    throw std::invalid_argument("tail_index_estimate: non-positive order statistics in the tail");
  std::vector<double> logs(k);
  for (std::size_t i = 0; i < k; ++i) logs[i] = std::log(samples[i] / samples[k]);
  const double hill = pairwise_mean(logs);
  return 1.0 / hill;
}

}  // namespace rmt
