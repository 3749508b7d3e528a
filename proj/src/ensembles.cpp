#include "rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmt/numeric.hpp"

namespace rmt {

namespace {

Complex draw_phase(PhaseKind phase, Rng& g) {
  switch (phase) {
    case PhaseKind::kDeterministicOne:
      return {1.0, 0.0};
    case PhaseKind::kUniformCircle: {
      const double th = 2.0 * M_PI * g.uniform_co();
      return {std::cos(th), std::sin(th)};
    }
    case PhaseKind::kRademacher:
      return {g.coin() ? 1.0 : -1.0, 0.0};
  }
  return {1.0, 0.0};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("tail index alpha must lie in (0,2)");
}

// Stream index of entry (i,j) in the infinite array, independent of n.
std::uint64_t entry_stream(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

}  // namespace

Complex draw_entry(const EntryLaw& law, Rng& g) {
  switch (law.kind) {
    case EntryKind::kComplexGaussian:
      return g.complex_normal();
    case EntryKind::kRealGaussian:
      return {g.normal(), 0.0};
    case EntryKind::kSymmetricBernoulli:
      return {g.coin() ? 1.0 : -1.0, 0.0};
    case EntryKind::kHeavyTailed: {
      const double mod = std::pow(g.uniform(), -1.0 / law.alpha);
      return mod * draw_phase(law.phase, g);
    }
  }
  return {0.0, 0.0};
}

ComplexMatrix sample_iid_matrix(int n, const EntryLaw& law, Seed seed) {
  if (n < 1) throw std::invalid_argument("sample_iid_matrix: invalid dimension");
  if (law.kind == EntryKind::kHeavyTailed) check_alpha(law.alpha);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rng g(seed.sub(entry_stream(i, j)));
      a(i, j) = draw_entry(law, g);
    }
  }
  return a;
}

std::vector<double> sample_kostlan_moduli(int n, Seed seed) {
  if (n < 1) throw std::invalid_argument("sample_kostlan_moduli: invalid dimension");
  std::vector<double> z(n);
  for (int k = 0; k < n; ++k) {
    Rng g(seed.sub(static_cast<std::uint64_t>(k)));
    z[k] = std::sqrt(g.gamma_int(static_cast<std::uint64_t>(k) + 1));
  }
  std::sort(z.begin(), z.end(), std::greater<>());
  return z;
}

double sample_kostlan_max(int n, Seed seed) {
  if (n < 1) throw std::invalid_argument("sample_kostlan_max: invalid dimension");
  double best = 0.0;
  for (int k = 0; k < n; ++k) {
    Rng g(seed.sub(static_cast<std::uint64_t>(k)));
    best = std::max(best, g.gamma_int(static_cast<std::uint64_t>(k) + 1));
  }
  return std::sqrt(best);
}

std::vector<double> sample_positive_stable(double alpha, std::size_t count, Seed seed) {
  check_alpha(alpha);
  if (count < 1) throw std::invalid_argument("sample_positive_stable: count must be >= 1");
  const double rho = alpha / 2.0;
  const double scale = std::pow(std::tgamma(1.0 - rho), 1.0 / rho);
  std::vector<double> s(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng g(seed.sub(i));
    s[i] = scale * stable_unit(rho, g);
  }
  return s;
}

std::vector<double> sample_poisson_weights(double alpha, std::size_t truncation, Seed seed) {
  check_alpha(alpha);
  if (truncation < 1) throw std::invalid_argument("sample_poisson_weights: K must be >= 1");
  Rng g(seed);
  std::vector<double> xi(truncation);
  double x = 0.0;
  for (std::size_t k = 0; k < truncation; ++k) {
    x += g.exponential();
    xi[k] = std::pow(x, -2.0 / alpha);
  }
  return xi;
}

PwitTree sample_pwit(int depth, int branching, double alpha, PhaseKind phase, Seed seed) {
  if (depth < 1 || branching < 1)
    throw std::invalid_argument("sample_pwit: depth and branching must be >= 1");
  check_alpha(alpha);

  PwitTree tree;
  tree.depth = depth;
  tree.branching = branching;
  std::size_t total = 1, level = 1;
  for (int d = 0; d < depth; ++d) {
    level *= static_cast<std::size_t>(branching);
    total += level;
  }
  tree.vertices.resize(total);

  // Vertex v's children marks come from v's own point process, stream v.
  std::size_t next = 1;
  std::size_t level_begin = 0, level_end = 1;
  for (int d = 0; d < depth; ++d) {
    for (std::size_t v = level_begin; v < level_end; ++v) {
      Rng g(seed.sub(v));
      tree.vertices[v].first_child = static_cast<int>(next);
      double y = 0.0;
      for (int k = 0; k < branching; ++k) {
        auto& child = tree.vertices[next++];
        y += g.exponential(2.0);
        child.parent = static_cast<int>(v);
        child.y = y;
        child.omega = draw_phase(phase, g);
        child.eps = g.coin();
      }
    }
    level_begin = level_end;
    level_end = next;
  }
  return tree;
}

}  // namespace rmt
