// Seedable sampling of the random objects: entry laws, i.i.d. matrices,
// Kostlan layer moduli, one-sided stable variables, Poisson weights and
// truncated Poisson weighted infinite trees.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "rmt/rng.hpp"

namespace rmt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

enum class EntryKind {
  kComplexGaussian,   // mean 0, E|z|^2 = 1, independent re/im of variance 1/2
  kRealGaussian,      // mean 0, variance 1
  kSymmetricBernoulli,  // +-1 equiprobable
  kHeavyTailed,       // |X| = U^{-1/alpha} Pareto, times an independent phase
};

enum class PhaseKind {
  kDeterministicOne,
  kUniformCircle,
  kRademacher,
};

struct EntryLaw {
  EntryKind kind = EntryKind::kComplexGaussian;
  double alpha = 1.0;  // tail index, heavy-tailed only; in (0,2)
  PhaseKind phase = PhaseKind::kDeterministicOne;

  static EntryLaw complex_gaussian() { return {EntryKind::kComplexGaussian}; }
  static EntryLaw real_gaussian() { return {EntryKind::kRealGaussian}; }
  static EntryLaw bernoulli() { return {EntryKind::kSymmetricBernoulli}; }
  static EntryLaw heavy(double alpha, PhaseKind phase = PhaseKind::kDeterministicOne) {
    return {EntryKind::kHeavyTailed, alpha, phase};
  }

  bool is_real() const {
    return kind == EntryKind::kRealGaussian || kind == EntryKind::kSymmetricBernoulli ||
           (kind == EntryKind::kHeavyTailed && phase != PhaseKind::kUniformCircle);
  }
};

// One draw of the entry law, consuming from g.
Complex draw_entry(const EntryLaw& law, Rng& g);

// n x n matrix with i.i.d. entries. Entry (i,j) comes from the stream indexed
// by (i,j) row-major over the infinite array, so the top-left k x k minor is
// identical across n for a fixed seed.
ComplexMatrix sample_iid_matrix(int n, const EntryLaw& law, Seed seed);

// Descending reordering of Z_1..Z_n with Z_k^2 ~ Gamma(k,1); equal in law to
// the moduli of the eigenvalues of an n x n complex Ginibre matrix.
std::vector<double> sample_kostlan_moduli(int n, Seed seed);

// Largest of the Kostlan moduli only (the spectral-radius layer).
double sample_kostlan_max(int n, Seed seed);

// i.i.d. copies of the positive alpha/2-stable S with
// E exp(-xS) = exp(-Gamma(1-alpha/2) x^{alpha/2}).
std::vector<double> sample_positive_stable(double alpha, std::size_t count, Seed seed);

// K largest points xi_1 >= ... >= xi_K of the Poisson process with intensity
// (alpha/2) x^{-alpha/2-1} dx, realized as xi_k = x_k^{-2/alpha} over unit
// exponential cumulative sums x_k.
std::vector<double> sample_poisson_weights(double alpha, std::size_t truncation, Seed seed);

// Truncated Poisson weighted infinite tree. Vertex 0 is the root; vertices
// are stored in breadth-first order and every non-root vertex carries the
// mark triple (y, omega, eps) of the edge to its parent.
struct PwitTree {
  int depth = 0;
  int branching = 0;
  struct Vertex {
    int parent = -1;
    int first_child = -1;  // -1 for vertices on the truncation boundary
    double y = 0.0;        // cumulative Exp(rate 2) mark, increasing among siblings
    Complex omega{1.0, 0.0};
    bool eps = false;
  };
  std::vector<Vertex> vertices;

  std::size_t size() const { return vertices.size(); }
};

PwitTree sample_pwit(int depth, int branching, double alpha, PhaseKind phase, Seed seed);

}  // namespace rmt
