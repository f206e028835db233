#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "incompat/hermitian.hpp"

namespace incompat {

/// Seeded random source. Distributions are implemented on top of the raw
/// mt19937_64 stream (std::*_distribution is implementation-defined, which
/// would break byte-identical reruns).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n);  // in [0, n)

  double normal();
  Complex cnormal() { return Complex(normal(), normal()); }

  /// Random probability vector of length n (flat Dirichlet).
  std::vector<double> simplex(int n);

  /// Derive an independent child stream.
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// B B^dag for B with iid standard complex Gaussian entries.
HermitianOperator random_psd(int dim, Rng& rng);

DensityOperator random_density(int dim, Rng& rng);

/// Haar-ish random unitary (QR of a Ginibre matrix with phase fix).
CMatrix random_unitary(int dim, Rng& rng);

/// Random pure state on dim_a * dim_b with prescribed Schmidt coefficients
/// (squared coefficients summing to 1) and random local unitaries.
CVector random_pure_bipartite(int dim, const std::vector<double>& schmidt_sq, Rng& rng);

}  // namespace incompat
