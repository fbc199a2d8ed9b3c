#pragma once

#include <random>

#include "core/algebra.hpp"

namespace incl {

class Subspace;

/// Seedable source of standard complex Gaussian samples.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  Complex complex_normal();
  Vector vector(int n);
  /// Independent standard complex Gaussian entries in every block.
  Element element(const MultiMatrixAlgebra& algebra);
  /// Gaussian coordinates in the orthonormal basis of `space`.
  Element element_in(const Subspace& space);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace incl
