#include "core/random.hpp"

#include <cmath>

#include "core/subspace.hpp"

namespace incl {

Complex GaussianSampler::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return Complex(re, im) / std::sqrt(2.0);
}

Vector GaussianSampler::vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

Element GaussianSampler::element(const MultiMatrixAlgebra& algebra) {
  return Element::from_vector(algebra, vector(algebra.vector_dim()));
}

Element GaussianSampler::element_in(const Subspace& space) { return space.element(vector(space.dim())); }

}  // namespace incl
