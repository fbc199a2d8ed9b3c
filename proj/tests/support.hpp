#pragma once

#include <vector>

#include "actions/action.hpp"
#include "core/random.hpp"
#include "expectations/expectation.hpp"

namespace incl::fixtures {

inline Subalgebra diagonal(int n, const Tolerance& tol) {
  const auto alg = MultiMatrixAlgebra::full_matrix(n);
  std::vector<Element> units;
  for (int i = 0; i < n; ++i) units.push_back(Element::matrix_unit(alg, 0, i, i));
  return generated_subalgebra(alg, units, tol);
}

inline ConditionalExpectation pinching(int n, const Tolerance& tol) {
  const std::vector<double> w{1.0};
  return trace_preserving_expectation(MultiMatrixAlgebra::full_matrix(n), diagonal(n, tol), w, tol);
}

inline Element block_diag(const MultiMatrixAlgebra& alg, std::vector<Matrix> blocks) {
  return Element(alg, std::move(blocks));
}

inline double max_abs(const Element& x) {
  double m = 0.0;
  for (int r = 0; r < x.num_blocks(); ++r) m = std::max(m, x.block(r).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace incl::fixtures
