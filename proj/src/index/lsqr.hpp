#pragma once

#include <functional>

#include "core/types.hpp"

namespace incl {

using LinearOperator = std::function<Vector(const Vector&)>;

struct LsqrResult {
  Vector x;
  double residual_norm = 0.0;  // ||A x - b|| recomputed at exit
  int iterations = 0;
};

/// Paige-Saunders LSQR for min ||A x - b|| over complex vectors. Started from zero,
/// it returns the minimum-norm least-squares solution of a consistent system.
/// `apply` is A, `apply_adjoint` is A*, `n` the number of unknowns.
LsqrResult lsqr(const LinearOperator& apply, const LinearOperator& apply_adjoint, const Vector& b, int n,
                double tol = 1e-14, int max_iterations = 0);

}  // namespace incl
