#include "index/lsqr.hpp"

#include <cmath>

namespace incl {

namespace {

LsqrResult lsqr_pass(const LinearOperator& apply, const LinearOperator& apply_adjoint, const Vector& b, int n,
                     double tol, int max_iterations) {
  LsqrResult out;
  out.x = Vector::Zero(n);
  double beta = b.norm();
  if (beta == 0.0) return out;
  Vector u = b / beta;
  Vector v = apply_adjoint(u);
  double alpha = v.norm();
  if (alpha == 0.0) {
    out.residual_norm = beta;
    return out;
  }
  v /= alpha;
  Vector w = v;
  double phibar = beta;
  double rhobar = alpha;
  double anorm2 = 0.0;
  const double bnorm = beta;

  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    u = apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    anorm2 += alpha * alpha + beta * beta;
    v = apply_adjoint(u) - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;
    out.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    const double anorm = std::sqrt(anorm2);
    const double normal_residual = phibar * alpha * std::abs(c);
    if (phibar <= tol * bnorm) break;
    if (normal_residual <= tol * anorm * phibar) break;
    if (alpha == 0.0) break;
  }
  return out;
}

}  // namespace

LsqrResult lsqr(const LinearOperator& apply, const LinearOperator& apply_adjoint, const Vector& b, int n,
                double tol, int max_iterations) {
  if (max_iterations <= 0) max_iterations = 4 * n + 50;
  LsqrResult result = lsqr_pass(apply, apply_adjoint, b, n, tol, max_iterations);
  Vector r = b - apply(result.x);
  result.residual_norm = r.norm();
  // A few refinement sweeps on the residual recover digits lost to the recurrences.
  for (int sweep = 0; sweep < 3 && result.residual_norm > 1e-13 * std::max(1.0, b.norm()); ++sweep) {
    LsqrResult corr = lsqr_pass(apply, apply_adjoint, r, n, tol, max_iterations);
    const Vector candidate = result.x + corr.x;
    const Vector rc = b - apply(candidate);
    result.iterations += corr.iterations;
    if (rc.norm() >= result.residual_norm) break;
    result.x = candidate;
    r = rc;
    result.residual_norm = rc.norm();
  }
  return result;
}

}  // namespace incl
