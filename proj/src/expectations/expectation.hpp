#pragma once

#include <span>
#include <string>

#include "core/subspace.hpp"

namespace incl {

/// Linear functional x -> tr(density * x).
class TraceFunctional {
 public:
  explicit TraceFunctional(Element density) : density_(std::move(density)) {}
  Complex operator()(const Element& x) const { return (density_ * x).trace(); }
  const Element& density() const { return density_; }

 private:
  Element density_;
};

/// tau(x) = sum_r w_r tr(x_r) on the ambient blocks.
TraceFunctional weighted_trace(const MultiMatrixAlgebra& algebra, std::span<const double> weights);

/// The trace on `algebra` that restricts to the ordinary matrix trace on each simple
/// summand, read off from its central decomposition.
TraceFunctional uniform_trace(const Subalgebra& algebra, const Tolerance& tol);

struct ExpectationReport {
  bool pass = false;
  double unit_defect = 0.0;         // ||E(1) - 1||
  double idempotence_defect = 0.0;  // max_b ||E(E(b)) - E(b)||
  double range_defect = 0.0;        // E(A) in P and E|_P = id
  double bimodule_defect = 0.0;     // max ||E(pa) - pE(a)||, ||E(ap) - E(a)p||
  double positivity_defect = 0.0;   // max(0, -min eig E(x*x)) over samples
  bool unit_ok = true;
  bool idempotence_ok = true;
  bool range_ok = true;
  bool bimodule_ok = true;
  bool positivity_ok = true;

  double max_defect() const;
  /// "expectation: <axiom> defect = <value>" for the first failing axiom, empty on pass.
  std::string failure() const;
};

/// Checks the conditional-expectation axioms of a candidate map given in the
/// orthonormal coordinates of `domain`.
ExpectationReport verify_expectation(const Subalgebra& domain, const Subalgebra& range,
                                     const Matrix& map, const Tolerance& tol);

/// A verified conditional expectation from `domain` onto `range`.
///
/// The map is stored in the orthonormal coordinates of the domain; when the
/// domain is a whole multi-matrix algebra these are the canonical matrix-unit
/// coordinates.
class ConditionalExpectation {
 public:
  /// Throws Verification naming the broken axiom.
  static ConditionalExpectation create(Subalgebra domain, Subalgebra range, Matrix map,
                                       const Tolerance& tol);
  /// `ambient_map` acts on canonical coordinates of the ambient algebra.
  static ConditionalExpectation from_ambient_map(Subalgebra domain, Subalgebra range,
                                                 const Matrix& ambient_map, const Tolerance& tol);

  const Subalgebra& domain() const { return domain_; }
  const Subalgebra& range() const { return range_; }
  const Matrix& map() const { return map_; }
  const ExpectationReport& report() const { return report_; }
  const MultiMatrixAlgebra& ambient() const { return domain_.ambient(); }

  Element operator()(const Element& x) const;
  /// The map on canonical ambient coordinates (zero on the orthogonal complement of the domain).
  Matrix ambient_matrix() const;

 private:
  ConditionalExpectation(Subalgebra domain, Subalgebra range, Matrix map, ExpectationReport report);

  Subalgebra domain_;
  Subalgebra range_;
  Matrix map_;
  ExpectationReport report_;
};

/// Orthogonal projection onto `range` for <x, y> = tau(x* y), tau the weighted trace.
ConditionalExpectation trace_preserving_expectation(const Subalgebra& domain, const Subalgebra& range,
                                                    std::span<const double> weights, const Tolerance& tol);
ConditionalExpectation trace_preserving_expectation(const MultiMatrixAlgebra& algebra,
                                                    const Subalgebra& range, std::span<const double> weights,
                                                    const Tolerance& tol);

struct FaithfulnessReport {
  bool faithful = false;
  double margin = 0.0;  // smallest eigenvalue of the Gram form tau_P(E(x* y))
};

FaithfulnessReport is_faithful(const ConditionalExpectation& e, const Tolerance& tol);

/// Gram matrix G_ij = tau_P(E(b_i* b_j)) over the domain basis, tau_P the uniform trace on the range.
Matrix expectation_gram(const ConditionalExpectation& e, const Tolerance& tol);

/// Sampled estimate of the norm of E as a map on (domain, operator norm).
double sampled_map_norm(const ConditionalExpectation& e, const Tolerance& tol);

}  // namespace incl
