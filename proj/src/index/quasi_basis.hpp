#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expectations/expectation.hpp"

namespace incl {

struct QuasiBasisPair {
  Element u;
  Element v;
};

struct QuasiBasisReport {
  double left_defect = 0.0;   // max_a ||sum u_i E(v_i a) - a||
  double right_defect = 0.0;  // max_a ||sum E(a u_i) v_i - a||
  int iterations = 0;         // LSQR iterations, 0 for the dense path
  std::string method;         // "dense", "lsqr" or "dual"
  bool full_basis = true;     // identities checked on every basis element
};

/// Pairs {(u_i, v_i)} with a = sum u_i E(v_i a) = sum E(a u_i) v_i.
class QuasiBasis {
 public:
  QuasiBasis(std::vector<QuasiBasisPair> pairs, QuasiBasisReport report)
      : pairs_(std::move(pairs)), report_(std::move(report)) {}

  const std::vector<QuasiBasisPair>& pairs() const { return pairs_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  const QuasiBasisReport& report() const { return report_; }

 private:
  std::vector<QuasiBasisPair> pairs_;
  QuasiBasisReport report_;
};

/// Left identity defect of the pairs over the full domain basis (or `max_checked`
/// random elements when the domain is larger than that).
double left_identity_defect(const ConditionalExpectation& e, const std::vector<QuasiBasisPair>& pairs,
                            const Tolerance& tol, int max_checked = 0);
double right_identity_defect(const ConditionalExpectation& e, const std::vector<QuasiBasisPair>& pairs,
                             const Tolerance& tol, int max_checked = 0);

/// Fixes v_j to the orthonormal basis of the domain and solves
/// sum_j u_j E(v_j a_k) = a_k for the u_j (minimum-norm solution).
///
/// Throws InfiniteIndex when the system is inconsistent beyond eq_tol and
/// Verification when the right identity fails for the solved pairs.
QuasiBasis solve_quasi_basis(const ConditionalExpectation& e, const Tolerance& tol);

/// Same, with a caller-chosen v side (any spanning family of the domain).
QuasiBasis solve_quasi_basis(const ConditionalExpectation& e, std::span<const Element> v_side,
                             const Tolerance& tol);

/// Checks both identities for given pairs and wraps them; throws Verification on failure.
QuasiBasis verified_quasi_basis(const ConditionalExpectation& e, std::vector<QuasiBasisPair> pairs,
                                std::string method, const Tolerance& tol, int max_checked = 0);

struct IndexValue {
  Element element;
  std::optional<double> scalar;
  double centrality_defect = 0.0;
  double adjoint_defect = 0.0;
  double min_eigenvalue = 0.0;
  double min_singular_value = 0.0;
  bool invertible = false;
};

/// Index E = sum u_i v_i, checked central, self-adjoint and positive.
/// Throws Verification when any of those fails.
IndexValue watatani_index(const ConditionalExpectation& e, const QuasiBasis& qb, const Tolerance& tol);

struct EInverseResult {
  Element value;
  double commutation_defect = 0.0;  // max ||[value, a]|| over generators a of the domain
};

/// E^{-1}(x) = sum u_i x v_i for x commuting with the range. Throws Precondition
/// when x is not in the commutant of the range.
EInverseResult e_inverse_map(const ConditionalExpectation& e, const QuasiBasis& qb, const Element& x,
                             const Tolerance& tol);

/// Sampled estimate of the largest c with E(x*x) >= c x*x.
double pimsner_popa_margin(const ConditionalExpectation& e, int samples, const Tolerance& tol);

}  // namespace incl
