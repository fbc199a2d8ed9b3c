#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/algebra.hpp"

namespace incl {

/// Linear subspace of a multi-matrix algebra with a basis orthonormal for tr(x* y).
///
/// The basis is stored as a (vector_dim x dim) matrix whose columns are canonical
/// coordinate vectors. Coordinates of an element are taken in that basis.
class Subspace {
 public:
  /// `basis` must have orthonormal columns (checked to 1e-8).
  Subspace(MultiMatrixAlgebra ambient, Matrix basis);

  /// The whole algebra with the canonical matrix-unit basis.
  static Subspace whole(const MultiMatrixAlgebra& ambient);
  static Subspace span(const MultiMatrixAlgebra& ambient, std::span<const Element> elements,
                       double rank_tol);
  static Subspace span_vectors(const MultiMatrixAlgebra& ambient, const Matrix& columns,
                               double rank_tol);

  const MultiMatrixAlgebra& ambient() const { return ambient_; }
  const Matrix& basis() const { return *basis_; }
  int dim() const { return static_cast<int>(basis_->cols()); }
  bool is_whole() const { return dim() == ambient_.vector_dim(); }

  Element basis_element(int k) const;
  std::vector<Element> basis_elements() const;

  Vector coordinates(const Element& x) const;
  Vector coordinates(const Vector& canonical) const;
  Element element(const Vector& coords) const;
  Element project(const Element& x) const;
  /// Frobenius distance from x to the subspace.
  double distance(const Element& x) const;
  /// Largest distance of an orthonormal basis vector of `other` to this subspace.
  double containment_defect(const Subspace& other) const;

 private:
  MultiMatrixAlgebra ambient_;
  std::shared_ptr<const Matrix> basis_;
};

struct SubalgebraReport {
  bool pass = false;
  double unit_defect = 0.0;
  double adjoint_defect = 0.0;
  double product_defect = 0.0;
  bool unit_ok = true;
  bool adjoint_ok = true;
  bool product_ok = true;

  /// Name of the first broken axiom, empty on success.
  std::string failure() const;
};

/// A unital *-closed subspace, closed under multiplication within tolerance.
class Subalgebra {
 public:
  /// Checks unit, adjoint closure and pairwise product closure of the basis.
  /// Throws Verification with the broken axiom on failure.
  static Subalgebra verified(Subspace space, const Tolerance& tol);
  static Subalgebra whole(const MultiMatrixAlgebra& ambient);

  const Subspace& space() const { return space_; }
  const MultiMatrixAlgebra& ambient() const { return space_.ambient(); }
  int dim() const { return space_.dim(); }
  bool contains_unit() const { return true; }
  /// Elements generating this subalgebra as a unital *-algebra.
  const std::vector<Element>& generators() const { return *generators_; }
  const SubalgebraReport& report() const { return report_; }

  Element basis_element(int k) const { return space_.basis_element(k); }
  std::vector<Element> basis_elements() const { return space_.basis_elements(); }
  Vector coordinates(const Element& x) const { return space_.coordinates(x); }
  Element element(const Vector& coords) const { return space_.element(coords); }

 private:
  Subalgebra(Subspace space, std::vector<Element> generators, SubalgebraReport report);
  friend Subalgebra generated_subalgebra(const MultiMatrixAlgebra&, std::span<const Element>,
                                         const Tolerance&);

  Subspace space_;
  std::shared_ptr<const std::vector<Element>> generators_;
  SubalgebraReport report_;
};

SubalgebraReport check_subalgebra(const Subspace& space, const Tolerance& tol);

/// Smallest unital *-subalgebra containing `generators`.
Subalgebra generated_subalgebra(const MultiMatrixAlgebra& ambient,
                                std::span<const Element> generators, const Tolerance& tol);

/// {x in ambient : [x, b] = 0 and [x, b*] = 0 for every basis element b of s}.
Subalgebra commutant_in(const MultiMatrixAlgebra& ambient, const Subspace& s, const Tolerance& tol);

/// {x in container : [x, s] = 0 for every s in `elements`}. Pass a *-closed set.
Subalgebra relative_commutant(const Subalgebra& container, std::span<const Element> elements,
                              const Tolerance& tol);

/// Z(A) = A cap A'.
Subalgebra center(const Subalgebra& algebra, const Tolerance& tol);

/// One simple summand A z_r of a subalgebra.
struct CentralSummand {
  Element projection;  // minimal central projection z_r
  int dim = 0;         // dim A z_r
  int block_dim = 0;   // n_r with A z_r ~ M_{n_r}
};

/// Minimal central projections and block sizes, ordered by ascending eigenvalue of a
/// seeded random central self-adjoint element.
std::vector<CentralSummand> central_decomposition(const Subalgebra& algebra, const Tolerance& tol);

/// Orthonormal basis of the part of span(candidates) not already in span(basis).
Matrix extend_orthonormal(const Matrix& basis, const Matrix& candidates, double rank_tol);

/// Orthonormal basis (columns) of the numerical null space of k at cutoff rank_tol * max(1, sigma_max).
Matrix null_space(const Matrix& k, double rank_tol);

/// Stack canonical coordinate vectors as columns.
Matrix as_columns(std::span<const Element> elements);

}  // namespace incl
