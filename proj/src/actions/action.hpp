#pragma once

#include <optional>
#include <vector>

#include "actions/group.hpp"
#include "expectations/expectation.hpp"

namespace incl {

struct ActionReport {
  double unit_defect = 0.0;
  double multiplicativity_defect = 0.0;
  double adjoint_defect = 0.0;
  double min_singular_value = 0.0;  // over all alpha_g as linear maps
  double composition_defect = 0.0;  // max ||alpha_g alpha_h - alpha_gh||
  double identity_defect = 0.0;     // ||alpha_unit - id||
  bool pass = false;
};

/// Action of a finite group by *-automorphisms, each given as a linear map on
/// canonical coordinates.
class GroupAction {
 public:
  /// Throws Verification naming the first broken law.
  static GroupAction create(FiniteGroup group, MultiMatrixAlgebra algebra, std::vector<Matrix> maps,
                            const Tolerance& tol);

  const FiniteGroup& group() const { return group_; }
  const MultiMatrixAlgebra& algebra() const { return algebra_; }
  const Matrix& map(int g) const { return maps_[g]; }
  const ActionReport& report() const { return report_; }

  Element apply(int g, const Element& x) const;

 private:
  GroupAction(FiniteGroup group, MultiMatrixAlgebra algebra, std::vector<Matrix> maps, ActionReport report);

  FiniteGroup group_;
  MultiMatrixAlgebra algebra_;
  std::vector<Matrix> maps_;
  ActionReport report_;
};

ActionReport verify_action(const FiniteGroup& group, const MultiMatrixAlgebra& algebra,
                           const std::vector<Matrix>& maps, const Tolerance& tol);

/// Canonical coordinate matrix of x -> u x u*.
Matrix conjugation_map(const Element& u);

/// alpha_g(delta_h) = delta_{gh} on C(G).
GroupAction translation_action(const FiniteGroup& group, const Tolerance& tol);
/// Z/2 exchanging the two summands of M_n (+) M_n.
GroupAction swap_action(int n, const Tolerance& tol);
/// alpha_g = Ad u_g.
GroupAction inner_action(const FiniteGroup& group, std::span<const Element> unitaries, const Tolerance& tol);
GroupAction trivial_action(const FiniteGroup& group, const MultiMatrixAlgebra& algebra, const Tolerance& tol);

/// Joint fixed points of alpha_g for g in `elements` (all of G when empty).
Subalgebra fixed_point_algebra(const GroupAction& act, const Tolerance& tol, std::span<const int> elements = {});

/// E(x) = (1/#G) sum_g alpha_g(x) onto the fixed-point algebra.
ConditionalExpectation canonical_expectation(const GroupAction& act, const Tolerance& tol);

struct InnerResult {
  std::optional<Element> unitary;
  int intertwiner_dim = 0;
  double min_singular_value = 0.0;  // of the sampled intertwiner
  double implementation_defect = 0.0;
};

/// Looks for a unitary u with alpha_g = Ad u.
InnerResult is_inner(const GroupAction& act, int g, const Tolerance& tol);

struct PartitionReport {
  double projection_defect = 0.0;
  double sum_defect = 0.0;
  double centrality_defect = 0.0;
  double equivariance_defect = 0.0;
  bool pass = false;
};

/// Checks {e_g} (indexed by group element) as a Rohlin partition of unity.
PartitionReport rohlin_partition_check(const GroupAction& act, std::span<const Element> partition,
                                       const Tolerance& tol);

struct CriterionReport {
  double projection_defect = 0.0;
  double centrality_defect = 0.0;
  double expectation_defect = 0.0;  // ||E(e) - (1/#G) 1||
  bool criterion_ok = false;
  PartitionReport partition;
  bool pass = false;
};

struct CriterionResult {
  std::vector<Element> partition;  // e_g = alpha_g(e)
  CriterionReport report;
};

/// E(e) = (1/#G) 1 for the canonical expectation, then e_g = alpha_g(e) as a partition.
CriterionResult rohlin_criterion(const GroupAction& act, const Element& e, const Tolerance& tol);

struct SubgroupInclusionReport {
  double index_scalar = 0.0;          // Index F
  double expected_index = 0.0;        // |G| / |H|
  double index_error = 0.0;
  double f_of_projection_defect = 0.0;  // ||F(e_H) - (Index F)^{-1}||
  double e_of_projection = 0.0;         // E(e_H) as a scalar
  double e_of_projection_defect = 0.0;  // ||E(e_H) - |H|/|G|||
  double composition_defect = 0.0;      // max ||E(x) - F(E_H(x))||
  double membership_defect = 0.0;       // distance of e_H from Q^H
  bool pass = false;
};

struct SubgroupInclusion {
  Subalgebra a;  // Q^H
  Subalgebra p;  // Q^G
  ConditionalExpectation e_h;  // Q -> Q^H
  ConditionalExpectation f;    // Q^H -> Q^G
  ConditionalExpectation e;    // Q -> Q^G
  Element projection;          // e_H
  std::vector<Element> coset_projections;  // e_{Hx} over right cosets
  SubgroupInclusionReport report;
};

/// Q^G in Q^H with F = E restricted to Q^H and e_H = sum_{h in H} e_h.
/// Throws InvalidArgument when H is not a subgroup or the partition is malformed.
SubgroupInclusion subgroup_inclusion(const GroupAction& act, std::span<const int> subgroup,
                                     std::span<const Element> partition, const Tolerance& tol);

}  // namespace incl
