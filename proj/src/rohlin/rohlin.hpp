#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "basic/basic_construction.hpp"

namespace incl {

/// Exact-level representative of a projection in the sequence algebra: the
/// periodic sequence e_1, ..., e_k, e_1, ... Every identity is checked stage
/// by stage, and x -> xe is injective iff x -> (x e_1, ..., x e_k) is.
/// A single element is a sequence of length one.
using ProjectionSequence = std::vector<Element>;

/// Smallest singular value of x -> (x e_1, ..., x e_k) on an orthonormal basis of `space`.
double stacked_injectivity_margin(const Subalgebra& space, std::span<const Element> seq);

struct RohlinReport {
  int stages = 0;
  double projection_defect = 0.0;
  double membership_defect = 0.0;   // distance of each stage from A
  double centrality_defect = 0.0;   // max ||[e, a]|| over generators of A
  double expectation_defect = 0.0;  // max ||E(e) - Ind^{-1}||
  double injectivity_margin = 0.0;  // x -> xe on A
  double injectivity_margin_p = 0.0;  // x -> xe on P, reported alongside
  bool pass = false;
};

RohlinReport rohlin_check(const ConditionalExpectation& e, const IndexValue& index, std::span<const Element> seq,
                          const Tolerance& tol);

struct ApproxRepReport {
  int stages = 0;
  double projection_defect = 0.0;
  double membership_defect = 0.0;   // distance of each stage from P
  double centrality_defect = 0.0;   // max ||[e, p]|| over generators of P
  double module_defect = 0.0;       // max ||e x e - E(x) e|| over a basis of A
  double injectivity_margin = 0.0;  // x -> xe on P
  bool pass = false;
};

ApproxRepReport approx_rep_check(const ConditionalExpectation& e, std::span<const Element> seq,
                                 const Tolerance& tol);

struct ForwardReport {
  RohlinReport precondition;
  double jones_identity_defect = 0.0;      // e_P l(e) e_P = l(Ind^{-1}) e_P
  double projection_identity_defect = 0.0; // l(e) e_P l(e) = l(Ind^{-1}) l(e)
  double dual_module_defect = 0.0;         // l(e) z l(e) = Ehat(z) l(e) over a basis of B
  ApproxRepReport dual_witness;            // approx_rep_check(Ehat, l(e))
  double max_defect = 0.0;
  bool pass = false;
};

struct ForwardResult {
  ProjectionSequence witness;  // lambda(e_k)
  ForwardReport report;
};

/// Rohlin witness for E -> approximate-representability witness for the dual expectation.
ForwardResult duality_forward(const BasicConstruction& bc, std::span<const Element> seq, const Tolerance& tol);

struct BackwardReport {
  ApproxRepReport precondition;
  double projection_defect = 0.0;
  double membership_defect = 0.0;   // f in B
  double centrality_defect = 0.0;   // f commutes with generators of B
  double expectation_defect = 0.0;  // ||Ehat(f) - Ind^{-1}||
  double injectivity_margin = 0.0;  // z -> zf on B
  double jones_defect = 0.0;        // f e_P = l(e) e_P = e_P f
  RohlinReport dual_witness;        // rohlin_check(Ehat, f)
  double max_defect = 0.0;
  bool pass = false;
};

struct BackwardResult {
  ProjectionSequence witness;  // f_k
  BackwardReport report;
};

/// Approximate-representability witness e in P for E (bc is the basic construction of E):
/// f = sum l(u_i) l(e) e_P l(v_i) should be a Rohlin witness for the dual expectation.
BackwardResult duality_backward(const BasicConstruction& bc, const QuasiBasis& qb, std::span<const Element> seq,
                                const Tolerance& tol);

struct RecoverReport {
  double membership_defect = 0.0;  // e in P
  double centrality_defect = 0.0;  // e commutes with P
  double jones_defect = 0.0;       // l(e) e_P = f e_P
  double pull_back_defect = 0.0;   // distance of Ind Ehat(f e_P) from l(A)
  ApproxRepReport witness;         // approx_rep_check(E, e)
  double max_defect = 0.0;
  bool pass = false;
};

struct RecoverResult {
  ProjectionSequence witness;
  RecoverReport report;
};

/// e = Ind Ehat(f e_P), pulled back along lambda.
RecoverResult recover_rohlin_projection(const BasicConstruction& bc, std::span<const Element> seq,
                                        const Tolerance& tol);

struct RoundTripReport {
  ForwardReport forward;
  BackwardReport backward;
  RecoverReport recover;
  double recovered_vs_image = 0.0;  // max ||e'_k - l(e_k)||
  double recovered_vs_input = 0.0;  // max ||l^{-1}(e'_k) - e_k||
  double max_defect = 0.0;
  bool pass = false;
};

/// forward on E, then backward and recover one level up, then compare with the input.
RoundTripReport duality_roundtrip(const BasicConstruction& bc, std::span<const Element> seq, const Tolerance& tol);

struct RelativeCommutantReport {
  int dim = 0;
  double containment_defect = 0.0;
  bool contained = false;
  bool irreducible = false;
};

/// P' cap A.
RelativeCommutantReport relative_commutant_report(const Subalgebra& a, const Subalgebra& p, const Tolerance& tol);

struct BetaReport {
  RohlinReport precondition;
  double intertwining_defect = 0.0;  // ||beta(x) e - x e||
  double unit_defect = 0.0;
  double adjoint_defect = 0.0;
  double multiplicativity_defect = 0.0;
  double identity_on_p_defect = 0.0;
  double range_defect = 0.0;          // beta(x) in P
  double injectivity_margin = 0.0;    // x -> (beta_k(x))_k on A
  double uniqueness_margin = 0.0;     // P -> P e, y -> y e
  double resolve_defect = 0.0;        // least-squares y with y e = x e against beta(x)
  double max_defect = 0.0;
  bool pass = false;
};

/// beta_k(x) = Ind E(x e_k). Throws Precondition when the witness fails rohlin_check.
BetaReport beta_map(const ConditionalExpectation& e, const IndexValue& index, std::span<const Element> seq,
                    const Tolerance& tol);

}  // namespace incl
