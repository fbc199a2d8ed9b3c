#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "index/quasi_basis.hpp"

namespace incl {

/// GNS model of A for tau = tau_P o E, tau_P the uniform trace on P.
///
/// The Hilbert space is C^N, N = dim A, with eta(x) = G^{1/2} c(x) where c are
/// orthonormal coordinates of A and G_ij = tau(b_i* b_j), so the GNS inner
/// product becomes the standard one.
class GnsSpace {
 public:
  /// Throws Precondition when E is not faithful.
  GnsSpace(ConditionalExpectation e, const Tolerance& tol);

  const ConditionalExpectation& expectation() const { return e_; }
  const MultiMatrixAlgebra& operators() const { return operators_; }
  int dim() const { return e_.domain().dim(); }
  const Matrix& gram() const { return gram_; }

  Vector eta(const Element& x) const;
  /// Left regular representation.
  Element lambda(const Element& a) const;
  /// Orthogonal projection onto eta(P).
  Element jones_projection() const;
  /// Inverse of lambda on its image; `defect` receives the distance of t from lambda(A).
  Element pull_back(const Element& t, double* defect = nullptr) const;

 private:
  ConditionalExpectation e_;
  MultiMatrixAlgebra operators_;
  Matrix gram_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

struct BasicConstructionReport {
  double jones_projection_defect = 0.0;  // max(||e^2 - e||, ||e - e*||)
  double module_defect = 0.0;            // max_a ||e lambda(a) e - lambda(E(a)) e||
  double jones_commutation_defect = 0.0; // max_p ||[e, lambda(p)]||
  double homomorphism_defect = 0.0;      // lambda multiplicative and *-preserving on generators
  double well_definedness_residual = 0.0;
  double lemma_defect = 0.0;             // max_z ||z e - Ind Ehat(z e) e||
  int span_dim = 0;                      // dim span{lambda(x) e lambda(y)}
  int generated_dim = 0;                 // dim of the algebra generated by lambda(A) and e
  bool pass = false;
};

/// Concrete C*<A, e_P> inside M_N.
struct BasicConstruction {
  std::shared_ptr<const GnsSpace> gns;
  Element jones;
  Subalgebra algebra;  // B
  Subalgebra image;    // lambda(A)
  ConditionalExpectation dual;
  QuasiBasis quasi_basis;
  IndexValue index;
  BasicConstructionReport report;

  Element lambda(const Element& a) const { return gns->lambda(a); }
  const ConditionalExpectation& expectation() const { return gns->expectation(); }
};

/// Builds the GNS model, e_P, B and the dual expectation; throws Verification
/// when a construction identity fails.
BasicConstruction build_basic_construction(const ConditionalExpectation& e, const QuasiBasis& qb,
                                           const Tolerance& tol);
/// Solves the quasi-basis first.
BasicConstruction build_basic_construction(const ConditionalExpectation& e, const Tolerance& tol);

/// {(lambda(u_i) e_P lambda(Ind), e_P lambda(v_i))}, a quasi-basis for the dual expectation.
QuasiBasis dual_quasi_basis(const BasicConstruction& bc, const Tolerance& tol);

struct DualIndexReport {
  std::string method;  // how the dual quasi-basis was obtained
  std::optional<double> index_scalar;
  std::optional<double> dual_index_scalar;
  double difference = 0.0;
  double left_defect = 0.0;
  double right_defect = 0.0;
  bool pass = false;
};

/// Index of the dual expectation compared with Index E.
DualIndexReport dual_index_check(const BasicConstruction& bc, const Tolerance& tol);

struct TunnelReport {
  double expectation_defect = 0.0;  // ||E(e) - Ind^{-1}||
  double projection_defect = 0.0;
  bool full = false;
  double fullness_distance = 0.0;   // distance of 1 from span{x e y : x, y in A}
  int q_dim = 0;
  bool f_verified = false;
  std::string f_failure;
  int p_span_dim = 0;               // dim span{x e y : x, y in P}
  int a_dim = 0;
  double module_defect = 0.0;       // max_p ||e p e - F(p) e||
  double injectivity_margin = 0.0;  // x -> xe on Q
  bool tunnel_verified = false;     // A is the basic construction of Q in P via e
  bool pass = false;
};

struct TunnelResult {
  std::optional<Subalgebra> q;
  std::optional<ConditionalExpectation> f;
  TunnelReport report;
};

/// Q = P cap {e}' and F(x) = Ind E(e x e). Throws Precondition when e is not a
/// projection with E(e) = Ind^{-1}.
TunnelResult tunnel_construction(const ConditionalExpectation& e, const IndexValue& index, const Element& proj,
                                 const Tolerance& tol);

struct TowerLevel {
  int level = 0;
  int ambient_dim = 0;  // dimension of the algebra being extended (GNS dimension)
  int basic_dim = 0;
  std::optional<double> index_scalar;
  double max_defect = 0.0;
};

/// Iterated basic constructions. Throws Limit when a GNS dimension exceeds `dim_cap`.
std::vector<TowerLevel> jones_tower(const ConditionalExpectation& e, int levels, const Tolerance& tol,
                                    int dim_cap = 64);

}  // namespace incl
