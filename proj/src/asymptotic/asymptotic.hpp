#pragma once

#include <functional>
#include <span>
#include <vector>

#include "expectations/expectation.hpp"

namespace incl {

struct EmbeddingReport {
  double unit_defect = 0.0;
  double multiplicativity_defect = 0.0;  // phi(x g) = phi(x) phi(g) over a basis x and generators g
  double adjoint_defect = 0.0;
  double injectivity_margin = 0.0;
  bool pass = false;
};

/// Canonical coordinate matrix of a linear map between multi-matrix algebras.
Matrix linear_map_matrix(const MultiMatrixAlgebra& from, const MultiMatrixAlgebra& to,
                         const std::function<Element(const Element&)>& f);

/// x -> x (x) 1_k on M_n.
Matrix ampliation_map(int n, int k);

EmbeddingReport verify_embedding(const MultiMatrixAlgebra& from, const MultiMatrixAlgebra& to, const Matrix& map,
                                 const Tolerance& tol);

/// Expectation, generators and target value of E(e) at one stage.
struct StageData {
  ConditionalExpectation expectation;
  std::vector<Element> generators;
  Element target;
};

class InductiveSystem {
 public:
  /// Throws Verification when an embedding is not a unital injective *-homomorphism.
  static InductiveSystem create(std::vector<StageData> stages, std::vector<Matrix> embeddings, const Tolerance& tol);

  int size() const { return static_cast<int>(stages_.size()); }
  const StageData& stage(int n) const { return stages_.at(n); }
  const MultiMatrixAlgebra& algebra(int n) const { return stages_.at(n).expectation.ambient(); }
  const Matrix& embedding(int n) const { return embeddings_.at(n); }
  const std::vector<EmbeddingReport>& reports() const { return reports_; }

  /// Image of a stage-n element at stage m >= n.
  Element push_forward(int n, int m, const Element& x) const;

 private:
  InductiveSystem(std::vector<StageData> stages, std::vector<Matrix> embeddings, std::vector<EmbeddingReport> reports);

  std::vector<StageData> stages_;
  std::vector<Matrix> embeddings_;
  std::vector<EmbeddingReport> reports_;
};

struct StageDefect {
  int stage = 0;
  double projection_defect = 0.0;   // max(||e^2 - e||, ||e - e*||)
  double commutation_defect = 0.0;  // max_a ||ea - ae||
  double expectation_defect = 0.0;  // ||E(e) - target||
  double max_defect() const;
};

/// Operator-norm defects of e at one stage.
StageDefect rohlin_defect(int stage, const Element& e, std::span<const Element> gens, const ConditionalExpectation& e_map,
                          const Element& target);

struct DefectCurve {
  std::vector<StageDefect> records;
  bool decreasing = false;  // max defect non-increasing along the stages
  bool vanishing = false;   // max defect at the last stage within eq_tol
};

DefectCurve defect_curve(const InductiveSystem& system, std::span<const Element> candidates, const Tolerance& tol);

/// M_2 -> M_4 -> ... -> M_{2^stages} by x -> x (x) 1, each stage carrying the
/// canonical expectation of Ad(diag(1, -1) (x) 1) and target (1/2) 1.
InductiveSystem inner_z2_system(int stages, const Tolerance& tol);

}  // namespace incl
