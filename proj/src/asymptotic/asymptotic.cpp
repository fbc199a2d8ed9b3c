#include "asymptotic/asymptotic.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "actions/action.hpp"

namespace incl {

Matrix linear_map_matrix(const MultiMatrixAlgebra& from, const MultiMatrixAlgebra& to,
                         const std::function<Element(const Element&)>& f) {
  const int n = from.vector_dim();
  Matrix m(to.vector_dim(), n);
  for (int k = 0; k < n; ++k) {
    Vector unit = Vector::Zero(n);
    unit(k) = 1.0;
    const Element y = f(Element::from_vector(from, unit));
    if (!(y.algebra() == to)) fail(ErrorKind::Conformance, "embedding: image not in the target algebra");
    m.col(k) = y.to_vector();
  }
  return m;
}

Matrix ampliation_map(int n, int k) {
  if (n < 1 || k < 1) fail(ErrorKind::InvalidArgument, "ampliation: sizes must be positive");
  const auto from = MultiMatrixAlgebra::full_matrix(n);
  const auto to = MultiMatrixAlgebra::full_matrix(n * k);
  const Matrix id = Matrix::Identity(k, k);
  return linear_map_matrix(from, to, [&](const Element& x) {
    Matrix big(n * k, n * k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) big.block(i * k, j * k, k, k) = x.block(0)(i, j) * id;
    return Element(to, {big});
  });
}

EmbeddingReport verify_embedding(const MultiMatrixAlgebra& from, const MultiMatrixAlgebra& to, const Matrix& map,
                                 const Tolerance& tol) {
  if (map.rows() != to.vector_dim() || map.cols() != from.vector_dim())
    fail(ErrorKind::Conformance, "embedding: map has the wrong shape");
  auto phi = [&](const Element& x) { return Element::from_vector(to, map * x.to_vector()); };
  EmbeddingReport rep;
  rep.unit_defect = operator_norm(phi(Element::unit(from)) - Element::unit(to));
  const Subalgebra whole = Subalgebra::whole(from);
  const auto basis = whole.basis_elements();
  // Multiplicative against generators on a basis implies multiplicative on all words.
  for (const auto& x : basis) {
    const Element px = phi(x);
    rep.adjoint_defect = std::max(rep.adjoint_defect, operator_norm(phi(x.adjoint()) - px.adjoint()));
    for (const auto& g : whole.generators())
      rep.multiplicativity_defect = std::max(rep.multiplicativity_defect, operator_norm(phi(x * g) - px * phi(g)));
  }
  Eigen::BDCSVD<Matrix> svd(map);
  rep.injectivity_margin = svd.singularValues()(svd.singularValues().size() - 1);
  rep.pass = within(rep.unit_defect, tol.eq_tol) && within(rep.adjoint_defect, tol.eq_tol) &&
             within(rep.multiplicativity_defect, tol.eq_tol) && rep.injectivity_margin > tol.rank_tol;
  return rep;
}

InductiveSystem::InductiveSystem(std::vector<StageData> stages, std::vector<Matrix> embeddings,
                                 std::vector<EmbeddingReport> reports)
    : stages_(std::move(stages)), embeddings_(std::move(embeddings)), reports_(std::move(reports)) {}

InductiveSystem InductiveSystem::create(std::vector<StageData> stages, std::vector<Matrix> embeddings,
                                        const Tolerance& tol) {
  if (stages.empty()) fail(ErrorKind::InvalidArgument, "inductive system: no stages");
  if (embeddings.size() + 1 != stages.size())
    fail(ErrorKind::InvalidArgument, "inductive system: one embedding between consecutive stages required");
  for (const auto& s : stages) {
    if (!(s.target.algebra() == s.expectation.ambient()))
      fail(ErrorKind::Conformance, "inductive system: target not in the stage algebra");
    for (const auto& g : s.generators)
      if (!(g.algebra() == s.expectation.ambient()))
        fail(ErrorKind::Conformance, "inductive system: generator not in the stage algebra");
  }
  std::vector<EmbeddingReport> reports;
  for (std::size_t n = 0; n < embeddings.size(); ++n) {
    const auto rep = verify_embedding(stages[n].expectation.ambient(), stages[n + 1].expectation.ambient(),
                                      embeddings[n], tol);
    if (!rep.pass)
      fail(ErrorKind::Verification, "embedding " + std::to_string(n) + ": not a unital injective *-homomorphism");
    reports.push_back(rep);
  }
  return InductiveSystem(std::move(stages), std::move(embeddings), std::move(reports));
}

Element InductiveSystem::push_forward(int n, int m, const Element& x) const {
  if (n < 0 || m < n || m >= size()) fail(ErrorKind::InvalidArgument, "push_forward: bad stage range");
  if (!(x.algebra() == algebra(n))) fail(ErrorKind::Conformance, "push_forward: element not in stage algebra");
  Vector v = x.to_vector();
  for (int k = n; k < m; ++k) v = embeddings_[k] * v;
  return Element::from_vector(algebra(m), v);
}

double StageDefect::max_defect() const {
  return std::max({projection_defect, commutation_defect, expectation_defect});
}

StageDefect rohlin_defect(int stage, const Element& e, std::span<const Element> gens, const ConditionalExpectation& e_map,
                          const Element& target) {
  const auto& alg = e_map.ambient();
  if (!(e.algebra() == alg) || !(target.algebra() == alg))
    fail(ErrorKind::Conformance, "rohlin_defect: element not in the stage algebra");
  StageDefect d;
  d.stage = stage;
  d.projection_defect = std::max(operator_norm(e * e - e), operator_norm(e - e.adjoint()));
  for (const auto& a : gens) {
    if (!(a.algebra() == alg)) fail(ErrorKind::Conformance, "rohlin_defect: generator not in the stage algebra");
    d.commutation_defect = std::max(d.commutation_defect, operator_norm(e * a - a * e));
  }
  d.expectation_defect = operator_norm(e_map(e) - target);
  return d;
}

DefectCurve defect_curve(const InductiveSystem& system, std::span<const Element> candidates, const Tolerance& tol) {
  if (static_cast<int>(candidates.size()) != system.size())
    fail(ErrorKind::InvalidArgument, "defect_curve: one candidate per stage required");
  DefectCurve curve;
  for (int n = 0; n < system.size(); ++n) {
    const auto& s = system.stage(n);
    curve.records.push_back(rohlin_defect(n, candidates[n], s.generators, s.expectation, s.target));
  }
  curve.decreasing = true;
  for (std::size_t n = 1; n < curve.records.size(); ++n)
    if (curve.records[n].max_defect() > curve.records[n - 1].max_defect() + tol.rank_tol) curve.decreasing = false;
  curve.vanishing = within(curve.records.back().max_defect(), tol.eq_tol);
  return curve;
}

InductiveSystem inner_z2_system(int stages, const Tolerance& tol) {
  if (stages < 1 || stages > 4) fail(ErrorKind::InvalidArgument, "inner_z2_system: stages must be in 1..4");
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<StageData> data;
  std::vector<Matrix> embeddings;
  for (int n = 1; n <= stages; ++n) {
    const int dim = 1 << n;
    const auto alg = MultiMatrixAlgebra::full_matrix(dim);
    Matrix u = Matrix::Identity(dim, dim);
    u.bottomRightCorner(dim / 2, dim / 2) *= -1.0;
    const std::vector<Element> unitaries{Element::unit(alg), Element(alg, {u})};
    const GroupAction act = inner_action(z2, unitaries, tol);
    data.push_back({canonical_expectation(act, tol), Subalgebra::whole(alg).generators(),
                    Element::scalar(alg, 0.5)});
    if (n < stages) embeddings.push_back(ampliation_map(dim, 2));
  }
  return InductiveSystem::create(std::move(data), std::move(embeddings), tol);
}

}  // namespace incl
