#include "basic/basic_construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace incl {

namespace {

std::string defect_message(const char* what, double value) {
  std::ostringstream os;
  os << what << " = " << value;
  return os.str();
}

int numeric_rank(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double cut = rank_tol * std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

double min_singular_value_of_columns(const Matrix& m) {
  if (m.cols() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Element single_block(const MultiMatrixAlgebra& algebra, Matrix m) {
  std::vector<Matrix> blocks;
  blocks.push_back(std::move(m));
  return Element(algebra, std::move(blocks));
}

}  // namespace

GnsSpace::GnsSpace(ConditionalExpectation e, const Tolerance& tol)
    : e_(std::move(e)), operators_(MultiMatrixAlgebra::full_matrix(std::max(1, e_.domain().dim()))) {
  const Matrix g = expectation_gram(e_, tol);
  gram_ = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_);
  const double lo = es.eigenvalues()(0);
  if (!(lo > tol.rank_tol)) {
    fail(ErrorKind::Precondition, defect_message("basic construction: expectation is not faithful, Gram margin", lo));
  }
  sqrt_ = es.operatorSqrt();
  inv_sqrt_ = es.operatorInverseSqrt();
}

Vector GnsSpace::eta(const Element& x) const { return sqrt_ * e_.domain().coordinates(x); }

Element GnsSpace::lambda(const Element& a) const {
  const Subspace& dom = e_.domain().space();
  const auto& ambient = dom.ambient();
  Matrix stacked(ambient.vector_dim(), dom.dim());
  for (int m = 0; m < dom.dim(); ++m) stacked.col(m) = (a * dom.basis_element(m)).to_vector();
  const Matrix left = dom.basis().adjoint() * stacked;
  return single_block(operators_, sqrt_ * left * inv_sqrt_);
}

Element GnsSpace::jones_projection() const { return single_block(operators_, sqrt_ * e_.map() * inv_sqrt_); }

Element GnsSpace::pull_back(const Element& t, double* defect) const {
  if (!(t.algebra() == operators_)) fail(ErrorKind::Conformance, "pull_back: operator has the wrong size");
  const Vector one = e_.domain().coordinates(Element::unit(e_.ambient()));
  const Vector c = inv_sqrt_ * (t.block(0) * (sqrt_ * one));
  Element a = e_.domain().element(c);
  if (defect != nullptr) *defect = (lambda(a) - t).frobenius_norm();
  return a;
}

BasicConstruction build_basic_construction(const ConditionalExpectation& e, const Tolerance& tol) {
  return build_basic_construction(e, solve_quasi_basis(e, tol), tol);
}

BasicConstruction build_basic_construction(const ConditionalExpectation& e, const QuasiBasis& qb,
                                           const Tolerance& tol) {
  auto gns = std::make_shared<const GnsSpace>(e, tol);
  const IndexValue index = watatani_index(e, qb, tol);
  const auto& ops = gns->operators();
  BasicConstructionReport rep;

  const Element jones = gns->jones_projection();
  const ProjectionReport pr = is_projection(jones, tol);
  rep.jones_projection_defect = std::max(pr.idempotence_defect, pr.adjoint_defect);

  std::vector<Element> lam_gens;
  for (const auto& g : e.domain().generators()) lam_gens.push_back(gns->lambda(g));
  for (std::size_t i = 0; i < lam_gens.size(); ++i) {
    const auto& gi = e.domain().generators()[i];
    rep.homomorphism_defect =
        std::max(rep.homomorphism_defect, (gns->lambda(gi.adjoint()) - lam_gens[i].adjoint()).frobenius_norm());
    for (std::size_t j = 0; j < lam_gens.size(); ++j) {
      const auto& gj = e.domain().generators()[j];
      rep.homomorphism_defect =
          std::max(rep.homomorphism_defect, (gns->lambda(gi * gj) - lam_gens[i] * lam_gens[j]).frobenius_norm());
    }
  }
  Subalgebra image = generated_subalgebra(ops, lam_gens, tol);
  if (image.dim() != e.domain().dim()) {
    fail(ErrorKind::Verification, "basic construction: left regular representation is not injective");
  }

  const auto abasis = e.domain().basis_elements();
  const int d = static_cast<int>(abasis.size());
  std::vector<Element> lam_basis;
  lam_basis.reserve(d);
  for (const auto& a : abasis) lam_basis.push_back(gns->lambda(a));
  for (int k = 0; k < d; ++k) {
    const Element lhs = jones * lam_basis[k] * jones;
    const Element rhs = gns->lambda(e(abasis[k])) * jones;
    rep.module_defect = std::max(rep.module_defect, (lhs - rhs).frobenius_norm());
  }
  for (const auto& p : e.range().generators()) {
    const Element lp = gns->lambda(p);
    rep.jones_commutation_defect = std::max(rep.jones_commutation_defect, commutator(jones, lp).frobenius_norm());
  }

  std::vector<Element> b_gens = lam_gens;
  b_gens.push_back(jones);
  Subalgebra algebra = generated_subalgebra(ops, b_gens, tol);
  rep.generated_dim = algebra.dim();

  // Spanning set lambda(b_i) e lambda(b_j) and targets lambda(Ind^{-1} b_i b_j).
  const Element ind_inv = index.element.inverse(tol.rank_tol);
  const int nb = algebra.dim();
  Matrix spanning(ops.vector_dim(), static_cast<Eigen::Index>(d) * d);
  Matrix targets(ops.vector_dim(), static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const Element left = lam_basis[i] * jones;
    const Element target_left = gns->lambda(ind_inv * abasis[i]);
    for (int j = 0; j < d; ++j) {
      spanning.col(static_cast<Eigen::Index>(i) * d + j) = (left * lam_basis[j]).to_vector();
      targets.col(static_cast<Eigen::Index>(i) * d + j) = (target_left * lam_basis[j]).to_vector();
    }
  }
  rep.span_dim = numeric_rank(spanning, tol.rank_tol);
  const Matrix& vb = algebra.space().basis();
  const Matrix s = vb.adjoint() * spanning;
  const Matrix t = vb.adjoint() * targets;
  double outside = 0.0;
  if (s.cols() > 0) outside = (spanning - vb * s).colwise().norm().maxCoeff();
  if (!within(outside, tol.eq_tol)) {
    fail(ErrorKind::Verification, defect_message("basic construction: spanning set leaves B, defect", outside));
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(tol.rank_tol);
  cod.compute(s.transpose());
  const Matrix dual_map = cod.solve(t.transpose()).transpose();
  rep.well_definedness_residual = s.cols() == 0 ? 0.0 : (dual_map * s - t).colwise().norm().maxCoeff();
  if (!within(rep.well_definedness_residual, tol.eq_tol)) {
    fail(ErrorKind::Verification,
         defect_message("basic construction: dual expectation is not well defined, residual",
                        rep.well_definedness_residual));
  }
  if (rep.span_dim != nb) {
    std::ostringstream os;
    os << "basic construction: span{x e y} has dimension " << rep.span_dim << " but the generated algebra has "
       << nb;
    fail(ErrorKind::Verification, os.str());
  }
  ConditionalExpectation dual = ConditionalExpectation::create(algebra, image, dual_map, tol);

  const Element lam_ind = gns->lambda(index.element);
  for (const auto& z : algebra.basis_elements()) {
    const Element ze = z * jones;
    const Element rhs = lam_ind * dual(ze) * jones;
    rep.lemma_defect = std::max(rep.lemma_defect, (ze - rhs).frobenius_norm());
  }

  rep.pass = within(rep.jones_projection_defect, tol.eq_tol) && within(rep.module_defect, tol.eq_tol) &&
             within(rep.jones_commutation_defect, tol.eq_tol) && within(rep.homomorphism_defect, tol.eq_tol) &&
             within(rep.lemma_defect, tol.eq_tol);
  return BasicConstruction{std::move(gns), jones, std::move(algebra), std::move(image), std::move(dual),
                           qb, index, rep};
}

QuasiBasis dual_quasi_basis(const BasicConstruction& bc, const Tolerance& tol) {
  const Element lam_ind = bc.lambda(bc.index.element);
  std::vector<QuasiBasisPair> pairs;
  for (const auto& p : bc.quasi_basis.pairs()) {
    pairs.push_back({bc.lambda(p.u) * bc.jones * lam_ind, bc.jones * bc.lambda(p.v)});
  }
  return verified_quasi_basis(bc.dual, std::move(pairs), "dual", tol);
}

DualIndexReport dual_index_check(const BasicConstruction& bc, const Tolerance& tol) {
  DualIndexReport rep;
  rep.index_scalar = bc.index.scalar;
  std::optional<QuasiBasis> qb;
  if (bc.algebra.dim() <= 64) {
    try {
      qb = solve_quasi_basis(bc.dual, tol);
      rep.method = "solved";
    } catch (const Error&) {
      qb.reset();
    }
  }
  if (!qb) {
    qb = dual_quasi_basis(bc, tol);
    rep.method = "dual";
  }
  rep.left_defect = qb->report().left_defect;
  rep.right_defect = qb->report().right_defect;
  const IndexValue dual_index = watatani_index(bc.dual, *qb, tol);
  rep.dual_index_scalar = dual_index.scalar;
  if (rep.index_scalar && rep.dual_index_scalar) {
    rep.difference = std::abs(*rep.index_scalar - *rep.dual_index_scalar);
    rep.pass = within(rep.difference, tol.eq_tol, *rep.index_scalar);
  }
  return rep;
}

TunnelResult tunnel_construction(const ConditionalExpectation& e, const IndexValue& index, const Element& proj,
                                 const Tolerance& tol) {
  if (!(proj.algebra() == e.ambient())) fail(ErrorKind::Conformance, "tunnel: projection not in the ambient algebra");
  const Subalgebra& a = e.domain();
  const Subalgebra& p = e.range();
  TunnelResult out;
  TunnelReport& rep = out.report;

  const ProjectionReport pr = is_projection(proj, tol);
  rep.projection_defect = std::max(pr.idempotence_defect, pr.adjoint_defect);
  if (!pr.pass) fail(ErrorKind::Precondition, defect_message("tunnel: e is not a projection, defect", rep.projection_defect));
  if (!within(a.space().distance(proj), tol.eq_tol))
    fail(ErrorKind::Precondition, "tunnel: e does not lie in the domain");
  const Element ind_inv = index.element.inverse(tol.rank_tol);
  rep.expectation_defect = operator_norm(e(proj) - ind_inv);
  if (!within(rep.expectation_defect, tol.eq_tol))
    fail(ErrorKind::Precondition, defect_message("tunnel: E(e) differs from Ind^{-1}, defect", rep.expectation_defect));

  const std::vector<Element> pe{proj};
  Subalgebra q = relative_commutant(p, pe, tol);
  rep.q_dim = q.dim();

  const auto pbasis = p.basis_elements();
  Matrix fmap(p.dim(), p.dim());
  for (int k = 0; k < p.dim(); ++k) fmap.col(k) = p.coordinates(index.element * e(proj * pbasis[k] * proj));
  try {
    out.f = ConditionalExpectation::create(p, q, fmap, tol);
    rep.f_verified = true;
  } catch (const Error& err) {
    rep.f_failure = err.what();
  }

  const auto abasis = a.basis_elements();
  std::vector<Element> aea;
  for (const auto& x : abasis) {
    const Element xe = x * proj;
    for (const auto& y : abasis) aea.push_back(xe * y);
  }
  const Subspace aea_span = Subspace::span(e.ambient(), aea, tol.rank_tol);
  rep.fullness_distance = aea_span.distance(Element::unit(e.ambient()));
  rep.full = within(rep.fullness_distance, tol.eq_tol, Element::unit(e.ambient()).frobenius_norm());
  rep.a_dim = a.dim();

  std::vector<Element> pep;
  for (const auto& x : pbasis) {
    const Element xe = x * proj;
    for (const auto& y : pbasis) pep.push_back(xe * y);
  }
  rep.p_span_dim = Subspace::span(e.ambient(), pep, tol.rank_tol).dim();

  if (out.f) {
    for (const auto& x : pbasis)
      rep.module_defect = std::max(rep.module_defect, (proj * x * proj - (*out.f)(x) * proj).frobenius_norm());
  }
  std::vector<Element> qe;
  for (const auto& x : q.basis_elements()) qe.push_back(x * proj);
  rep.injectivity_margin = min_singular_value_of_columns(as_columns(qe));

  rep.tunnel_verified = rep.full && rep.f_verified && rep.p_span_dim == rep.a_dim &&
                        within(rep.module_defect, tol.eq_tol) && rep.injectivity_margin > tol.rank_tol;
  rep.pass = rep.tunnel_verified;
  out.q = std::move(q);
  return out;
}

std::vector<TowerLevel> jones_tower(const ConditionalExpectation& e, int levels, const Tolerance& tol,
                                    int dim_cap) {
  if (levels < 1) fail(ErrorKind::InvalidArgument, "tower: levels must be at least 1");
  std::vector<TowerLevel> out;
  std::optional<ConditionalExpectation> current = e;
  std::optional<QuasiBasis> qb;
  for (int level = 1; level <= levels; ++level) {
    if (current->domain().dim() > dim_cap) {
      std::ostringstream os;
      os << "tower: level " << level << " needs a GNS space of dimension " << current->domain().dim()
         << ", above the cap " << dim_cap;
      fail(ErrorKind::Limit, os.str());
    }
    if (!qb) qb = solve_quasi_basis(*current, tol);
    BasicConstruction bc = build_basic_construction(*current, *qb, tol);
    const auto& r = bc.report;
    TowerLevel rec;
    rec.level = level;
    rec.ambient_dim = current->domain().dim();
    rec.basic_dim = bc.algebra.dim();
    rec.index_scalar = bc.index.scalar;
    rec.max_defect = std::max({r.jones_projection_defect, r.module_defect, r.jones_commutation_defect,
                               r.homomorphism_defect, r.well_definedness_residual, r.lemma_defect,
                               qb->report().left_defect, qb->report().right_defect});
    out.push_back(rec);
    if (level == levels) break;
    qb = dual_quasi_basis(bc, tol);
    current = bc.dual;
  }
  return out;
}

}  // namespace incl
