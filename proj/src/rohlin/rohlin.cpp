#include "rohlin/rohlin.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace incl {

namespace {

void require_stages(std::span<const Element> seq, const MultiMatrixAlgebra& ambient) {
  if (seq.empty()) fail(ErrorKind::InvalidArgument, "witness: empty projection sequence");
  for (const auto& e : seq)
    if (!(e.algebra() == ambient)) fail(ErrorKind::Conformance, "witness: projection not in the ambient algebra");
}

double projection_defect(const Element& e) {
  return std::max(operator_norm(e * e - e), operator_norm(e - e.adjoint()));
}

/// max ||[e, g]|| / max(1, ||g||) over g and g*.
double commutation_defect(const Element& e, const std::vector<Element>& gens) {
  double worst = 0.0;
  for (const auto& g : gens) {
    const double s = std::max(1.0, operator_norm(g));
    worst = std::max(worst, operator_norm(commutator(e, g)) / s);
    worst = std::max(worst, operator_norm(commutator(e, g.adjoint())) / s);
  }
  return worst;
}

double min_singular_value(const Matrix& columns) {
  if (columns.cols() == 0) return 0.0;
  Matrix m = columns;
  if (columns.rows() > 2 * columns.cols()) {
    Eigen::HouseholderQR<Matrix> qr(columns);
    m = qr.matrixQR().topRows(columns.cols()).triangularView<Eigen::Upper>();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

/// Columns V M of the expectation applied to the orthonormal domain basis.
Matrix expectation_of_basis(const ConditionalExpectation& e) { return e.domain().space().basis() * e.map(); }

}  // namespace

double stacked_injectivity_margin(const Subalgebra& space, std::span<const Element> seq) {
  if (seq.empty() || space.dim() == 0) return 0.0;
  const auto& ambient = space.ambient();
  const int n = ambient.vector_dim();
  const auto basis = space.basis_elements();
  Matrix stacked(static_cast<Eigen::Index>(seq.size()) * n, space.dim());
  for (int j = 0; j < space.dim(); ++j)
    for (std::size_t k = 0; k < seq.size(); ++k)
      stacked.block(static_cast<Eigen::Index>(k) * n, j, n, 1) = (basis[j] * seq[k]).to_vector();
  return min_singular_value(stacked);
}

RohlinReport rohlin_check(const ConditionalExpectation& e, const IndexValue& index, std::span<const Element> seq,
                          const Tolerance& tol) {
  require_stages(seq, e.ambient());
  RohlinReport rep;
  rep.stages = static_cast<int>(seq.size());
  const Element ind_inv = index.element.inverse(tol.rank_tol);
  for (const auto& x : seq) {
    rep.projection_defect = std::max(rep.projection_defect, projection_defect(x));
    rep.membership_defect = std::max(rep.membership_defect, e.domain().space().distance(x));
    rep.centrality_defect = std::max(rep.centrality_defect, commutation_defect(x, e.domain().generators()));
    rep.expectation_defect = std::max(rep.expectation_defect, operator_norm(e(x) - ind_inv));
  }
  rep.injectivity_margin = stacked_injectivity_margin(e.domain(), seq);
  rep.injectivity_margin_p = stacked_injectivity_margin(e.range(), seq);
  rep.pass = within(rep.projection_defect, tol.eq_tol) && within(rep.membership_defect, tol.eq_tol) &&
             within(rep.centrality_defect, tol.eq_tol) && within(rep.expectation_defect, tol.eq_tol) &&
             rep.injectivity_margin > tol.rank_tol;
  return rep;
}

ApproxRepReport approx_rep_check(const ConditionalExpectation& e, std::span<const Element> seq,
                                 const Tolerance& tol) {
  require_stages(seq, e.ambient());
  const auto& ambient = e.ambient();
  ApproxRepReport rep;
  rep.stages = static_cast<int>(seq.size());
  const auto basis = e.domain().basis_elements();
  const Matrix images = expectation_of_basis(e);
  for (const auto& x : seq) {
    rep.projection_defect = std::max(rep.projection_defect, projection_defect(x));
    rep.membership_defect = std::max(rep.membership_defect, e.range().space().distance(x));
    rep.centrality_defect = std::max(rep.centrality_defect, commutation_defect(x, e.range().generators()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Element lhs = x * basis[k] * x;
      const Element rhs = Element::from_vector(ambient, images.col(static_cast<Eigen::Index>(k))) * x;
      rep.module_defect = std::max(rep.module_defect, operator_norm(lhs - rhs));
    }
  }
  rep.injectivity_margin = stacked_injectivity_margin(e.range(), seq);
  rep.pass = within(rep.projection_defect, tol.eq_tol) && within(rep.membership_defect, tol.eq_tol) &&
             within(rep.centrality_defect, tol.eq_tol) && within(rep.module_defect, tol.eq_tol) &&
             rep.injectivity_margin > tol.rank_tol;
  return rep;
}

ForwardResult duality_forward(const BasicConstruction& bc, std::span<const Element> seq, const Tolerance& tol) {
  const ConditionalExpectation& e = bc.expectation();
  ForwardResult out;
  ForwardReport& rep = out.report;
  rep.precondition = rohlin_check(e, bc.index, seq, tol);

  const Element& jones = bc.jones;
  const Element ind_inv = bc.lambda(bc.index.element.inverse(tol.rank_tol));
  const auto zbasis = bc.algebra.basis_elements();
  const Matrix dual_images = expectation_of_basis(bc.dual);
  const auto& ops = bc.algebra.ambient();
  for (const auto& x : seq) {
    const Element le = bc.lambda(x);
    rep.jones_identity_defect = std::max(rep.jones_identity_defect, operator_norm(jones * le * jones - ind_inv * jones));
    rep.projection_identity_defect =
        std::max(rep.projection_identity_defect, operator_norm(le * jones * le - ind_inv * le));
    for (std::size_t k = 0; k < zbasis.size(); ++k) {
      const Element rhs = Element::from_vector(ops, dual_images.col(static_cast<Eigen::Index>(k))) * le;
      rep.dual_module_defect = std::max(rep.dual_module_defect, operator_norm(le * zbasis[k] * le - rhs));
    }
    out.witness.push_back(le);
  }
  rep.dual_witness = approx_rep_check(bc.dual, out.witness, tol);
  const auto& w = rep.dual_witness;
  rep.max_defect = std::max({rep.jones_identity_defect, rep.projection_identity_defect, rep.dual_module_defect,
                             w.projection_defect, w.membership_defect, w.centrality_defect, w.module_defect});
  rep.pass = rep.precondition.pass && within(rep.max_defect, tol.eq_tol) && w.pass;
  return out;
}

BackwardResult duality_backward(const BasicConstruction& bc, const QuasiBasis& qb, std::span<const Element> seq,
                                const Tolerance& tol) {
  const ConditionalExpectation& e = bc.expectation();
  BackwardResult out;
  BackwardReport& rep = out.report;
  rep.precondition = approx_rep_check(e, seq, tol);

  const Element& jones = bc.jones;
  const Element ind_inv = bc.lambda(bc.index.element.inverse(tol.rank_tol));
  std::vector<std::pair<Element, Element>> lifted;
  for (const auto& p : qb.pairs()) lifted.emplace_back(bc.lambda(p.u), bc.lambda(p.v));

  for (const auto& x : seq) {
    const Element le = bc.lambda(x);
    const Element core = le * jones;
    Element f = Element::zero(bc.algebra.ambient());
    for (const auto& [u, v] : lifted) f = f + u * core * v;
    rep.projection_defect = std::max(rep.projection_defect, projection_defect(f));
    rep.membership_defect = std::max(rep.membership_defect, bc.algebra.space().distance(f));
    rep.centrality_defect = std::max(rep.centrality_defect, commutation_defect(f, bc.algebra.generators()));
    rep.expectation_defect = std::max(rep.expectation_defect, operator_norm(bc.dual(f) - ind_inv));
    rep.jones_defect = std::max({rep.jones_defect, operator_norm(f * jones - core), operator_norm(jones * f - core)});
    out.witness.push_back(std::move(f));
  }
  rep.injectivity_margin = stacked_injectivity_margin(bc.algebra, out.witness);

  const IndexValue dual_index = watatani_index(bc.dual, dual_quasi_basis(bc, tol), tol);
  rep.dual_witness = rohlin_check(bc.dual, dual_index, out.witness, tol);
  const auto& w = rep.dual_witness;
  rep.max_defect = std::max({rep.projection_defect, rep.membership_defect, rep.centrality_defect,
                             rep.expectation_defect, rep.jones_defect, w.expectation_defect});
  rep.pass = rep.precondition.pass && within(rep.max_defect, tol.eq_tol) && rep.injectivity_margin > tol.rank_tol &&
             w.pass;
  return out;
}

RecoverResult recover_rohlin_projection(const BasicConstruction& bc, std::span<const Element> seq,
                                        const Tolerance& tol) {
  require_stages(seq, bc.algebra.ambient());
  const ConditionalExpectation& e = bc.expectation();
  RecoverResult out;
  RecoverReport& rep = out.report;
  const Element& jones = bc.jones;
  const Element lam_ind = bc.lambda(bc.index.element);
  for (const auto& f : seq) {
    const Element fe = f * jones;
    const Element t = lam_ind * bc.dual(fe);
    double defect = 0.0;
    Element x = bc.gns->pull_back(t, &defect);
    rep.pull_back_defect = std::max(rep.pull_back_defect, defect);
    rep.membership_defect = std::max(rep.membership_defect, e.range().space().distance(x));
    rep.centrality_defect = std::max(rep.centrality_defect, commutation_defect(x, e.range().generators()));
    rep.jones_defect = std::max(rep.jones_defect, operator_norm(bc.lambda(x) * jones - fe));
    out.witness.push_back(std::move(x));
  }
  rep.witness = approx_rep_check(e, out.witness, tol);
  const auto& w = rep.witness;
  rep.max_defect = std::max({rep.membership_defect, rep.centrality_defect, rep.jones_defect, rep.pull_back_defect,
                             w.projection_defect, w.module_defect});
  rep.pass = within(rep.max_defect, tol.eq_tol) && w.pass;
  return out;
}

RoundTripReport duality_roundtrip(const BasicConstruction& bc, std::span<const Element> seq, const Tolerance& tol) {
  RoundTripReport rep;
  const ForwardResult fw = duality_forward(bc, seq, tol);
  rep.forward = fw.report;

  const QuasiBasis qb1 = dual_quasi_basis(bc, tol);
  const BasicConstruction bc1 = build_basic_construction(bc.dual, qb1, tol);
  const BackwardResult bw = duality_backward(bc1, qb1, fw.witness, tol);
  rep.backward = bw.report;
  const RecoverResult rc = recover_rohlin_projection(bc1, bw.witness, tol);
  rep.recover = rc.report;

  for (std::size_t k = 0; k < seq.size(); ++k) {
    rep.recovered_vs_image = std::max(rep.recovered_vs_image, operator_norm(rc.witness[k] - fw.witness[k]));
    const Element back = bc.gns->pull_back(rc.witness[k]);
    rep.recovered_vs_input = std::max(rep.recovered_vs_input, operator_norm(back - seq[k]));
  }
  rep.max_defect = std::max({rep.forward.max_defect, rep.backward.max_defect, rep.recover.max_defect,
                             rep.recovered_vs_image, rep.recovered_vs_input});
  rep.pass = rep.forward.pass && rep.backward.pass && rep.recover.pass && within(rep.recovered_vs_image, tol.eq_tol) &&
             within(rep.recovered_vs_input, tol.eq_tol);
  return rep;
}

RelativeCommutantReport relative_commutant_report(const Subalgebra& a, const Subalgebra& p, const Tolerance& tol) {
  std::vector<Element> elems;
  for (const auto& g : p.generators()) {
    elems.push_back(g);
    elems.push_back(g.adjoint());
  }
  const Subalgebra pc = relative_commutant(a, elems, tol);
  RelativeCommutantReport rep;
  rep.dim = pc.dim();
  rep.containment_defect = p.space().containment_defect(pc.space());
  rep.contained = within(rep.containment_defect, tol.rank_tol);
  rep.irreducible = rep.dim == 1;
  return rep;
}

BetaReport beta_map(const ConditionalExpectation& e, const IndexValue& index, std::span<const Element> seq,
                    const Tolerance& tol) {
  BetaReport rep;
  rep.precondition = rohlin_check(e, index, seq, tol);
  if (!rep.precondition.pass) fail(ErrorKind::Precondition, "beta map: witness fails the Rohlin check");

  const auto& ambient = e.ambient();
  const int n = ambient.vector_dim();
  const Element& ind = index.element;
  const Element one = Element::unit(ambient);
  const auto abasis = e.domain().basis_elements();
  const auto pbasis = e.range().basis_elements();
  const int d = static_cast<int>(abasis.size());
  rep.uniqueness_margin = std::numeric_limits<double>::infinity();
  Matrix stacked(static_cast<Eigen::Index>(seq.size()) * n, d);

  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Element& x = seq[k];
    auto beta = [&](const Element& a) { return ind * e(a * x); };
    std::vector<Element> images;
    for (const auto& a : abasis) images.push_back(beta(a));
    for (int j = 0; j < d; ++j) {
      stacked.block(static_cast<Eigen::Index>(k) * n, j, n, 1) = images[j].to_vector();
      rep.intertwining_defect = std::max(rep.intertwining_defect, operator_norm(images[j] * x - abasis[j] * x));
      rep.range_defect = std::max(rep.range_defect, e.range().space().distance(images[j]));
      rep.adjoint_defect = std::max(rep.adjoint_defect, operator_norm(beta(abasis[j].adjoint()) - images[j].adjoint()));
      for (int l = 0; l < d; ++l) {
        rep.multiplicativity_defect = std::max(rep.multiplicativity_defect,
                                               operator_norm(beta(abasis[j] * abasis[l]) - images[j] * images[l]));
      }
    }
    rep.unit_defect = std::max(rep.unit_defect, operator_norm(beta(one) - one));
    for (const auto& p : pbasis) rep.identity_on_p_defect = std::max(rep.identity_on_p_defect, operator_norm(beta(p) - p));

    // y e = a e has at most one solution y in P; solve it and compare with beta(a).
    std::vector<Element> pe;
    for (const auto& p : pbasis) pe.push_back(p * x);
    const Matrix k_mat = as_columns(pe);
    rep.uniqueness_margin = std::min(rep.uniqueness_margin, min_singular_value(k_mat));
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(tol.rank_tol);
    cod.compute(k_mat);
    for (int j = 0; j < d; ++j) {
      const Vector c = cod.solve((abasis[j] * x).to_vector());
      const Element y = e.range().element(c);
      rep.resolve_defect = std::max(rep.resolve_defect, operator_norm(y - images[j]));
    }
  }
  rep.injectivity_margin = min_singular_value(stacked);
  rep.max_defect = std::max({rep.intertwining_defect, rep.unit_defect, rep.adjoint_defect,
                             rep.multiplicativity_defect, rep.identity_on_p_defect, rep.range_defect,
                             rep.resolve_defect});
  rep.pass = within(rep.max_defect, tol.eq_tol) && rep.injectivity_margin > tol.rank_tol &&
             rep.uniqueness_margin > tol.rank_tol;
  return rep;
}

}  // namespace incl
