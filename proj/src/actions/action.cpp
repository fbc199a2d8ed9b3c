#include "actions/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "core/random.hpp"
#include "index/quasi_basis.hpp"

namespace incl {

namespace {

std::string defect_message(const char* what, double value) {
  std::ostringstream os;
  os << what << " = " << value;
  return os.str();
}

Element apply_map(const MultiMatrixAlgebra& algebra, const Matrix& map, const Element& x) {
  return Element::from_vector(algebra, map * x.to_vector());
}

double centrality_defect(const MultiMatrixAlgebra& algebra, const Element& e) {
  double worst = 0.0;
  const Subalgebra whole = Subalgebra::whole(algebra);
  for (const auto& g : whole.generators())
    worst = std::max(worst, operator_norm(commutator(e, g)));
  return worst;
}

Matrix average_map(const GroupAction& act, std::span<const int> elements) {
  const int n = act.algebra().vector_dim();
  Matrix avg = Matrix::Zero(n, n);
  for (int g : elements) avg += act.map(g);
  return avg / static_cast<double>(elements.size());
}

std::vector<int> all_elements(const FiniteGroup& group) {
  std::vector<int> out(group.order());
  for (int g = 0; g < group.order(); ++g) out[g] = g;
  return out;
}

}  // namespace

ActionReport verify_action(const FiniteGroup& group, const MultiMatrixAlgebra& algebra,
                           const std::vector<Matrix>& maps, const Tolerance& tol) {
  const int n = algebra.vector_dim();
  if (static_cast<int>(maps.size()) != group.order())
    fail(ErrorKind::Conformance, "action: one map per group element required");
  for (const auto& m : maps)
    if (m.rows() != n || m.cols() != n) fail(ErrorKind::Conformance, "action: map has the wrong size");

  ActionReport rep;
  rep.min_singular_value = std::numeric_limits<double>::infinity();
  const Element one = Element::unit(algebra);
  const Subalgebra whole = Subalgebra::whole(algebra);
  const auto basis = whole.basis_elements();
  for (int g = 0; g < group.order(); ++g) {
    const Matrix& m = maps[g];
    rep.unit_defect = std::max(rep.unit_defect, (apply_map(algebra, m, one) - one).frobenius_norm());
    std::vector<Element> images;
    for (const auto& b : basis) images.push_back(apply_map(algebra, m, b));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      rep.adjoint_defect =
          std::max(rep.adjoint_defect, (apply_map(algebra, m, basis[k].adjoint()) - images[k].adjoint()).frobenius_norm());
    }
    for (const auto& x : whole.generators()) {
      const Element ax = apply_map(algebra, m, x);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double d = (apply_map(algebra, m, x * basis[k]) - ax * images[k]).frobenius_norm();
        rep.multiplicativity_defect = std::max(rep.multiplicativity_defect, d);
      }
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    rep.min_singular_value = std::min(rep.min_singular_value, svd.singularValues()(n - 1));
    for (int h = 0; h < group.order(); ++h) {
      rep.composition_defect =
          std::max(rep.composition_defect, (m * maps[h] - maps[group.multiply(g, h)]).norm());
    }
  }
  rep.identity_defect = (maps[group.unit()] - Matrix::Identity(n, n)).norm();
  const double scale = std::sqrt(static_cast<double>(n));
  rep.pass = within(rep.unit_defect, tol.eq_tol, scale) && within(rep.multiplicativity_defect, tol.eq_tol) &&
             within(rep.adjoint_defect, tol.eq_tol) && rep.min_singular_value > tol.rank_tol &&
             within(rep.composition_defect, tol.eq_tol, scale) && within(rep.identity_defect, tol.eq_tol, scale);
  return rep;
}

GroupAction::GroupAction(FiniteGroup group, MultiMatrixAlgebra algebra, std::vector<Matrix> maps,
                         ActionReport report)
    : group_(std::move(group)), algebra_(std::move(algebra)), maps_(std::move(maps)), report_(report) {}

GroupAction GroupAction::create(FiniteGroup group, MultiMatrixAlgebra algebra, std::vector<Matrix> maps,
                                const Tolerance& tol) {
  const ActionReport rep = verify_action(group, algebra, maps, tol);
  if (!rep.pass) {
    const double scale = std::sqrt(static_cast<double>(algebra.vector_dim()));
    if (!within(rep.unit_defect, tol.eq_tol, scale))
      fail(ErrorKind::Verification, defect_message("action: unit defect", rep.unit_defect));
    if (!within(rep.multiplicativity_defect, tol.eq_tol))
      fail(ErrorKind::Verification, defect_message("action: multiplicativity defect", rep.multiplicativity_defect));
    if (!within(rep.adjoint_defect, tol.eq_tol))
      fail(ErrorKind::Verification, defect_message("action: adjoint defect", rep.adjoint_defect));
    if (!(rep.min_singular_value > tol.rank_tol))
      fail(ErrorKind::Verification, defect_message("action: invertibility margin", rep.min_singular_value));
    if (!within(rep.composition_defect, tol.eq_tol, scale))
      fail(ErrorKind::Verification, defect_message("action: composition defect", rep.composition_defect));
    fail(ErrorKind::Verification, defect_message("action: identity defect", rep.identity_defect));
  }
  return GroupAction(std::move(group), std::move(algebra), std::move(maps), rep);
}

Element GroupAction::apply(int g, const Element& x) const {
  if (g < 0 || g >= group_.order()) fail(ErrorKind::InvalidArgument, "action: group element out of range");
  return apply_map(algebra_, maps_[g], x);
}

Matrix conjugation_map(const Element& u) {
  const auto& algebra = u.algebra();
  const int n = algebra.vector_dim();
  Matrix m(n, n);
  const Element ustar = u.adjoint();
  for (int k = 0; k < n; ++k) {
    Vector unit = Vector::Zero(n);
    unit(k) = 1.0;
    m.col(k) = (u * Element::from_vector(algebra, unit) * ustar).to_vector();
  }
  return m;
}

GroupAction translation_action(const FiniteGroup& group, const Tolerance& tol) {
  const int n = group.order();
  std::vector<Matrix> maps;
  for (int g = 0; g < n; ++g) {
    Matrix m = Matrix::Zero(n, n);
    for (int h = 0; h < n; ++h) m(group.multiply(g, h), h) = 1.0;
    maps.push_back(std::move(m));
  }
  return GroupAction::create(group, MultiMatrixAlgebra::commutative(n), std::move(maps), tol);
}

GroupAction swap_action(int n, const Tolerance& tol) {
  const MultiMatrixAlgebra algebra({n, n});
  const int half = n * n;
  Matrix swap = Matrix::Zero(2 * half, 2 * half);
  swap.topRightCorner(half, half).setIdentity();
  swap.bottomLeftCorner(half, half).setIdentity();
  std::vector<Matrix> maps{Matrix::Identity(2 * half, 2 * half), swap};
  return GroupAction::create(FiniteGroup::cyclic(2), algebra, std::move(maps), tol);
}

GroupAction inner_action(const FiniteGroup& group, std::span<const Element> unitaries, const Tolerance& tol) {
  if (static_cast<int>(unitaries.size()) != group.order() || unitaries.empty())
    fail(ErrorKind::InvalidArgument, "inner action: one unitary per group element required");
  std::vector<Matrix> maps;
  for (const auto& u : unitaries) maps.push_back(conjugation_map(u));
  return GroupAction::create(group, unitaries.front().algebra(), std::move(maps), tol);
}

GroupAction trivial_action(const FiniteGroup& group, const MultiMatrixAlgebra& algebra, const Tolerance& tol) {
  const int n = algebra.vector_dim();
  std::vector<Matrix> maps(group.order(), Matrix::Identity(n, n));
  return GroupAction::create(group, algebra, std::move(maps), tol);
}

Subalgebra fixed_point_algebra(const GroupAction& act, const Tolerance& tol, std::span<const int> elements) {
  const std::vector<int> all = all_elements(act.group());
  if (elements.empty()) elements = all;
  const int n = act.algebra().vector_dim();
  Matrix k(static_cast<Eigen::Index>(elements.size()) * n, n);
  for (std::size_t i = 0; i < elements.size(); ++i)
    k.middleRows(static_cast<Eigen::Index>(i) * n, n) = act.map(elements[i]) - Matrix::Identity(n, n);
  return Subalgebra::verified(Subspace(act.algebra(), null_space(k, tol.rank_tol)), tol);
}

ConditionalExpectation canonical_expectation(const GroupAction& act, const Tolerance& tol) {
  const std::vector<int> all = all_elements(act.group());
  return ConditionalExpectation::from_ambient_map(Subalgebra::whole(act.algebra()), fixed_point_algebra(act, tol),
                                                  average_map(act, all), tol);
}

InnerResult is_inner(const GroupAction& act, int g, const Tolerance& tol) {
  const auto& algebra = act.algebra();
  const int n = algebra.vector_dim();
  const Subalgebra whole = Subalgebra::whole(algebra);
  std::vector<Element> gens;
  for (const auto& x : whole.generators()) {
    gens.push_back(x);
    gens.push_back(x.adjoint());
  }
  // Intertwiners: u a = alpha_g(a) u for every generator a.
  Matrix k(static_cast<Eigen::Index>(gens.size()) * n, n);
  const auto basis = whole.basis_elements();
  for (std::size_t s = 0; s < gens.size(); ++s) {
    const Element image = act.apply(g, gens[s]);
    for (int c = 0; c < n; ++c)
      k.block(static_cast<Eigen::Index>(s) * n, c, n, 1) = (basis[c] * gens[s] - image * basis[c]).to_vector();
  }
  const Matrix null = null_space(k, tol.rank_tol);
  InnerResult out;
  out.intertwiner_dim = static_cast<int>(null.cols());
  if (null.cols() == 0) return out;
  if (g == act.group().unit()) {
    // The intertwiners are the center; report the canonical witness.
    out.unitary = Element::unit(algebra);
    out.min_singular_value = 1.0;
    return out;
  }

  GaussianSampler sampler(tol.seed ^ 0x510e527fade682d1ULL);
  for (int attempt = 0; attempt < 5; ++attempt) {
    const Element u = Element::from_vector(algebra, null * sampler.vector(static_cast<int>(null.cols())));
    const double smin = u.min_singular_value();
    out.min_singular_value = std::max(out.min_singular_value, smin / operator_norm(u));
    if (smin <= 1e-8 * operator_norm(u)) continue;
    std::vector<Matrix> blocks;
    for (int r = 0; r < u.num_blocks(); ++r) {
      Eigen::JacobiSVD<Matrix> svd(u.block(r), Eigen::ComputeFullU | Eigen::ComputeFullV);
      blocks.push_back(svd.matrixU() * svd.matrixV().adjoint());
    }
    Element w(algebra, std::move(blocks));
    double defect = 0.0;
    for (const auto& b : basis) defect = std::max(defect, (w * b * w.adjoint() - act.apply(g, b)).frobenius_norm());
    out.implementation_defect = defect;
    if (within(defect, tol.eq_tol)) {
      out.unitary = std::move(w);
      return out;
    }
  }
  return out;
}

PartitionReport rohlin_partition_check(const GroupAction& act, std::span<const Element> partition,
                                       const Tolerance& tol) {
  const auto& group = act.group();
  if (static_cast<int>(partition.size()) != group.order())
    fail(ErrorKind::InvalidArgument, "partition: one projection per group element required");
  const auto& algebra = act.algebra();
  PartitionReport rep;
  Element sum = Element::zero(algebra);
  for (const auto& e : partition) {
    if (!(e.algebra() == algebra)) fail(ErrorKind::Conformance, "partition: projection not in the algebra");
    const ProjectionReport pr = is_projection(e, tol);
    rep.projection_defect = std::max({rep.projection_defect, pr.idempotence_defect, pr.adjoint_defect});
    rep.centrality_defect = std::max(rep.centrality_defect, centrality_defect(algebra, e));
    sum = sum + e;
  }
  rep.sum_defect = operator_norm(sum - Element::unit(algebra));
  for (int g = 0; g < group.order(); ++g)
    for (int h = 0; h < group.order(); ++h)
      rep.equivariance_defect = std::max(
          rep.equivariance_defect, operator_norm(act.apply(g, partition[h]) - partition[group.multiply(g, h)]));
  rep.pass = within(rep.projection_defect, tol.eq_tol) && within(rep.sum_defect, tol.eq_tol) &&
             within(rep.centrality_defect, tol.eq_tol) && within(rep.equivariance_defect, tol.eq_tol);
  return rep;
}

CriterionResult rohlin_criterion(const GroupAction& act, const Element& e, const Tolerance& tol) {
  const auto& algebra = act.algebra();
  if (!(e.algebra() == algebra)) fail(ErrorKind::Conformance, "criterion: projection not in the algebra");
  CriterionResult out;
  CriterionReport& rep = out.report;
  const ProjectionReport pr = is_projection(e, tol);
  rep.projection_defect = std::max(pr.idempotence_defect, pr.adjoint_defect);
  rep.centrality_defect = centrality_defect(algebra, e);
  const ConditionalExpectation ce = canonical_expectation(act, tol);
  const double inv_order = 1.0 / act.group().order();
  rep.expectation_defect = operator_norm(ce(e) - Element::scalar(algebra, inv_order));
  rep.criterion_ok = within(rep.projection_defect, tol.eq_tol) && within(rep.centrality_defect, tol.eq_tol) &&
                     within(rep.expectation_defect, tol.eq_tol);
  for (int g = 0; g < act.group().order(); ++g) out.partition.push_back(act.apply(g, e));
  rep.partition = rohlin_partition_check(act, out.partition, tol);
  rep.pass = rep.criterion_ok && rep.partition.pass;
  return out;
}

SubgroupInclusion subgroup_inclusion(const GroupAction& act, std::span<const int> subgroup,
                                     std::span<const Element> partition, const Tolerance& tol) {
  const auto& group = act.group();
  const auto& algebra = act.algebra();
  if (!group.is_subgroup(subgroup)) fail(ErrorKind::InvalidArgument, "subgroup inclusion: H is not a subgroup");
  if (static_cast<int>(partition.size()) != group.order())
    fail(ErrorKind::InvalidArgument, "subgroup inclusion: a Rohlin partition indexed by G is required");
  const std::vector<int> all = all_elements(group);

  Subalgebra a = fixed_point_algebra(act, tol, subgroup);
  Subalgebra p = fixed_point_algebra(act, tol);
  const Subalgebra whole = Subalgebra::whole(algebra);
  ConditionalExpectation e_h = ConditionalExpectation::from_ambient_map(whole, a, average_map(act, subgroup), tol);
  const Matrix avg = average_map(act, all);
  ConditionalExpectation e = ConditionalExpectation::from_ambient_map(whole, p, avg, tol);
  ConditionalExpectation f = ConditionalExpectation::from_ambient_map(a, p, avg, tol);

  Element projection = Element::zero(algebra);
  for (int h : subgroup) projection = projection + partition[h];
  std::vector<Element> cosets;
  for (const auto& coset : group.right_cosets(subgroup)) {
    Element c = Element::zero(algebra);
    for (int g : coset) c = c + partition[g];
    cosets.push_back(std::move(c));
  }

  SubgroupInclusionReport rep;
  rep.membership_defect = a.space().distance(projection);
  const QuasiBasis qb = solve_quasi_basis(f, tol);
  const IndexValue index = watatani_index(f, qb, tol);
  rep.expected_index = static_cast<double>(group.order()) / static_cast<double>(subgroup.size());
  rep.index_scalar = index.scalar.value_or(std::nan(""));
  rep.index_error = index.scalar ? std::abs(*index.scalar - rep.expected_index) : std::numeric_limits<double>::infinity();
  rep.f_of_projection_defect = operator_norm(f(projection) - index.element.inverse(tol.rank_tol));
  const Element ep = e(projection);
  const Element one = Element::unit(algebra);
  rep.e_of_projection = ep.trace().real() / one.trace().real();
  const double expected_e = static_cast<double>(subgroup.size()) / group.order();
  rep.e_of_projection_defect = operator_norm(ep - one * Complex(expected_e));
  for (const auto& x : whole.basis_elements())
    rep.composition_defect = std::max(rep.composition_defect, (e(x) - f(e_h(x))).frobenius_norm());
  rep.pass = within(rep.membership_defect, tol.eq_tol) && within(rep.index_error, tol.eq_tol, rep.expected_index) &&
             within(rep.f_of_projection_defect, tol.eq_tol) && within(rep.e_of_projection_defect, tol.eq_tol) &&
             within(rep.composition_defect, tol.eq_tol);
  return SubgroupInclusion{std::move(a), std::move(p),       std::move(e_h),    std::move(f),
                           std::move(e), std::move(projection), std::move(cosets), rep};
}

}  // namespace incl
