#include "expectations/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "core/random.hpp"

namespace incl {

namespace {

Element central_density(const MultiMatrixAlgebra& algebra, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != algebra.num_blocks()) {
    fail(ErrorKind::InvalidArgument, "trace weights: expected one weight per block");
  }
  std::vector<Matrix> blocks;
  for (int r = 0; r < algebra.num_blocks(); ++r) {
    if (!(weights[r] > 0.0) || !std::isfinite(weights[r])) {
      fail(ErrorKind::InvalidArgument, "trace weights: every weight must be positive");
    }
    const int n = algebra.block_dim(r);
    blocks.push_back(Matrix::Identity(n, n) * weights[r]);
  }
  return Element(algebra, std::move(blocks));
}

/// Columns D * b for each column b of `basis`.
Matrix left_multiply_columns(const Element& d, const Matrix& basis) {
  const auto& algebra = d.algebra();
  Matrix out(basis.rows(), basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    out.col(k) = (d * Element::from_vector(algebra, basis.col(k))).to_vector();
  }
  return out;
}

std::string format_defect(const char* axiom, double value) {
  std::ostringstream os;
  os << "expectation: " << axiom << " defect = " << value;
  return os.str();
}

}  // namespace

TraceFunctional weighted_trace(const MultiMatrixAlgebra& algebra, std::span<const double> weights) {
  return TraceFunctional(central_density(algebra, weights));
}

TraceFunctional uniform_trace(const Subalgebra& algebra, const Tolerance& tol) {
  const auto& ambient = algebra.ambient();
  Element density = Element::zero(ambient);
  for (const auto& s : central_decomposition(algebra, tol)) {
    const double multiplicity = s.projection.trace().real() / s.block_dim;
    density = density + s.projection * Complex(1.0 / multiplicity);
  }
  return TraceFunctional(std::move(density));
}

double ExpectationReport::max_defect() const {
  return std::max({unit_defect, idempotence_defect, range_defect, bimodule_defect, positivity_defect});
}

std::string ExpectationReport::failure() const {
  if (!unit_ok) return format_defect("unit", unit_defect);
  if (!range_ok) return format_defect("range", range_defect);
  if (!idempotence_ok) return format_defect("idempotence", idempotence_defect);
  if (!bimodule_ok) return format_defect("bimodule", bimodule_defect);
  if (!positivity_ok) return format_defect("positivity", positivity_defect);
  return {};
}

ExpectationReport verify_expectation(const Subalgebra& domain, const Subalgebra& range, const Matrix& map,
                                     const Tolerance& tol) {
  const int d = domain.dim();
  if (map.rows() != d || map.cols() != d) {
    fail(ErrorKind::Conformance, "expectation: map matrix does not match the domain dimension");
  }
  if (!(range.ambient() == domain.ambient())) {
    fail(ErrorKind::Conformance, "expectation: range and domain live in different algebras");
  }
  const auto& ambient = domain.ambient();
  const Subspace& dom = domain.space();
  auto apply = [&](const Element& x) { return dom.element(map * dom.coordinates(x)); };

  ExpectationReport rep;
  const Element one = Element::unit(ambient);
  rep.unit_defect = (apply(one) - one).frobenius_norm();
  rep.unit_ok = within(rep.unit_defect, tol.eq_tol, one.frobenius_norm());

  rep.idempotence_defect = d == 0 ? 0.0 : (map * map - map).colwise().norm().maxCoeff();
  rep.idempotence_ok = within(rep.idempotence_defect, tol.eq_tol);

  // E(A) inside P, P inside the domain, and E fixes P.
  const Matrix image = dom.basis() * map;
  double range_defect = dom.containment_defect(range.space());
  for (Eigen::Index k = 0; k < image.cols(); ++k) {
    const Vector& v = image.col(k);
    const Vector r = v - range.space().basis() * (range.space().basis().adjoint() * v);
    range_defect = std::max(range_defect, r.norm());
  }
  for (const auto& p : range.basis_elements()) range_defect = std::max(range_defect, (apply(p) - p).frobenius_norm());
  rep.range_defect = range_defect;
  rep.range_ok = within(rep.range_defect, tol.eq_tol);

  // Left and right module maps over a *-closed generating set of P; together they
  // give E(p a q) = p E(a) q for all p, q in P.
  std::vector<Element> pgens;
  for (const auto& g : range.generators()) {
    pgens.push_back(g);
    pgens.push_back(g.adjoint());
  }
  const auto abasis = domain.basis_elements();
  const Matrix& vb = dom.basis();
  auto apply_columns = [&](const Matrix& cols) -> Matrix { return vb * (map * (vb.adjoint() * cols)); };
  double bimodule = 0.0;
  Matrix pa(ambient.vector_dim(), d), ap(ambient.vector_dim(), d);
  Matrix p_image(ambient.vector_dim(), d), image_p(ambient.vector_dim(), d);
  for (const auto& p : pgens) {
    const double scale = std::max(1.0, operator_norm(p));
    for (int k = 0; k < d; ++k) {
      const Element ek = Element::from_vector(ambient, image.col(k));
      pa.col(k) = (p * abasis[k]).to_vector();
      ap.col(k) = (abasis[k] * p).to_vector();
      p_image.col(k) = (p * ek).to_vector();
      image_p.col(k) = (ek * p).to_vector();
    }
    if (d == 0) continue;
    const double left = (apply_columns(pa) - p_image).colwise().norm().maxCoeff();
    const double right = (apply_columns(ap) - image_p).colwise().norm().maxCoeff();
    bimodule = std::max(bimodule, std::max(left, right) / scale);
  }
  rep.bimodule_defect = bimodule;
  rep.bimodule_ok = within(rep.bimodule_defect, tol.eq_tol);

  GaussianSampler sampler(tol.seed ^ 0x9e3779b97f4a7c15ULL);
  double positivity = 0.0;
  for (int s = 0; s < tol.sample_count && d > 0; ++s) {
    const Element x = sampler.element_in(dom);
    const Element xx = x.adjoint() * x;
    const double lo = apply(xx).min_hermitian_eigenvalue();
    positivity = std::max(positivity, -lo / std::max(1.0, operator_norm(xx)));
  }
  rep.positivity_defect = positivity;
  rep.positivity_ok = within(rep.positivity_defect, tol.eq_tol);

  rep.pass = rep.unit_ok && rep.idempotence_ok && rep.range_ok && rep.bimodule_ok && rep.positivity_ok;
  return rep;
}

ConditionalExpectation::ConditionalExpectation(Subalgebra domain, Subalgebra range, Matrix map,
                                               ExpectationReport report)
    : domain_(std::move(domain)), range_(std::move(range)), map_(std::move(map)), report_(report) {}

ConditionalExpectation ConditionalExpectation::create(Subalgebra domain, Subalgebra range, Matrix map,
                                                      const Tolerance& tol) {
  ExpectationReport rep = verify_expectation(domain, range, map, tol);
  if (!rep.pass) fail(ErrorKind::Verification, rep.failure());
  return ConditionalExpectation(std::move(domain), std::move(range), std::move(map), rep);
}

ConditionalExpectation ConditionalExpectation::from_ambient_map(Subalgebra domain, Subalgebra range,
                                                                const Matrix& ambient_map,
                                                                const Tolerance& tol) {
  const int n = domain.ambient().vector_dim();
  if (ambient_map.rows() != n || ambient_map.cols() != n) {
    fail(ErrorKind::Conformance, "expectation: map_matrix must be vector_dim x vector_dim");
  }
  const Matrix& v = domain.space().basis();
  const Matrix applied = ambient_map * v;
  const Matrix leak = applied - v * (v.adjoint() * applied);
  const double leak_norm = leak.cols() == 0 ? 0.0 : leak.colwise().norm().maxCoeff();
  if (!within(leak_norm, tol.eq_tol)) fail(ErrorKind::Verification, format_defect("range", leak_norm));
  Matrix map = v.adjoint() * applied;
  return create(std::move(domain), std::move(range), std::move(map), tol);
}

Element ConditionalExpectation::operator()(const Element& x) const {
  const Subspace& dom = domain_.space();
  return dom.element(map_ * dom.coordinates(x));
}

Matrix ConditionalExpectation::ambient_matrix() const {
  const Matrix& v = domain_.space().basis();
  return v * map_ * v.adjoint();
}

ConditionalExpectation trace_preserving_expectation(const Subalgebra& domain, const Subalgebra& range,
                                                    std::span<const double> weights, const Tolerance& tol) {
  const Element density = central_density(domain.ambient(), weights);
  const Matrix& w = range.space().basis();
  const Matrix& v = domain.space().basis();
  // E = W (W* D W)^{-1} W* D, the D-weighted orthogonal projection onto P.
  const Matrix dw = left_multiply_columns(density, w);
  const Matrix gram = w.adjoint() * dw;
  const Matrix coeffs = gram.ldlt().solve(dw.adjoint() * v);
  Matrix map = v.adjoint() * (w * coeffs);
  return ConditionalExpectation::create(domain, range, std::move(map), tol);
}

ConditionalExpectation trace_preserving_expectation(const MultiMatrixAlgebra& algebra, const Subalgebra& range,
                                                    std::span<const double> weights, const Tolerance& tol) {
  return trace_preserving_expectation(Subalgebra::whole(algebra), range, weights, tol);
}

Matrix expectation_gram(const ConditionalExpectation& e, const Tolerance& tol) {
  const auto& dom = e.domain().space();
  const TraceFunctional tau_p = uniform_trace(e.range(), tol);
  // phi(x) = tau_P(E(x)) = <R, x> for the density R below; then G_ij = <b_i R, b_j>.
  const Matrix& v = dom.basis();
  const Vector t = v.adjoint() * tau_p.density().adjoint().to_vector();  // conj(tr(D b_l))
  const Vector phi_conj = e.map().adjoint() * t;
  const Element r = dom.element(phi_conj);
  Matrix br(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    br.col(i) = (Element::from_vector(dom.ambient(), v.col(i)) * r).to_vector();
  }
  return br.adjoint() * v;
}

FaithfulnessReport is_faithful(const ConditionalExpectation& e, const Tolerance& tol) {
  const Matrix g = expectation_gram(e, tol);
  FaithfulnessReport rep;
  if (g.rows() == 0) return rep;
  const Matrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  rep.margin = es.eigenvalues()(0);
  rep.faithful = rep.margin > tol.rank_tol;
  return rep;
}

double sampled_map_norm(const ConditionalExpectation& e, const Tolerance& tol) {
  GaussianSampler sampler(tol.seed ^ 0x6a09e667f3bcc908ULL);
  const Element one = Element::unit(e.ambient());
  double best = operator_norm(e(one)) / operator_norm(one);
  for (int s = 0; s < tol.sample_count; ++s) {
    const Element x = sampler.element_in(e.domain().space());
    const double nx = operator_norm(x);
    if (nx > 0.0) best = std::max(best, operator_norm(e(x)) / nx);
  }
  return best;
}

}  // namespace incl
