#include "index/quasi_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "core/random.hpp"
#include "index/lsqr.hpp"

namespace incl {

namespace {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Blocks = std::vector<Matrix>;

constexpr int kDenseUnknowns = 256;
constexpr double kMaxStoredEntries = 8e6;

Blocks zero_blocks(const MultiMatrixAlgebra& a) {
  Blocks out;
  for (int n : a.block_dims()) out.push_back(Matrix::Zero(n, n));
  return out;
}

void to_blocks(const MultiMatrixAlgebra& a, const Vector& canonical, Blocks& out) {
  for (int r = 0; r < a.num_blocks(); ++r) {
    const int n = a.block_dim(r);
    out[r] = Eigen::Map<const RowMatrix>(canonical.data() + a.offset(r), n, n);
  }
}

void from_blocks(const MultiMatrixAlgebra& a, const Blocks& blocks, Complex* out) {
  for (int r = 0; r < a.num_blocks(); ++r) {
    const int n = a.block_dim(r);
    Eigen::Map<RowMatrix>(out + a.offset(r), n, n) = blocks[r];
  }
}

std::string defect_message(const char* what, double value) {
  std::ostringstream os;
  os << what << " = " << value;
  return os.str();
}

/// Elements to test an identity against: the full orthonormal basis, or unit-norm
/// Gaussian samples when the domain is larger than `max_checked`.
std::vector<Element> probe_elements(const Subalgebra& domain, const Tolerance& tol, int max_checked) {
  if (max_checked <= 0 || domain.dim() <= max_checked) return domain.basis_elements();
  GaussianSampler sampler(tol.seed ^ 0x3c6ef372fe94f82bULL);
  std::vector<Element> out;
  for (int s = 0; s < max_checked; ++s) {
    const Element x = sampler.element_in(domain.space());
    out.push_back(x * Complex(1.0 / x.frobenius_norm()));
  }
  return out;
}

/// E applied to each column of a stack of canonical vectors.
Matrix apply_columns(const ConditionalExpectation& e, const Matrix& columns) {
  const Matrix& v = e.domain().space().basis();
  return v * (e.map() * (v.adjoint() * columns));
}

}  // namespace

double left_identity_defect(const ConditionalExpectation& e, const std::vector<QuasiBasisPair>& pairs,
                            const Tolerance& tol, int max_checked) {
  const auto& ambient = e.ambient();
  double worst = 0.0;
  for (const auto& a : probe_elements(e.domain(), tol, max_checked)) {
    Matrix stacked(ambient.vector_dim(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) stacked.col(i) = (pairs[i].v * a).to_vector();
    const Matrix images = apply_columns(e, stacked);
    Element acc = -a;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      acc = acc + pairs[i].u * Element::from_vector(ambient, images.col(i));
    worst = std::max(worst, acc.frobenius_norm());
  }
  return worst;
}

double right_identity_defect(const ConditionalExpectation& e, const std::vector<QuasiBasisPair>& pairs,
                             const Tolerance& tol, int max_checked) {
  const auto& ambient = e.ambient();
  double worst = 0.0;
  for (const auto& a : probe_elements(e.domain(), tol, max_checked)) {
    Matrix stacked(ambient.vector_dim(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) stacked.col(i) = (a * pairs[i].u).to_vector();
    const Matrix images = apply_columns(e, stacked);
    Element acc = -a;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      acc = acc + Element::from_vector(ambient, images.col(i)) * pairs[i].v;
    worst = std::max(worst, acc.frobenius_norm());
  }
  return worst;
}

QuasiBasis verified_quasi_basis(const ConditionalExpectation& e, std::vector<QuasiBasisPair> pairs,
                                std::string method, const Tolerance& tol, int max_checked) {
  QuasiBasisReport rep;
  rep.method = std::move(method);
  rep.full_basis = max_checked <= 0 || e.domain().dim() <= max_checked;
  rep.left_defect = left_identity_defect(e, pairs, tol, max_checked);
  if (!within(rep.left_defect, tol.eq_tol))
    fail(ErrorKind::Verification, defect_message("quasi-basis: left identity defect", rep.left_defect));
  rep.right_defect = right_identity_defect(e, pairs, tol, max_checked);
  if (!within(rep.right_defect, tol.eq_tol))
    fail(ErrorKind::Verification, defect_message("quasi-basis: right identity defect", rep.right_defect));
  return QuasiBasis(std::move(pairs), std::move(rep));
}

QuasiBasis solve_quasi_basis(const ConditionalExpectation& e, const Tolerance& tol) {
  const auto v_side = e.domain().basis_elements();
  return solve_quasi_basis(e, v_side, tol);
}

QuasiBasis solve_quasi_basis(const ConditionalExpectation& e, std::span<const Element> v_side,
                             const Tolerance& tol) {
  const auto& ambient = e.ambient();
  const Subspace& dom = e.domain().space();
  const Matrix& vb = dom.basis();
  const int d = dom.dim();
  const int m = static_cast<int>(v_side.size());
  const int nb = ambient.num_blocks();
  if (static_cast<double>(d) * m * ambient.vector_dim() > kMaxStoredEntries) {
    fail(ErrorKind::Limit, "quasi-basis: system too large for the direct solver");
  }
  for (const auto& v : v_side) {
    if (!within(dom.distance(v), tol.eq_tol, v.frobenius_norm()))
      fail(ErrorKind::InvalidArgument, "quasi-basis: v side must lie in the domain");
  }

  // Q_jk = E(v_j b_k) in P, kept as raw blocks for the operator applications.
  const auto basis = dom.basis_elements();
  std::vector<Blocks> q(static_cast<std::size_t>(m) * d);
  {
    Matrix stacked(ambient.vector_dim(), d);
    Blocks tmp = zero_blocks(ambient);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < d; ++k) stacked.col(k) = (v_side[j] * basis[k]).to_vector();
      const Matrix images = apply_columns(e, stacked);
      for (int k = 0; k < d; ++k) {
        to_blocks(ambient, images.col(k), tmp);
        q[static_cast<std::size_t>(j) * d + k] = tmp;
      }
    }
  }

  // Unknowns: column j of U (d x m) holds the coordinates of u_j.
  const LinearOperator forward = [&](const Vector& x) {
    const Eigen::Map<const Matrix> u(x.data(), d, m);
    const Matrix uc = vb * u;
    std::vector<Blocks> acc(d, zero_blocks(ambient));
    Blocks uj = zero_blocks(ambient);
    for (int j = 0; j < m; ++j) {
      to_blocks(ambient, uc.col(j), uj);
      for (int k = 0; k < d; ++k) {
        const Blocks& qjk = q[static_cast<std::size_t>(j) * d + k];
        for (int r = 0; r < nb; ++r) acc[k][r].noalias() += uj[r] * qjk[r];
      }
    }
    Matrix out(ambient.vector_dim(), d);
    for (int k = 0; k < d; ++k) from_blocks(ambient, acc[k], out.col(k).data());
    const Matrix coords = vb.adjoint() * out;
    return Vector(Eigen::Map<const Vector>(coords.data(), coords.size()));
  };
  const LinearOperator adjoint = [&](const Vector& y) {
    const Eigen::Map<const Matrix> yy(y.data(), d, d);
    const Matrix yc = vb * yy;
    std::vector<Blocks> yk(d, zero_blocks(ambient));
    for (int k = 0; k < d; ++k) to_blocks(ambient, yc.col(k), yk[k]);
    Matrix out(ambient.vector_dim(), m);
    Blocks acc = zero_blocks(ambient);
    for (int j = 0; j < m; ++j) {
      for (auto& b : acc) b.setZero();
      for (int k = 0; k < d; ++k) {
        const Blocks& qjk = q[static_cast<std::size_t>(j) * d + k];
        for (int r = 0; r < nb; ++r) acc[r].noalias() += yk[k][r] * qjk[r].adjoint();
      }
      from_blocks(ambient, acc, out.col(j).data());
    }
    const Matrix coords = vb.adjoint() * out;
    return Vector(Eigen::Map<const Vector>(coords.data(), coords.size()));
  };

  const Matrix target_matrix = Matrix::Identity(d, d);
  const Vector target = Eigen::Map<const Vector>(target_matrix.data(), target_matrix.size());
  const int unknowns = d * m;
  Vector solution;
  QuasiBasisReport rep;
  if (unknowns <= kDenseUnknowns) {
    Matrix system(static_cast<Eigen::Index>(d) * d, unknowns);
    Vector unit = Vector::Zero(unknowns);
    for (int c = 0; c < unknowns; ++c) {
      unit(c) = 1.0;
      system.col(c) = forward(unit);
      unit(c) = 0.0;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(tol.rank_tol);
    cod.compute(system);
    solution = cod.solve(target);
    rep.method = "dense";
  } else {
    const LsqrResult res = lsqr(forward, adjoint, target, unknowns);
    solution = res.x;
    rep.method = "lsqr";
    rep.iterations = res.iterations;
  }

  const Vector residual = forward(solution) - target;
  const Eigen::Map<const Matrix> rmat(residual.data(), d, d);
  const double inconsistency = d == 0 ? 0.0 : rmat.colwise().norm().maxCoeff();
  if (!within(inconsistency, tol.eq_tol)) {
    fail(ErrorKind::InfiniteIndex,
         defect_message("quasi-basis: linear system has no solution, index is infinite at this tolerance; residual",
                        inconsistency));
  }

  const Eigen::Map<const Matrix> ucoords(solution.data(), d, m);
  std::vector<QuasiBasisPair> pairs;
  for (int j = 0; j < m; ++j) {
    Element u = dom.element(ucoords.col(j));
    if (u.frobenius_norm() <= tol.rank_tol) continue;
    pairs.push_back({std::move(u), v_side[j]});
  }
  QuasiBasis qb = verified_quasi_basis(e, std::move(pairs), rep.method, tol);
  QuasiBasisReport full = qb.report();
  full.iterations = rep.iterations;
  return QuasiBasis(qb.pairs(), full);
}

IndexValue watatani_index(const ConditionalExpectation& e, const QuasiBasis& qb, const Tolerance& tol) {
  const auto& ambient = e.ambient();
  Element ind = Element::zero(ambient);
  for (const auto& p : qb.pairs()) ind = ind + p.u * p.v;

  IndexValue out{ind, std::nullopt};
  const double scale = std::max(1.0, operator_norm(ind));
  for (const auto& g : e.domain().generators()) {
    const double gs = std::max(1.0, operator_norm(g));
    out.centrality_defect = std::max(out.centrality_defect, operator_norm(commutator(ind, g)) / gs);
    out.centrality_defect = std::max(out.centrality_defect, operator_norm(commutator(ind, g.adjoint())) / gs);
  }
  out.adjoint_defect = operator_norm(ind - ind.adjoint());
  out.min_eigenvalue = ind.min_hermitian_eigenvalue();
  out.min_singular_value = ind.min_singular_value();
  out.invertible = out.min_singular_value > tol.rank_tol;

  if (!within(out.centrality_defect, tol.eq_tol, scale))
    fail(ErrorKind::Verification, defect_message("index: centrality defect", out.centrality_defect));
  if (!within(out.adjoint_defect, tol.eq_tol, scale))
    fail(ErrorKind::Verification, defect_message("index: self-adjointness defect", out.adjoint_defect));
  if (out.min_eigenvalue < -tol.eq_tol * scale)
    fail(ErrorKind::Verification, defect_message("index: positivity defect", -out.min_eigenvalue));
  if (!out.invertible) fail(ErrorKind::InfiniteIndex, "index: element is not invertible");

  const Element one = Element::unit(ambient);
  const double lambda = ind.trace().real() / one.trace().real();
  if (within((ind - one * Complex(lambda)).frobenius_norm(), tol.eq_tol, scale * one.frobenius_norm()))
    out.scalar = lambda;
  return out;
}

EInverseResult e_inverse_map(const ConditionalExpectation& e, const QuasiBasis& qb, const Element& x,
                             const Tolerance& tol) {
  if (!(x.algebra() == e.ambient())) fail(ErrorKind::Conformance, "e_inverse: element not in the ambient algebra");
  const double xs = std::max(1.0, operator_norm(x));
  for (const auto& g : e.range().generators()) {
    const double d = std::max(operator_norm(commutator(x, g)), operator_norm(commutator(x, g.adjoint())));
    if (!within(d, tol.eq_tol, xs * std::max(1.0, operator_norm(g))))
      fail(ErrorKind::Precondition, defect_message("e_inverse: argument does not commute with the range, defect", d));
  }
  EInverseResult out{Element::zero(e.ambient())};
  for (const auto& p : qb.pairs()) out.value = out.value + p.u * x * p.v;
  for (const auto& g : e.domain().generators()) {
    out.commutation_defect = std::max(out.commutation_defect, operator_norm(commutator(out.value, g)));
    out.commutation_defect = std::max(out.commutation_defect, operator_norm(commutator(out.value, g.adjoint())));
  }
  return out;
}

double pimsner_popa_margin(const ConditionalExpectation& e, int samples, const Tolerance& tol) {
  GaussianSampler sampler(tol.seed ^ 0xbb67ae8584caa73bULL);
  double best = 1.0;
  for (int s = 0; s < samples; ++s) {
    const Element x = sampler.element_in(e.domain().space());
    const Element y = x.adjoint() * x;
    const Element ey = e(y);
    const double slack = 1e-12 * std::max(1.0, operator_norm(y));
    auto holds = [&](double c) { return (ey - y * Complex(c)).min_hermitian_eigenvalue() >= -slack; };
    if (holds(best)) continue;
    double lo = 0.0;
    double hi = best;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    best = lo;
  }
  return best;
}

}  // namespace incl
