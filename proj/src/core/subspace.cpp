#include "core/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "core/random.hpp"

namespace incl {

namespace {

/// Two-pass Gram-Schmidt accumulator over canonical coordinate vectors.
class OrthonormalBuilder {
 public:
  OrthonormalBuilder(const Matrix& initial, int rows) : rows_(rows) {
    q_.resize(rows, std::max<Eigen::Index>(initial.cols(), 8));
    q_.leftCols(initial.cols()) = initial;
    count_ = static_cast<int>(initial.cols());
  }

  /// Returns true when `c` contributed a new direction.
  bool add(const Vector& c, double rank_tol) {
    const double scale = std::max(1.0, c.norm());
    Vector r = c;
    for (int pass = 0; pass < 2 && count_ > 0; ++pass) {
      const auto basis = q_.leftCols(count_);
      r -= basis * (basis.adjoint() * r);
    }
    const double rn = r.norm();
    if (rn <= rank_tol * scale) {
      max_rejected_ = std::max(max_rejected_, rn / scale);
      return false;
    }
    if (count_ == q_.cols()) q_.conservativeResize(Eigen::NoChange, 2 * q_.cols());
    q_.col(count_++) = r / rn;
    return true;
  }

  int count() const { return count_; }
  Matrix basis() const { return q_.leftCols(count_); }
  /// Relative residual of the largest candidate judged to be already in the span.
  double max_rejected() const { return max_rejected_; }

 private:
  int rows_;
  Matrix q_;
  int count_ = 0;
  double max_rejected_ = 0.0;
};

}  // namespace

Matrix null_space(const Matrix& k, double rank_tol) {
  const Eigen::Index n = k.cols();
  if (n == 0) return Matrix(0, 0);
  if (k.rows() == 0) return Matrix::Identity(n, n);
  Matrix kk = k;
  if (k.rows() > 2 * n) {
    // Compress tall systems; the null space is that of the triangular factor.
    Eigen::HouseholderQR<Matrix> qr(k);
    kk = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  // BDCSVD returns inaccurate right vectors for heavily repeated singular values.
  Eigen::JacobiSVD<Matrix> svd(kk, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = rank_tol * std::max(1.0, smax);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Matrix as_columns(std::span<const Element> elements) {
  if (elements.empty()) return Matrix(0, 0);
  Matrix m(elements.front().algebra().vector_dim(), static_cast<Eigen::Index>(elements.size()));
  for (std::size_t k = 0; k < elements.size(); ++k) m.col(k) = elements[k].to_vector();
  return m;
}

Matrix extend_orthonormal(const Matrix& basis, const Matrix& candidates, double rank_tol) {
  OrthonormalBuilder b(basis, static_cast<int>(candidates.rows()));
  for (Eigen::Index k = 0; k < candidates.cols(); ++k) b.add(candidates.col(k), rank_tol);
  return b.basis().rightCols(b.count() - basis.cols());
}

Subspace::Subspace(MultiMatrixAlgebra ambient, Matrix basis)
    : ambient_(std::move(ambient)), basis_(std::make_shared<const Matrix>(std::move(basis))) {
  if (basis_->rows() != ambient_.vector_dim()) {
    fail(ErrorKind::Conformance, "subspace: basis vectors have wrong length");
  }
  const Matrix gram = basis_->adjoint() * *basis_;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > 1e-8) {
    fail(ErrorKind::InvalidArgument, "subspace: basis is not orthonormal");
  }
}

Subspace Subspace::whole(const MultiMatrixAlgebra& ambient) {
  const int n = ambient.vector_dim();
  return Subspace(ambient, Matrix::Identity(n, n));
}

Subspace Subspace::span(const MultiMatrixAlgebra& ambient, std::span<const Element> elements,
                        double rank_tol) {
  for (const auto& e : elements) {
    if (!(e.algebra() == ambient)) fail(ErrorKind::Conformance, "subspace: element not in ambient");
  }
  if (elements.empty()) return Subspace(ambient, Matrix(ambient.vector_dim(), 0));
  return span_vectors(ambient, as_columns(elements), rank_tol);
}

Subspace Subspace::span_vectors(const MultiMatrixAlgebra& ambient, const Matrix& columns,
                                double rank_tol) {
  Matrix empty(ambient.vector_dim(), 0);
  return Subspace(ambient, extend_orthonormal(empty, columns, rank_tol));
}

Element Subspace::basis_element(int k) const {
  return Element::from_vector(ambient_, basis_->col(k));
}

std::vector<Element> Subspace::basis_elements() const {
  std::vector<Element> out;
  out.reserve(dim());
  for (int k = 0; k < dim(); ++k) out.push_back(basis_element(k));
  return out;
}

Vector Subspace::coordinates(const Element& x) const {
  if (!(x.algebra() == ambient_)) fail(ErrorKind::Conformance, "subspace: element not in ambient");
  return coordinates(x.to_vector());
}

Vector Subspace::coordinates(const Vector& canonical) const {
  return basis_->adjoint() * canonical;
}

Element Subspace::element(const Vector& coords) const {
  if (coords.size() != dim()) fail(ErrorKind::Conformance, "subspace: coordinate vector has wrong length");
  return Element::from_vector(ambient_, *basis_ * coords);
}

Element Subspace::project(const Element& x) const { return element(coordinates(x)); }

double Subspace::distance(const Element& x) const {
  const Vector v = x.to_vector();
  return (v - *basis_ * (basis_->adjoint() * v)).norm();
}

double Subspace::containment_defect(const Subspace& other) const {
  if (other.dim() == 0) return 0.0;
  const Matrix r = other.basis() - *basis_ * (basis_->adjoint() * other.basis());
  return r.colwise().norm().maxCoeff();
}

std::string SubalgebraReport::failure() const {
  if (!unit_ok) return "subalgebra: unit missing";
  if (!adjoint_ok) return "subalgebra: adjoint-closure failed";
  if (!product_ok) return "subalgebra: product-closure failed";
  return {};
}

SubalgebraReport check_subalgebra(const Subspace& space, const Tolerance& tol) {
  SubalgebraReport rep;
  const auto basis = space.basis_elements();
  rep.unit_defect = space.distance(Element::unit(space.ambient()));
  for (const auto& b : basis) rep.adjoint_defect = std::max(rep.adjoint_defect, space.distance(b.adjoint()));
  for (const auto& x : basis)
    for (const auto& y : basis) rep.product_defect = std::max(rep.product_defect, space.distance(x * y));
  const double scale = std::sqrt(static_cast<double>(space.ambient().vector_dim()));
  rep.unit_ok = within(rep.unit_defect, tol.eq_tol, scale);
  rep.adjoint_ok = within(rep.adjoint_defect, tol.eq_tol);
  rep.product_ok = within(rep.product_defect, tol.eq_tol, scale);
  rep.pass = rep.unit_ok && rep.adjoint_ok && rep.product_ok;
  return rep;
}

Subalgebra::Subalgebra(Subspace space, std::vector<Element> generators, SubalgebraReport report)
    : space_(std::move(space)),
      generators_(std::make_shared<const std::vector<Element>>(std::move(generators))),
      report_(report) {}

Subalgebra Subalgebra::verified(Subspace space, const Tolerance& tol) {
  SubalgebraReport rep = check_subalgebra(space, tol);
  if (!rep.pass) {
    std::ostringstream os;
    os << rep.failure() << " (unit " << rep.unit_defect << ", adjoint " << rep.adjoint_defect
       << ", product " << rep.product_defect << ")";
    fail(ErrorKind::Verification, os.str());
  }
  auto gens = space.basis_elements();
  return Subalgebra(std::move(space), std::move(gens), rep);
}

Subalgebra Subalgebra::whole(const MultiMatrixAlgebra& ambient) {
  std::vector<Element> gens;
  for (int r = 0; r < ambient.num_blocks(); ++r) {
    const int n = ambient.block_dim(r);
    // Diagonal units plus the superdiagonal chain generate each block.
    for (int i = 0; i < n; ++i) gens.push_back(Element::matrix_unit(ambient, r, i, i));
    for (int i = 0; i + 1 < n; ++i) gens.push_back(Element::matrix_unit(ambient, r, i, i + 1));
  }
  SubalgebraReport rep;
  rep.pass = rep.unit_ok = rep.adjoint_ok = rep.product_ok = true;
  return Subalgebra(Subspace::whole(ambient), std::move(gens), rep);
}

Subalgebra generated_subalgebra(const MultiMatrixAlgebra& ambient, std::span<const Element> generators,
                                const Tolerance& tol) {
  std::vector<Element> gens;
  for (const auto& g : generators) {
    if (!(g.algebra() == ambient)) fail(ErrorKind::Conformance, "generated_subalgebra: generator not in ambient");
    gens.push_back(g);
    if ((g - g.adjoint()).frobenius_norm() > tol.rank_tol * std::max(1.0, g.frobenius_norm()))
      gens.push_back(g.adjoint());
  }

  const int rows = ambient.vector_dim();
  OrthonormalBuilder builder(Matrix(rows, 0), rows);
  builder.add(Element::unit(ambient).to_vector(), tol.rank_tol);
  for (const auto& g : gens) builder.add(g.to_vector(), tol.rank_tol);

  // span <- span + gens * (newest part of span) until nothing new appears.
  int frontier_begin = 0;
  while (frontier_begin < builder.count()) {
    const int frontier_end = builder.count();
    const Matrix snapshot = builder.basis();
    for (int k = frontier_begin; k < frontier_end; ++k) {
      const Element b = Element::from_vector(ambient, snapshot.col(k));
      for (const auto& g : gens) builder.add((g * b).to_vector(), tol.rank_tol);
    }
    frontier_begin = frontier_end;
  }

  Subspace space(ambient, builder.basis());
  SubalgebraReport rep;
  rep.product_defect = builder.max_rejected();
  for (int k = 0; k < space.dim(); ++k)
    rep.adjoint_defect = std::max(rep.adjoint_defect, space.distance(space.basis_element(k).adjoint()));
  rep.adjoint_ok = within(rep.adjoint_defect, tol.eq_tol);
  rep.pass = rep.adjoint_ok;
  if (!rep.pass) fail(ErrorKind::Verification, "generated_subalgebra: adjoint-closure failed");
  std::vector<Element> recorded(generators.begin(), generators.end());
  return Subalgebra(std::move(space), std::move(recorded), rep);
}

Subalgebra relative_commutant(const Subalgebra& container, std::span<const Element> elements,
                              const Tolerance& tol) {
  const auto& ambient = container.ambient();
  const int d = container.dim();
  const int rows = ambient.vector_dim();
  const auto basis = container.basis_elements();
  Matrix k(rows * static_cast<Eigen::Index>(elements.size()), d);
  for (std::size_t s = 0; s < elements.size(); ++s) {
    if (!(elements[s].algebra() == ambient)) fail(ErrorKind::Conformance, "commutant: element not in ambient");
    for (int j = 0; j < d; ++j) {
      k.block(static_cast<Eigen::Index>(s) * rows, j, rows, 1) = commutator(basis[j], elements[s]).to_vector();
    }
  }
  const Matrix null = null_space(k, tol.rank_tol);
  return Subalgebra::verified(Subspace(ambient, container.space().basis() * null), tol);
}

Subalgebra commutant_in(const MultiMatrixAlgebra& ambient, const Subspace& s, const Tolerance& tol) {
  if (!(s.ambient() == ambient)) fail(ErrorKind::Conformance, "commutant: subspace not in ambient");
  std::vector<Element> elems;
  for (const auto& b : s.basis_elements()) {
    elems.push_back(b);
    elems.push_back(b.adjoint());
  }
  return relative_commutant(Subalgebra::whole(ambient), elems, tol);
}

Subalgebra center(const Subalgebra& algebra, const Tolerance& tol) {
  return relative_commutant(algebra, algebra.generators(), tol);
}

std::vector<CentralSummand> central_decomposition(const Subalgebra& algebra, const Tolerance& tol) {
  const Subalgebra z = center(algebra, tol);
  const auto& ambient = algebra.ambient();
  const int zdim = z.dim();
  GaussianSampler sampler(tol.seed ^ 0x5eedc0ffeeULL);

  for (int attempt = 0; attempt < 8; ++attempt) {
    const Element x = sampler.element_in(z.space());
    const Element h = 0.5 * (x + x.adjoint());

    struct Eig {
      double value;
      int block;
      Vector vec;
    };
    std::vector<Eig> eigs;
    for (int r = 0; r < ambient.num_blocks(); ++r) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(h.block(r));
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        eigs.push_back({es.eigenvalues()(i), r, es.eigenvectors().col(i)});
    }
    std::stable_sort(eigs.begin(), eigs.end(), [](const Eig& a, const Eig& b) { return a.value < b.value; });

    const double spread = eigs.back().value - eigs.front().value;
    const double gap = 1e-6 * std::max(1.0, spread);
    std::vector<std::vector<const Eig*>> clusters;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      if (i == 0 || eigs[i].value - eigs[i - 1].value > gap) clusters.emplace_back();
      clusters.back().push_back(&eigs[i]);
    }
    if (static_cast<int>(clusters.size()) != zdim) continue;

    std::vector<CentralSummand> out;
    bool ok = true;
    for (const auto& cluster : clusters) {
      std::vector<Matrix> blocks;
      for (int n : ambient.block_dims()) blocks.push_back(Matrix::Zero(n, n));
      for (const Eig* e : cluster) blocks[e->block] += e->vec * e->vec.adjoint();
      Element proj(ambient, std::move(blocks));
      if (!within(z.space().distance(proj), tol.eq_tol, proj.frobenius_norm())) {
        ok = false;
        break;
      }
      std::vector<Element> cut;
      for (const auto& b : algebra.basis_elements()) cut.push_back(b * proj);
      const int dim = Subspace::span(ambient, cut, tol.rank_tol).dim();
      const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
      if (n * n != dim) {
        ok = false;
        break;
      }
      out.push_back({std::move(proj), dim, n});
    }
    if (ok) return out;
  }
  fail(ErrorKind::Verification, "central_decomposition: could not separate minimal central projections");
}

}  // namespace incl
