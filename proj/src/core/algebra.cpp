#include "core/algebra.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace incl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Conformance: return "conformance";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Verification: return "verification";
    case ErrorKind::InfiniteIndex: return "infinite-index";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Limit: return "limit";
  }
  return "unknown";
}

void Tolerance::validate() const {
  if (!(eq_tol > 0.0) || !(rank_tol > 0.0) || sample_count <= 0) {
    fail(ErrorKind::InvalidArgument, "tolerance: all thresholds must be positive");
  }
  if (!(eq_tol > rank_tol)) {
    fail(ErrorKind::InvalidArgument, "tolerance: eq_tol must exceed rank_tol");
  }
}

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> block_dims) {
  if (block_dims.empty()) fail(ErrorKind::InvalidArgument, "algebra: at least one block required");
  auto layout = std::make_shared<Layout>();
  int offset = 0;
  for (int n : block_dims) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "algebra: block dimensions must be positive");
    layout->offsets.push_back(offset);
    offset += n * n;
  }
  layout->dims = std::move(block_dims);
  layout->vector_dim = offset;
  layout_ = std::move(layout);
}

bool MultiMatrixAlgebra::operator==(const MultiMatrixAlgebra& other) const {
  return layout_ == other.layout_ || layout_->dims == other.layout_->dims;
}

Element::Element(MultiMatrixAlgebra algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (num_blocks() != algebra_.num_blocks()) {
    fail(ErrorKind::Conformance, "element: block count does not match algebra");
  }
  for (int r = 0; r < num_blocks(); ++r) {
    const int n = algebra_.block_dim(r);
    if (blocks_[r].rows() != n || blocks_[r].cols() != n) {
      std::ostringstream os;
      os << "element: block " << r << " is " << blocks_[r].rows() << "x" << blocks_[r].cols()
         << ", expected " << n << "x" << n;
      fail(ErrorKind::Conformance, os.str());
    }
  }
}

Element Element::zero(const MultiMatrixAlgebra& algebra) { return scalar(algebra, 0.0); }

Element Element::unit(const MultiMatrixAlgebra& algebra) { return scalar(algebra, 1.0); }

Element Element::scalar(const MultiMatrixAlgebra& algebra, Complex value) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra.num_blocks());
  for (int n : algebra.block_dims()) blocks.push_back(value * Matrix::Identity(n, n));
  return Element(algebra, std::move(blocks));
}

Element Element::matrix_unit(const MultiMatrixAlgebra& algebra, int block, int row, int col) {
  if (block < 0 || block >= algebra.num_blocks() || row < 0 || col < 0 ||
      row >= algebra.block_dim(block) || col >= algebra.block_dim(block)) {
    fail(ErrorKind::Conformance, "element: matrix unit index out of range");
  }
  std::vector<Matrix> blocks;
  for (int n : algebra.block_dims()) blocks.push_back(Matrix::Zero(n, n));
  blocks[block](row, col) = 1.0;
  return Element(algebra, std::move(blocks));
}

Element Element::from_vector(const MultiMatrixAlgebra& algebra, const Vector& coords) {
  if (coords.size() != algebra.vector_dim()) {
    fail(ErrorKind::Conformance, "element: coordinate vector has wrong length");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(algebra.num_blocks());
  for (int r = 0; r < algebra.num_blocks(); ++r) {
    const int n = algebra.block_dim(r);
    Matrix m(n, n);
    const int off = algebra.offset(r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = coords(off + i * n + j);
    blocks.push_back(std::move(m));
  }
  return Element(algebra, std::move(blocks));
}

Vector Element::to_vector() const {
  Vector v(algebra_.vector_dim());
  for (int r = 0; r < num_blocks(); ++r) {
    const int n = algebra_.block_dim(r);
    const int off = algebra_.offset(r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(off + i * n + j) = blocks_[r](i, j);
  }
  return v;
}

Element Element::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return Element(algebra_, std::move(blocks));
}

Complex Element::trace() const {
  Complex t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

double Element::frobenius_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return std::sqrt(s);
}

double Element::norm() const { return operator_norm(*this); }

double Element::min_hermitian_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

double Element::min_singular_value() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    lo = std::min(lo, svd.singularValues().minCoeff());
  }
  return lo;
}

Element Element::inverse(double rank_tol) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    if (svd.singularValues().minCoeff() <= rank_tol) {
      fail(ErrorKind::Precondition, "element: not invertible");
    }
    blocks.push_back(b.inverse());
  }
  return Element(algebra_, std::move(blocks));
}

void Element::require_same(const Element& other) const {
  if (!(algebra_ == other.algebra_)) {
    fail(ErrorKind::Conformance, "element: operands live in different algebras");
  }
}

Element Element::operator+(const Element& other) const {
  require_same(other);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t r = 0; r < blocks_.size(); ++r) blocks.push_back(blocks_[r] + other.blocks_[r]);
  return Element(algebra_, std::move(blocks));
}

Element Element::operator-(const Element& other) const {
  require_same(other);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t r = 0; r < blocks_.size(); ++r) blocks.push_back(blocks_[r] - other.blocks_[r]);
  return Element(algebra_, std::move(blocks));
}

Element Element::operator*(const Element& other) const {
  require_same(other);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t r = 0; r < blocks_.size(); ++r) blocks.push_back(blocks_[r] * other.blocks_[r]);
  return Element(algebra_, std::move(blocks));
}

Element Element::operator*(Complex s) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(s * b);
  return Element(algebra_, std::move(blocks));
}

Element Element::operator-() const { return *this * Complex(-1.0); }

Complex inner(const Element& x, const Element& y) {
  if (!(x.algebra() == y.algebra())) {
    fail(ErrorKind::Conformance, "inner: operands live in different algebras");
  }
  Complex s = 0.0;
  for (int r = 0; r < x.num_blocks(); ++r) s += x.block(r).cwiseProduct(y.block(r).conjugate()).sum();
  return std::conj(s);
}

double operator_norm(const Element& x) {
  double hi = 0.0;
  for (int r = 0; r < x.num_blocks(); ++r) {
    const Matrix& b = x.block(r);
    if (b.rows() == 1) {
      hi = std::max(hi, std::abs(b(0, 0)));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(b);
    hi = std::max(hi, svd.singularValues()(0));
  }
  return hi;
}

ProjectionReport is_projection(const Element& x, const Tolerance& tol) {
  ProjectionReport rep;
  rep.idempotence_defect = operator_norm(x * x - x);
  rep.adjoint_defect = operator_norm(x - x.adjoint());
  rep.pass = rep.idempotence_defect <= tol.eq_tol && rep.adjoint_defect <= tol.eq_tol;
  return rep;
}

}  // namespace incl
