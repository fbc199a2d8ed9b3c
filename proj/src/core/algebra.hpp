#pragma once

#include <memory>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace incl {

/// A finite direct sum M_{n_1} (+) ... (+) M_{n_k} of full complex matrix algebras.
///
/// Elements are vectorized block by block, row-major inside each block, so the
/// canonical coordinate of the matrix unit e^{(r)}_{ij} is offset(r) + i*n_r + j.
/// Copies share the immutable layout.
class MultiMatrixAlgebra {
 public:
  explicit MultiMatrixAlgebra(std::vector<int> block_dims);

  static MultiMatrixAlgebra full_matrix(int n) { return MultiMatrixAlgebra({n}); }
  /// C^n, i.e. n one-dimensional blocks.
  static MultiMatrixAlgebra commutative(int n) { return MultiMatrixAlgebra(std::vector<int>(n, 1)); }

  std::span<const int> block_dims() const { return layout_->dims; }
  int num_blocks() const { return static_cast<int>(layout_->dims.size()); }
  int block_dim(int r) const { return layout_->dims[r]; }
  int offset(int r) const { return layout_->offsets[r]; }
  int vector_dim() const { return layout_->vector_dim; }

  bool operator==(const MultiMatrixAlgebra& other) const;

 private:
  struct Layout {
    std::vector<int> dims;
    std::vector<int> offsets;
    int vector_dim = 0;
  };
  std::shared_ptr<const Layout> layout_;
};

/// An immutable member of a MultiMatrixAlgebra.
class Element {
 public:
  Element(MultiMatrixAlgebra algebra, std::vector<Matrix> blocks);

  static Element zero(const MultiMatrixAlgebra& algebra);
  static Element unit(const MultiMatrixAlgebra& algebra);
  static Element scalar(const MultiMatrixAlgebra& algebra, Complex value);
  static Element matrix_unit(const MultiMatrixAlgebra& algebra, int block, int row, int col);
  static Element from_vector(const MultiMatrixAlgebra& algebra, const Vector& coords);

  const MultiMatrixAlgebra& algebra() const { return algebra_; }
  const Matrix& block(int r) const { return blocks_[r]; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }

  Vector to_vector() const;
  Element adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double norm() const;
  /// Smallest eigenvalue of the Hermitian part (x + x*)/2 over all blocks.
  double min_hermitian_eigenvalue() const;
  /// Smallest singular value over all blocks.
  double min_singular_value() const;
  /// Blockwise inverse; throws Precondition when some block is singular at `rank_tol`.
  Element inverse(double rank_tol = 1e-12) const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator*(const Element& other) const;
  Element operator*(Complex s) const;
  Element operator-() const;

 private:
  void require_same(const Element& other) const;

  MultiMatrixAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

inline Element operator*(Complex s, const Element& x) { return x * s; }

/// Trace inner product <x, y> = tr(x* y) summed over blocks.
Complex inner(const Element& x, const Element& y);

/// max over blocks of the largest singular value.
double operator_norm(const Element& x);

inline Element commutator(const Element& x, const Element& y) { return x * y - y * x; }

struct ProjectionReport {
  bool pass = false;
  double idempotence_defect = 0.0;  // ||x^2 - x||
  double adjoint_defect = 0.0;      // ||x - x*||
};

ProjectionReport is_projection(const Element& x, const Tolerance& tol);

}  // namespace incl
