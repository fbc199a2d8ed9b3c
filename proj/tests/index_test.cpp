#include <gtest/gtest.h>

#include <chrono>
#include <complex>

#include "core/random.hpp"
#include "index/lsqr.hpp"
#include "index/quasi_basis.hpp"
#include "support.hpp"

using namespace incl;

namespace {

const Tolerance kTol{};

/// Shift-and-clock pairs (S^k, S^-k) for the pinching, checked independently of the solver.
std::vector<QuasiBasisPair> shift_pairs(int n) {
  const auto alg = MultiMatrixAlgebra::full_matrix(n);
  Matrix s = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) s((i + 1) % n, i) = 1.0;
  std::vector<QuasiBasisPair> pairs;
  Matrix p = Matrix::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    pairs.push_back({Element(alg, {p}), Element(alg, {Matrix(p.adjoint())})});
    p = s * p;
  }
  return pairs;
}

TEST(QuasiBasis, PinchingIndexMatchesShiftBasis) {
  for (int n = 2; n <= 8; ++n) {
    const ConditionalExpectation e = fixtures::pinching(n, kTol);
    const auto oracle = shift_pairs(n);
    ASSERT_LT(left_identity_defect(e, oracle, kTol), 1e-12);
    ASSERT_LT(right_identity_defect(e, oracle, kTol), 1e-12);
    Element sum = Element::zero(e.ambient());
    for (const auto& p : oracle) sum = sum + p.u * p.v;

    const QuasiBasis qb = solve_quasi_basis(e, kTol);
    const IndexValue index = watatani_index(e, qb, kTol);
    ASSERT_TRUE(index.scalar.has_value()) << n;
    EXPECT_NEAR(*index.scalar, n, 1e-8);
    EXPECT_LT(operator_norm(index.element - sum), 1e-8);
    EXPECT_LT(std::max(qb.report().left_defect, qb.report().right_defect), kTol.eq_tol);
    EXPECT_EQ(qb.report().method, n <= 4 ? "dense" : "lsqr");
  }
}

TEST(QuasiBasis, ShiftBasisForM2) {
  const ConditionalExpectation e = fixtures::pinching(2, kTol);
  const auto alg = e.ambient();
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const std::vector<QuasiBasisPair> pairs{{Element::unit(alg), Element::unit(alg)}, {Element(alg, {x}), Element(alg, {x})}};
  EXPECT_LT(left_identity_defect(e, pairs, kTol), 1e-14);
  EXPECT_LT(right_identity_defect(e, pairs, kTol), 1e-14);
}

TEST(QuasiBasis, IdentityExpectation) {
  const auto m2 = MultiMatrixAlgebra::full_matrix(2);
  const Subalgebra whole = Subalgebra::whole(m2);
  const auto e = ConditionalExpectation::create(whole, whole, Matrix::Identity(4, 4), kTol);
  const std::vector<QuasiBasisPair> unit{{Element::unit(m2), Element::unit(m2)}};
  EXPECT_LT(left_identity_defect(e, unit, kTol), 1e-15);
  const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
  ASSERT_TRUE(index.scalar);
  EXPECT_NEAR(*index.scalar, 1.0, 1e-12);
}

TEST(QuasiBasis, SwapFixedPointsIndexTwo) {
  const ConditionalExpectation e = canonical_expectation(swap_action(2, kTol), kTol);
  const auto alg = e.ambient();
  // {(sqrt2 z_r, sqrt2 z_r)} over the central projections z_0 = (1,0), z_1 = (0,1): an explicit oracle.
  std::vector<QuasiBasisPair> oracle;
  Element sum = Element::zero(alg);
  for (int r = 0; r < 2; ++r) {
    const Element z = Element(alg, {Matrix::Identity(2, 2) * double(r == 0), Matrix::Identity(2, 2) * double(r == 1)});
    oracle.push_back({z * std::sqrt(2.0), z * std::sqrt(2.0)});
    sum = sum + oracle.back().u * oracle.back().v;
  }
  EXPECT_LT(operator_norm(sum - Element::scalar(alg, 2.0)), 1e-12);
  EXPECT_LT(right_identity_defect(e, oracle, kTol), 1e-12);
  EXPECT_LT(left_identity_defect(e, oracle, kTol), 1e-12);
  const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
  ASSERT_TRUE(index.scalar);
  EXPECT_NEAR(*index.scalar, 2.0, 1e-10);
}

TEST(QuasiBasis, NonFaithfulExpectationHasNoQuasiBasis) {
  const MultiMatrixAlgebra c2({1, 1});
  const Subalgebra whole = Subalgebra::whole(c2);
  const std::vector<Element> one{Element::unit(c2)};
  const Subalgebra scalars = generated_subalgebra(c2, one, kTol);
  Matrix amb = Matrix::Zero(2, 2);
  amb(0, 0) = 1.0;
  amb(1, 0) = 1.0;  // (a, b) -> (a, a)
  const auto e = ConditionalExpectation::from_ambient_map(whole, scalars, amb, kTol);
  try {
    solve_quasi_basis(e, kTol);
    FAIL() << "expected InfiniteIndex";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::InfiniteIndex);
  }
}

TEST(QuasiBasis, IndexIndependentOfBasis) {
  GaussianSampler rng(5);
  const std::vector<ConditionalExpectation> es{fixtures::pinching(3, kTol),
                                               canonical_expectation(swap_action(2, kTol), kTol)};
  for (const auto& e : es) {
    const IndexValue ref = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
    const int d = e.domain().dim();
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    const Matrix rotated = e.domain().space().basis() * q;
    std::vector<Element> v;
    for (int k = d - 1; k >= 0; --k) v.push_back(Element::from_vector(e.ambient(), rotated.col(k)));
    const IndexValue other = watatani_index(e, solve_quasi_basis(e, v, kTol), kTol);
    EXPECT_LT(operator_norm(other.element - ref.element), kTol.eq_tol);
  }
}

TEST(QuasiBasis, FixedPointIndexIsGroupOrder) {
  for (int n : {2, 3, 4}) {
    const auto e = canonical_expectation(translation_action(FiniteGroup::cyclic(n), kTol), kTol);
    const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
    ASSERT_TRUE(index.scalar);
    EXPECT_NEAR(*index.scalar, n, 1e-8);
  }
}

TEST(WatataniIndex, CorruptedPairsRejected) {
  const ConditionalExpectation e = fixtures::pinching(2, kTol);
  auto pairs = solve_quasi_basis(e, kTol).pairs();
  pairs.front().u = pairs.front().u * 3.0;
  EXPECT_THROW(verified_quasi_basis(e, pairs, "dense", kTol), Error);
}

TEST(WatataniIndex, BlockIndexIsCentralNotScalar) {
  // C in C (+) M2 with weights giving a non-scalar index element.
  const MultiMatrixAlgebra alg({1, 2});
  const std::vector<Element> one{Element::unit(alg)};
  const Subalgebra scalars = generated_subalgebra(alg, one, kTol);
  const std::vector<double> w{1.0, 1.0};
  const auto e = trace_preserving_expectation(alg, scalars, w, kTol);
  const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
  EXPECT_LT(index.centrality_defect, kTol.eq_tol);
  EXPECT_GT(index.min_eigenvalue, 0.0);
  EXPECT_TRUE(index.invertible);
  EXPECT_FALSE(index.scalar.has_value());
}

TEST(EInverse, UnitGivesIndex) {
  const ConditionalExpectation e = fixtures::pinching(3, kTol);
  const QuasiBasis qb = solve_quasi_basis(e, kTol);
  const IndexValue index = watatani_index(e, qb, kTol);
  const auto r = e_inverse_map(e, qb, Element::unit(e.ambient()), kTol);
  EXPECT_LT(operator_norm(r.value - index.element), 1e-10);
}

TEST(EInverse, PinchingOfSignIsZero) {
  const ConditionalExpectation e = fixtures::pinching(2, kTol);
  const QuasiBasis qb = solve_quasi_basis(e, kTol);
  const auto alg = e.ambient();
  const Element x = Element::matrix_unit(alg, 0, 0, 0) - Element::matrix_unit(alg, 0, 1, 1);
  const auto r = e_inverse_map(e, qb, x, kTol);
  EXPECT_LT(operator_norm(r.value), 1e-10);
  EXPECT_LT(r.commutation_defect, kTol.eq_tol);
}

TEST(EInverse, SwapMatchesDirectSummation) {
  const ConditionalExpectation e = canonical_expectation(swap_action(2, kTol), kTol);
  const QuasiBasis qb = solve_quasi_basis(e, kTol);
  const auto alg = e.ambient();
  const Element x = fixtures::block_diag(alg, {Matrix::Identity(2, 2), -Matrix::Identity(2, 2)});
  const auto r = e_inverse_map(e, qb, x, kTol);
  Element direct = Element::zero(alg);
  for (const auto& p : qb.pairs()) direct = direct + p.u * x * p.v;
  EXPECT_LT(operator_norm(r.value - direct), 1e-12);
  EXPECT_LT(center(Subalgebra::whole(alg), kTol).space().distance(r.value), 1e-10);
}

TEST(EInverse, RejectsElementOutsideCommutant) {
  const ConditionalExpectation e = fixtures::pinching(2, kTol);
  const QuasiBasis qb = solve_quasi_basis(e, kTol);
  try {
    e_inverse_map(e, qb, Element::matrix_unit(e.ambient(), 0, 0, 1), kTol);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Precondition);
  }
}

TEST(PimsnerPopa, Examples) {
  const auto m2 = MultiMatrixAlgebra::full_matrix(2);
  const Subalgebra whole = Subalgebra::whole(m2);
  const auto id = ConditionalExpectation::create(whole, whole, Matrix::Identity(4, 4), kTol);
  EXPECT_NEAR(pimsner_popa_margin(id, 32, kTol), 1.0, 1e-6);
  EXPECT_GE(pimsner_popa_margin(fixtures::pinching(2, kTol), 64, kTol), 0.5 - kTol.eq_tol);
  EXPECT_GE(pimsner_popa_margin(canonical_expectation(swap_action(2, kTol), kTol), 64, kTol), 0.5 - kTol.eq_tol);
}

TEST(Lsqr, SolvesRectangularLeastSquares) {
  GaussianSampler rng(9);
  Matrix a(30, 12);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 12; ++j) a(i, j) = rng.complex_normal();
  const Vector b = rng.vector(30);
  const auto r = lsqr([&](const Vector& x) { return Vector(a * x); }, [&](const Vector& y) { return Vector(a.adjoint() * y); },
                      b, 12);
  const Vector ref = a.colPivHouseholderQr().solve(b);
  EXPECT_LT((r.x - ref).norm(), 1e-10);
}

TEST(Runtime, IndexSweepIsFast) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 8; ++n) watatani_index(fixtures::pinching(n, kTol), solve_quasi_basis(fixtures::pinching(n, kTol), kTol), kTol);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(s, 10.0);
}

}  // namespace
