#include <gtest/gtest.h>

#include "core/random.hpp"
#include "rohlin/rohlin.hpp"
#include "support.hpp"

using namespace incl;

namespace {

const Tolerance kTol{};

struct Prepared {
  ConditionalExpectation e;
  QuasiBasis qb;
  IndexValue index;
};

Prepared setup(const ConditionalExpectation& e) {
  QuasiBasis qb = solve_quasi_basis(e, kTol);
  IndexValue index = watatani_index(e, qb, kTol);
  return {e, std::move(qb), std::move(index)};
}

ConditionalExpectation swap_expectation() { return canonical_expectation(swap_action(2, kTol), kTol); }

ProjectionSequence orbit(const GroupAction& act, const Element& e) {
  ProjectionSequence out;
  for (int g = 0; g < act.group().order(); ++g) out.push_back(act.apply(g, e));
  return out;
}

ProjectionSequence swap_witness() {
  const GroupAction act = swap_action(2, kTol);
  return orbit(act, fixtures::block_diag(act.algebra(), {Matrix::Identity(2, 2), Matrix::Zero(2, 2)}));
}

ProjectionSequence translation_witness(const GroupAction& act) {
  return orbit(act, Element::matrix_unit(act.algebra(), act.group().unit(), 0, 0));
}

ProjectionSequence diagonal_units(int n) {
  const auto alg = MultiMatrixAlgebra::full_matrix(n);
  ProjectionSequence out;
  for (int i = 0; i < n; ++i) out.push_back(Element::matrix_unit(alg, 0, i, i));
  return out;
}

TEST(RohlinCheck, SwapPasses) {
  const Prepared s = setup(swap_expectation());
  const RohlinReport rep = rohlin_check(s.e, s.index, swap_witness(), kTol);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.expectation_defect, 1e-12);
  EXPECT_GT(rep.injectivity_margin, 0.1);
  EXPECT_GT(rep.injectivity_margin_p, 0.1);
}

TEST(RohlinCheck, SingleSummandIsNotInjective) {
  const Prepared s = setup(swap_expectation());
  const ProjectionSequence single{swap_witness()[0]};
  const RohlinReport rep = rohlin_check(s.e, s.index, single, kTol);
  EXPECT_LT(rep.expectation_defect, 1e-12);
  EXPECT_LT(rep.injectivity_margin, kTol.rank_tol);
  EXPECT_GT(rep.injectivity_margin_p, 0.1);
  EXPECT_FALSE(rep.pass);
}

TEST(RohlinCheck, PinchingFailsForEveryCentralProjection) {
  const Prepared s = setup(fixtures::pinching(2, kTol));
  const auto alg = s.e.ambient();
  for (const auto& e : {Element::zero(alg), Element::unit(alg)}) {
    const ProjectionSequence seq{e};
    const RohlinReport rep = rohlin_check(s.e, s.index, seq, kTol);
    EXPECT_FALSE(rep.pass);
    EXPECT_GE(rep.expectation_defect, 0.5 - 1e-9);
  }
  const ProjectionSequence diag{Element::matrix_unit(alg, 0, 0, 0)};
  const RohlinReport rep = rohlin_check(s.e, s.index, diag, kTol);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.centrality_defect, 0.5);
}

TEST(RohlinCheck, ZeroFailsInjectivityAndExpectation) {
  const Prepared s = setup(swap_expectation());
  const ProjectionSequence zero{Element::zero(s.e.ambient())};
  const RohlinReport rep = rohlin_check(s.e, s.index, zero, kTol);
  EXPECT_NEAR(rep.expectation_defect, 0.5, 1e-12);
  EXPECT_EQ(rep.injectivity_margin, 0.0);
  EXPECT_FALSE(rep.pass);
}

TEST(RohlinCheck, RejectsEmptyAndForeignSequences) {
  const Prepared s = setup(swap_expectation());
  EXPECT_THROW(rohlin_check(s.e, s.index, ProjectionSequence{}, kTol), Error);
  const ProjectionSequence foreign{Element::unit(MultiMatrixAlgebra::full_matrix(2))};
  EXPECT_THROW(rohlin_check(s.e, s.index, foreign, kTol), Error);
}

TEST(ApproxRep, Examples) {
  const Prepared s = setup(swap_expectation());
  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  ProjectionSequence lifted;
  for (const auto& x : swap_witness()) lifted.push_back(bc.lambda(x));
  EXPECT_TRUE(approx_rep_check(bc.dual, lifted, kTol).pass);

  const ProjectionSequence unit{Element::unit(s.e.ambient())};
  const ApproxRepReport one = approx_rep_check(s.e, unit, kTol);
  EXPECT_FALSE(one.pass);
  EXPECT_GT(one.module_defect, 0.1);
  EXPECT_LT(one.membership_defect, 1e-12);

  const ApproxRepReport outside = approx_rep_check(s.e, swap_witness(), kTol);
  EXPECT_FALSE(outside.pass);
  EXPECT_GT(outside.membership_defect, 0.5);
}

TEST(ApproxRep, PinchingDiagonalUnits) {
  for (int n : {2, 3}) {
    const ConditionalExpectation e = fixtures::pinching(n, kTol);
    const ApproxRepReport rep = approx_rep_check(e, diagonal_units(n), kTol);
    EXPECT_TRUE(rep.pass) << n;
    EXPECT_NEAR(rep.injectivity_margin, 1.0, 1e-10);
    // A single diagonal unit kills the other diagonal coordinates.
    const ProjectionSequence single{diagonal_units(n)[0]};
    EXPECT_FALSE(approx_rep_check(e, single, kTol).pass);
  }
}

TEST(DualityForward, SwapAndTranslations) {
  std::vector<std::pair<ConditionalExpectation, ProjectionSequence>> cases{{swap_expectation(), swap_witness()}};
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
    const GroupAction act = translation_action(g, kTol);
    cases.emplace_back(canonical_expectation(act, kTol), translation_witness(act));
  }
  for (const auto& [e, seq] : cases) {
    const Prepared s = setup(e);
    const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
    const ForwardResult fw = duality_forward(bc, seq, kTol);
    EXPECT_TRUE(fw.report.pass);
    EXPECT_LT(fw.report.max_defect, 1e-12);
  }
}

TEST(DualityForward, PerturbedWitnessLocalizes) {
  const Prepared s = setup(swap_expectation());
  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  ProjectionSequence seq = swap_witness();
  const auto alg = s.e.ambient();
  const Element offdiag = Element::matrix_unit(alg, 0, 0, 1) + Element::matrix_unit(alg, 0, 1, 0);
  seq[0] = seq[0] + Complex(0.1) * offdiag;
  const ForwardResult fw = duality_forward(bc, seq, kTol);
  EXPECT_FALSE(fw.report.pass);
  EXPECT_GT(fw.report.dual_module_defect, 0.01);
  EXPECT_GT(fw.report.precondition.projection_defect, 0.01);
  EXPECT_GT(fw.report.precondition.centrality_defect, 0.01);
  // The untouched stage is still exact.
  const ProjectionSequence clean{seq[1]};
  EXPECT_LT(duality_forward(bc, clean, kTol).report.dual_module_defect, 1e-12);
}

TEST(DualityBackward, PinchingGivesDualRohlinProjection) {
  const Prepared s = setup(fixtures::pinching(2, kTol));
  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  const BackwardResult bw = duality_backward(bc, s.qb, diagonal_units(2), kTol);
  EXPECT_TRUE(bw.report.pass);
  EXPECT_TRUE(bw.report.dual_witness.pass);
  const RecoverResult rc = recover_rohlin_projection(bc, bw.witness, kTol);
  EXPECT_TRUE(rc.report.pass);
  for (std::size_t k = 0; k < rc.witness.size(); ++k)
    EXPECT_LT(operator_norm(rc.witness[k] - diagonal_units(2)[k]), kTol.eq_tol);
}

TEST(DualityBackward, UnitWhenRangeIsWhole) {
  const Subalgebra whole = Subalgebra::whole(MultiMatrixAlgebra::full_matrix(2));
  const Prepared s = setup(ConditionalExpectation::create(whole, whole, Matrix::Identity(4, 4), kTol));
  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  const ProjectionSequence unit{Element::unit(s.e.ambient())};
  const BackwardResult bw = duality_backward(bc, s.qb, unit, kTol);
  EXPECT_TRUE(bw.report.pass);
  EXPECT_LT(operator_norm(bw.witness[0] - Element::unit(bc.algebra.ambient())), 1e-12);

  const ProjectionSequence jones{bc.jones};
  const RecoverResult rc = recover_rohlin_projection(bc, jones, kTol);
  EXPECT_TRUE(rc.report.pass);
  EXPECT_LT(operator_norm(rc.witness[0] - Element::unit(s.e.ambient())), 1e-12);
}

TEST(DualityBackward, CorruptedQuasiBasisFails) {
  const Prepared s = setup(fixtures::pinching(2, kTol));
  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  std::vector<QuasiBasisPair> pairs = s.qb.pairs();
  pairs[0].u = pairs[0].u * Complex(2.0);
  const QuasiBasis corrupted(pairs, s.qb.report());
  const BackwardResult bw = duality_backward(bc, corrupted, diagonal_units(2), kTol);
  EXPECT_FALSE(bw.report.pass);
  EXPECT_GT(bw.report.projection_defect, 0.01);
}

TEST(DualityRoundTrip, RecoversInput) {
  std::vector<std::pair<ConditionalExpectation, ProjectionSequence>> cases{{swap_expectation(), swap_witness()}};
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}) {
    const GroupAction act = translation_action(g, kTol);
    cases.emplace_back(canonical_expectation(act, kTol), translation_witness(act));
  }
  for (const auto& [e, seq] : cases) {
    const Prepared s = setup(e);
    const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
    const RoundTripReport rep = duality_roundtrip(bc, seq, kTol);
    EXPECT_TRUE(rep.pass);
    EXPECT_LT(rep.recovered_vs_input, kTol.eq_tol);
    EXPECT_LT(rep.max_defect, kTol.eq_tol);
  }
}

TEST(RelativeCommutant, Examples) {
  const Prepared s = setup(swap_expectation());
  const RelativeCommutantReport delta = relative_commutant_report(s.e.domain(), s.e.range(), kTol);
  EXPECT_EQ(delta.dim, 2);
  EXPECT_FALSE(delta.contained);

  const BasicConstruction bc = build_basic_construction(s.e, s.qb, kTol);
  EXPECT_TRUE(relative_commutant_report(bc.algebra, bc.image, kTol).contained);

  const Subalgebra whole = Subalgebra::whole(MultiMatrixAlgebra({1, 2}));
  const RelativeCommutantReport same = relative_commutant_report(whole, whole, kTol);
  EXPECT_EQ(same.dim, 2);
  EXPECT_TRUE(same.contained);
}

TEST(RelativeCommutant, ApproxRepImpliesContainment) {
  for (int n : {2, 3, 4}) {
    const ConditionalExpectation e = fixtures::pinching(n, kTol);
    ASSERT_TRUE(approx_rep_check(e, diagonal_units(n), kTol).pass);
    const RelativeCommutantReport rep = relative_commutant_report(e.domain(), e.range(), kTol);
    EXPECT_TRUE(rep.contained);
    EXPECT_EQ(rep.dim, n);
  }
}

TEST(Beta, Examples) {
  const Prepared s = setup(swap_expectation());
  const ProjectionSequence seq = swap_witness();
  const BetaReport rep = beta_map(s.e, s.index, seq, kTol);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.identity_on_p_defect, 1e-12);
  EXPECT_LT(rep.resolve_defect, 1e-12);

  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, -1, 1, 7;
  const auto alg = s.e.ambient();
  const Element x(alg, {a, b});
  const Element beta0 = s.index.element * s.e(x * seq[0]);
  EXPECT_LT(operator_norm(beta0 - Element(alg, {a, a})), 1e-12);
  EXPECT_LT(operator_norm(beta0 * seq[0] - x * seq[0]), 1e-12);
  const Element beta1 = s.index.element * s.e(x * seq[1]);
  EXPECT_LT(operator_norm(beta1 - Element(alg, {b, b})), 1e-12);
}

TEST(Beta, RequiresRohlinWitness) {
  const Prepared s = setup(fixtures::pinching(2, kTol));
  const ProjectionSequence unit{Element::unit(s.e.ambient())};
  try {
    beta_map(s.e, s.index, unit, kTol);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Precondition);
  }
}

TEST(Uniqueness, NoPerturbedExpectationOntoTheSameRange) {
  for (int n : {2, 3}) {
    const ConditionalExpectation e = fixtures::pinching(n, kTol);
    ASSERT_TRUE(approx_rep_check(e, diagonal_units(n), kTol).pass);
    // Perturbations that keep E(A) in P and E = id on P; only the bimodule and
    // positivity axioms can reject them.
    const Matrix vp = e.domain().space().basis().adjoint() * e.range().space().basis();
    const Matrix q = vp * vp.adjoint();
    const Matrix r = Matrix::Identity(q.rows(), q.cols()) - q;
    GaussianSampler sampler(7);
    for (int trial = 0; trial < kTol.sample_count; ++trial) {
      Matrix g(q.rows(), q.cols());
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = sampler.complex_normal();
      const Matrix candidate = e.map() + 1e-3 * q * g * r;
      const ExpectationReport rep = verify_expectation(e.domain(), e.range(), candidate, kTol);
      EXPECT_FALSE(rep.pass) << trial;
      EXPECT_TRUE(rep.range_ok);
    }
  }
}

}  // namespace
