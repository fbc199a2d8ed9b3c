#include <gtest/gtest.h>

#include <numeric>

#include "actions/action.hpp"
#include "support.hpp"

using namespace incl;

namespace {

const Tolerance kTol{};

std::vector<Element> indicators(const MultiMatrixAlgebra& alg) {
  std::vector<Element> out;
  for (int g = 0; g < alg.num_blocks(); ++g) out.push_back(Element::matrix_unit(alg, g, 0, 0));
  return out;
}

GroupAction inner_z2() {
  const auto alg = MultiMatrixAlgebra::full_matrix(2);
  Matrix u(2, 2);
  u << 1, 0, 0, -1;
  const std::vector<Element> us{Element::unit(alg), Element(alg, {u})};
  return inner_action(FiniteGroup::cyclic(2), us, kTol);
}

TEST(Group, TablesSatisfyLaws) {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  EXPECT_EQ(s3.order(), 6);
  EXPECT_EQ(s3.labels()[s3.unit()], "[0,1,2]");
  for (int g = 0; g < 6; ++g) EXPECT_EQ(s3.multiply(g, s3.inverse(g)), s3.unit());
  const int t = s3.find("[1,0,2]");
  const int c = s3.find("[1,2,0]");
  EXPECT_NE(s3.multiply(t, c), s3.multiply(c, t));
  EXPECT_TRUE(s3.is_subgroup(std::vector<int>{s3.unit(), t}));
  EXPECT_FALSE(s3.is_subgroup(std::vector<int>{t}));
  EXPECT_FALSE(s3.is_subgroup(std::vector<int>{s3.unit(), c}));
  EXPECT_EQ(s3.right_cosets(std::vector<int>{s3.unit(), t}).size(), 3u);
}

TEST(Group, RejectsBrokenTables) {
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {0, 1}}), Error);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 2}}), Error);
  EXPECT_THROW(FiniteGroup::from_table({{1, 0}, {0, 0}}), Error);
}

TEST(Action, RejectsNonAutomorphism) {
  const auto alg = MultiMatrixAlgebra::commutative(2);
  std::vector<Matrix> maps{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  maps[1](0, 0) = 2.0;
  try {
    GroupAction::create(FiniteGroup::cyclic(2), alg, maps, kTol);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Verification);
  }
}

TEST(FixedPoints, Examples) {
  const auto m2 = MultiMatrixAlgebra::full_matrix(2);
  EXPECT_EQ(fixed_point_algebra(trivial_action(FiniteGroup::cyclic(3), m2, kTol), kTol).dim(), 4);
  const Subalgebra delta = fixed_point_algebra(swap_action(2, kTol), kTol);
  EXPECT_EQ(delta.dim(), 4);
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  const auto alg = delta.ambient();
  EXPECT_LT(delta.space().distance(Element(alg, {x, x})), 1e-12);
  EXPECT_GT(delta.space().distance(Element(alg, {x, Matrix::Zero(2, 2)})), 0.1);
  for (int n : {2, 3, 4}) {
    const Subalgebra fixed = fixed_point_algebra(translation_action(FiniteGroup::cyclic(n), kTol), kTol);
    EXPECT_EQ(fixed.dim(), 1);
  }
  EXPECT_EQ(fixed_point_algebra(translation_action(FiniteGroup::symmetric(3), kTol), kTol).dim(), 1);
}

TEST(CanonicalExpectation, Examples) {
  const auto m2 = MultiMatrixAlgebra::full_matrix(2);
  const ConditionalExpectation triv = canonical_expectation(trivial_action(FiniteGroup::cyclic(2), m2, kTol), kTol);
  EXPECT_LT((triv.map() - Matrix::Identity(4, 4)).norm(), 1e-12);

  const ConditionalExpectation sw = canonical_expectation(swap_action(2, kTol), kTol);
  Matrix x(2, 2), y(2, 2);
  x << 1, 2, 3, 4;
  y << 0, 1, -1, 5;
  const Element got = sw(Element(sw.ambient(), {x, y}));
  const Matrix mid = (x + y) / 2.0;
  EXPECT_LT(operator_norm(got - Element(sw.ambient(), {mid, mid})), 1e-12);

  const ConditionalExpectation mean = canonical_expectation(translation_action(FiniteGroup::cyclic(4), kTol), kTol);
  const auto c4 = mean.ambient();
  const Vector f = Vector::LinSpaced(4, 1.0, 4.0);
  const Element image = mean(Element::from_vector(c4, f));
  EXPECT_LT(operator_norm(image - Element::scalar(c4, 2.5)), 1e-12);
}

TEST(CanonicalExpectation, EqualsTracePreservingProjection) {
  std::vector<GroupAction> acts{swap_action(2, kTol), translation_action(FiniteGroup::cyclic(3), kTol),
                                translation_action(FiniteGroup::symmetric(3), kTol), inner_z2()};
  for (const auto& act : acts) {
    const ConditionalExpectation canon = canonical_expectation(act, kTol);
    const std::vector<double> w(act.algebra().num_blocks(), 1.0);
    const ConditionalExpectation tp = trace_preserving_expectation(act.algebra(), canon.range(), w, kTol);
    for (const auto& b : canon.domain().basis_elements()) EXPECT_LT(operator_norm(canon(b) - tp(b)), 1e-10);
  }
}

TEST(Inner, Examples) {
  const InnerResult unit = is_inner(swap_action(2, kTol), 0, kTol);
  ASSERT_TRUE(unit.unitary);
  EXPECT_LT(operator_norm(*unit.unitary - Element::unit(unit.unitary->algebra())), 1e-10);

  const GroupAction inner = inner_z2();
  const InnerResult r = is_inner(inner, 1, kTol);
  ASSERT_TRUE(r.unitary);
  const Element& u = *r.unitary;
  EXPECT_LT(operator_norm(u * u.adjoint() - Element::unit(u.algebra())), 1e-10);
  // Witnesses are unique up to a phase; compare Ad u with the action instead.
  for (const auto& b : Subalgebra::whole(u.algebra()).basis_elements())
    EXPECT_LT(operator_norm(u * b * u.adjoint() - inner.apply(1, b)), 1e-10);
  EXPECT_NEAR(std::abs(u.block(0)(0, 0)), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(u.block(0)(0, 1)), 0.0, 1e-10);

  const InnerResult sw = is_inner(swap_action(2, kTol), 1, kTol);
  EXPECT_FALSE(sw.unitary);
  EXPECT_FALSE(is_inner(translation_action(FiniteGroup::cyclic(3), kTol), 1, kTol).unitary);
}

TEST(Partition, Examples) {
  const GroupAction sw = swap_action(2, kTol);
  const auto alg = sw.algebra();
  const std::vector<Element> halves{fixtures::block_diag(alg, {Matrix::Identity(2, 2), Matrix::Zero(2, 2)}),
                                    fixtures::block_diag(alg, {Matrix::Zero(2, 2), Matrix::Identity(2, 2)})};
  EXPECT_TRUE(rohlin_partition_check(sw, halves, kTol).pass);
  const std::vector<Element> flipped{halves[1], halves[0]};
  EXPECT_TRUE(rohlin_partition_check(sw, flipped, kTol).pass);

  for (const auto& g : {FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
    const GroupAction tr = translation_action(g, kTol);
    EXPECT_TRUE(rohlin_partition_check(tr, indicators(tr.algebra()), kTol).pass);
  }

  const GroupAction inner = inner_z2();
  const auto m2 = inner.algebra();
  const std::vector<Element> diag{Element::matrix_unit(m2, 0, 0, 0), Element::matrix_unit(m2, 0, 1, 1)};
  const PartitionReport rep = rohlin_partition_check(inner, diag, kTol);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.centrality_defect, 0.5);
}

TEST(Partition, LocalizesDefects) {
  const GroupAction tr = translation_action(FiniteGroup::cyclic(3), kTol);
  auto parts = indicators(tr.algebra());
  parts[2] = parts[2] * Complex(0.5);
  const PartitionReport rep = rohlin_partition_check(tr, parts, kTol);
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.projection_defect, 0.25, 1e-12);
  EXPECT_NEAR(rep.sum_defect, 0.5, 1e-12);
  EXPECT_LT(rep.centrality_defect, 1e-12);
}

TEST(Criterion, Examples) {
  const GroupAction sw = swap_action(2, kTol);
  const auto alg = sw.algebra();
  const Element first = fixtures::block_diag(alg, {Matrix::Identity(2, 2), Matrix::Zero(2, 2)});
  const CriterionResult ok = rohlin_criterion(sw, first, kTol);
  EXPECT_TRUE(ok.report.pass);
  ASSERT_EQ(ok.partition.size(), 2u);
  EXPECT_LT(operator_norm(ok.partition[1] - Element::unit(alg) + first), 1e-12);

  const CriterionResult unit = rohlin_criterion(sw, Element::unit(alg), kTol);
  EXPECT_FALSE(unit.report.pass);
  EXPECT_NEAR(unit.report.expectation_defect, 0.5, 1e-12);

  const GroupAction tr = translation_action(FiniteGroup::cyclic(3), kTol);
  const CriterionResult z3 = rohlin_criterion(tr, indicators(tr.algebra())[0], kTol);
  EXPECT_TRUE(z3.report.pass);

  const GroupAction inner = inner_z2();
  const CriterionResult e11 = rohlin_criterion(inner, Element::matrix_unit(inner.algebra(), 0, 0, 0), kTol);
  EXPECT_FALSE(e11.report.pass);
}

TEST(Criterion, ImpliesOuter) {
  std::vector<std::pair<GroupAction, Element>> cases;
  {
    const GroupAction sw = swap_action(2, kTol);
    cases.emplace_back(sw, fixtures::block_diag(sw.algebra(), {Matrix::Identity(2, 2), Matrix::Zero(2, 2)}));
  }
  for (const auto& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
    const GroupAction tr = translation_action(g, kTol);
    cases.emplace_back(tr, indicators(tr.algebra())[g.unit()]);
  }
  for (const auto& [act, e] : cases) {
    ASSERT_TRUE(rohlin_criterion(act, e, kTol).report.pass);
    for (int g = 0; g < act.group().order(); ++g)
      if (g != act.group().unit()) EXPECT_FALSE(is_inner(act, g, kTol).unitary) << g;
  }
}

class SubgroupS3 : public ::testing::Test {
 protected:
  FiniteGroup group = FiniteGroup::symmetric(3);
  GroupAction act = translation_action(group, kTol);
  std::vector<Element> parts = indicators(act.algebra());
};

TEST_F(SubgroupS3, TranspositionSubgroup) {
  const std::vector<int> h{group.unit(), group.find("[1,0,2]")};
  const SubgroupInclusion s = subgroup_inclusion(act, h, parts, kTol);
  EXPECT_EQ(s.p.dim(), 1);
  EXPECT_EQ(s.a.dim(), 3);
  EXPECT_NEAR(s.report.index_scalar, 3.0, 1e-8);
  EXPECT_NEAR(s.report.e_of_projection, 1.0 / 3.0, 1e-10);
  EXPECT_LT(s.report.f_of_projection_defect, kTol.eq_tol);
  EXPECT_LT(operator_norm(s.projection - parts[h[0]] - parts[h[1]]), 1e-12);
  EXPECT_EQ(s.coset_projections.size(), 3u);
  EXPECT_TRUE(s.report.pass);
  for (const auto& b : s.e.domain().basis_elements()) EXPECT_LT(operator_norm(s.e(b) - s.f(s.e_h(b))), 1e-10);
}

TEST_F(SubgroupS3, WholeGroupAndTrivialSubgroup) {
  std::vector<int> all(6);
  std::iota(all.begin(), all.end(), 0);
  const SubgroupInclusion whole = subgroup_inclusion(act, all, parts, kTol);
  EXPECT_NEAR(whole.report.index_scalar, 1.0, 1e-10);
  EXPECT_LT(operator_norm(whole.projection - Element::unit(act.algebra())), 1e-12);
  EXPECT_TRUE(whole.report.pass);

  const std::vector<int> trivial{group.unit()};
  const SubgroupInclusion t = subgroup_inclusion(act, trivial, parts, kTol);
  EXPECT_NEAR(t.report.index_scalar, 6.0, 1e-8);
  EXPECT_EQ(t.a.dim(), 6);
  EXPECT_LT(operator_norm(t.projection - parts[group.unit()]), 1e-12);
  EXPECT_TRUE(t.report.pass);
  EXPECT_EQ(t.report.pass, rohlin_criterion(act, parts[group.unit()], kTol).report.pass);
}

TEST_F(SubgroupS3, Errors) {
  const std::vector<int> not_subgroup{group.find("[1,2,0]")};
  EXPECT_THROW(subgroup_inclusion(act, not_subgroup, parts, kTol), Error);
  const std::vector<int> h{group.unit()};
  const std::vector<Element> short_partition(parts.begin(), parts.begin() + 2);
  EXPECT_THROW(subgroup_inclusion(act, h, short_partition, kTol), Error);
}

}  // namespace
