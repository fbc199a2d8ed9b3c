#include "io/reports.hpp"

namespace incl {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const ExpectationReport& r) {
  return {{"pass", r.pass},
          {"unit_defect", r.unit_defect},
          {"idempotence_defect", r.idempotence_defect},
          {"range_defect", r.range_defect},
          {"bimodule_defect", r.bimodule_defect},
          {"positivity_defect", r.positivity_defect},
          {"max_defect", r.max_defect()}};
}

Json to_json(const FaithfulnessReport& r) { return {{"faithful", r.faithful}, {"margin", r.margin}}; }

Json to_json(const QuasiBasisReport& r) {
  return {{"method", r.method},
          {"left_defect", r.left_defect},
          {"right_defect", r.right_defect},
          {"iterations", r.iterations},
          {"full_basis", r.full_basis}};
}

Json to_json(const IndexValue& v) {
  return {{"scalar", optional_number(v.scalar)},
          {"element", to_json(v.element)},
          {"centrality_defect", v.centrality_defect},
          {"adjoint_defect", v.adjoint_defect},
          {"min_eigenvalue", v.min_eigenvalue},
          {"min_singular_value", v.min_singular_value},
          {"invertible", v.invertible}};
}

Json to_json(const BasicConstructionReport& r) {
  return {{"pass", r.pass},
          {"jones_projection_defect", r.jones_projection_defect},
          {"module_defect", r.module_defect},
          {"jones_commutation_defect", r.jones_commutation_defect},
          {"homomorphism_defect", r.homomorphism_defect},
          {"well_definedness_residual", r.well_definedness_residual},
          {"lemma_defect", r.lemma_defect},
          {"span_dim", r.span_dim},
          {"generated_dim", r.generated_dim}};
}

Json to_json(const DualIndexReport& r) {
  return {{"pass", r.pass},
          {"method", r.method},
          {"index_scalar", optional_number(r.index_scalar)},
          {"dual_index_scalar", optional_number(r.dual_index_scalar)},
          {"difference", r.difference},
          {"left_defect", r.left_defect},
          {"right_defect", r.right_defect}};
}

Json to_json(const TunnelReport& r) {
  return {{"pass", r.pass},
          {"expectation_defect", r.expectation_defect},
          {"projection_defect", r.projection_defect},
          {"full", r.full},
          {"fullness_distance", r.fullness_distance},
          {"q_dim", r.q_dim},
          {"f_verified", r.f_verified},
          {"f_failure", r.f_failure},
          {"p_span_dim", r.p_span_dim},
          {"a_dim", r.a_dim},
          {"module_defect", r.module_defect},
          {"injectivity_margin", r.injectivity_margin},
          {"tunnel_verified", r.tunnel_verified}};
}

Json to_json(const TowerLevel& t) {
  return {{"level", t.level},
          {"ambient_dim", t.ambient_dim},
          {"basic_dim", t.basic_dim},
          {"index_scalar", optional_number(t.index_scalar)},
          {"max_defect", t.max_defect}};
}

Json to_json(const ActionReport& r) {
  return {{"pass", r.pass},
          {"unit_defect", r.unit_defect},
          {"multiplicativity_defect", r.multiplicativity_defect},
          {"adjoint_defect", r.adjoint_defect},
          {"min_singular_value", r.min_singular_value},
          {"composition_defect", r.composition_defect},
          {"identity_defect", r.identity_defect}};
}

Json to_json(const InnerResult& r) {
  return {{"inner", r.unitary.has_value()},
          {"unitary", r.unitary ? to_json(*r.unitary) : Json(nullptr)},
          {"intertwiner_dim", r.intertwiner_dim},
          {"min_singular_value", r.min_singular_value},
          {"implementation_defect", r.implementation_defect}};
}

Json to_json(const PartitionReport& r) {
  return {{"pass", r.pass},
          {"projection_defect", r.projection_defect},
          {"sum_defect", r.sum_defect},
          {"centrality_defect", r.centrality_defect},
          {"equivariance_defect", r.equivariance_defect}};
}

Json to_json(const CriterionReport& r) {
  return {{"pass", r.pass},
          {"criterion_ok", r.criterion_ok},
          {"projection_defect", r.projection_defect},
          {"centrality_defect", r.centrality_defect},
          {"expectation_defect", r.expectation_defect},
          {"partition", to_json(r.partition)}};
}

Json to_json(const SubgroupInclusionReport& r) {
  return {{"pass", r.pass},
          {"index_scalar", r.index_scalar},
          {"expected_index", r.expected_index},
          {"index_error", r.index_error},
          {"f_of_projection_defect", r.f_of_projection_defect},
          {"e_of_projection", r.e_of_projection},
          {"e_of_projection_defect", r.e_of_projection_defect},
          {"composition_defect", r.composition_defect},
          {"membership_defect", r.membership_defect}};
}

Json to_json(const RohlinReport& r) {
  return {{"pass", r.pass},
          {"stages", r.stages},
          {"projection_defect", r.projection_defect},
          {"membership_defect", r.membership_defect},
          {"centrality_defect", r.centrality_defect},
          {"expectation_defect", r.expectation_defect},
          {"injectivity_margin", r.injectivity_margin},
          {"injectivity_margin_p", r.injectivity_margin_p}};
}

Json to_json(const ApproxRepReport& r) {
  return {{"pass", r.pass},
          {"stages", r.stages},
          {"projection_defect", r.projection_defect},
          {"membership_defect", r.membership_defect},
          {"centrality_defect", r.centrality_defect},
          {"module_defect", r.module_defect},
          {"injectivity_margin", r.injectivity_margin}};
}

Json to_json(const ForwardReport& r) {
  return {{"pass", r.pass},
          {"max_defect", r.max_defect},
          {"precondition", to_json(r.precondition)},
          {"jones_identity_defect", r.jones_identity_defect},
          {"projection_identity_defect", r.projection_identity_defect},
          {"dual_module_defect", r.dual_module_defect},
          {"dual_witness", to_json(r.dual_witness)}};
}

Json to_json(const BackwardReport& r) {
  return {{"pass", r.pass},
          {"max_defect", r.max_defect},
          {"precondition", to_json(r.precondition)},
          {"projection_defect", r.projection_defect},
          {"membership_defect", r.membership_defect},
          {"centrality_defect", r.centrality_defect},
          {"expectation_defect", r.expectation_defect},
          {"injectivity_margin", r.injectivity_margin},
          {"jones_defect", r.jones_defect},
          {"dual_witness", to_json(r.dual_witness)}};
}

Json to_json(const RecoverReport& r) {
  return {{"pass", r.pass},
          {"max_defect", r.max_defect},
          {"membership_defect", r.membership_defect},
          {"centrality_defect", r.centrality_defect},
          {"jones_defect", r.jones_defect},
          {"pull_back_defect", r.pull_back_defect},
          {"witness", to_json(r.witness)}};
}

Json to_json(const RoundTripReport& r) {
  return {{"pass", r.pass},
          {"max_defect", r.max_defect},
          {"recovered_vs_image", r.recovered_vs_image},
          {"recovered_vs_input", r.recovered_vs_input},
          {"forward", to_json(r.forward)},
          {"backward", to_json(r.backward)},
          {"recover", to_json(r.recover)}};
}

Json to_json(const RelativeCommutantReport& r) {
  return {{"dim", r.dim},
          {"containment_defect", r.containment_defect},
          {"contained", r.contained},
          {"irreducible", r.irreducible}};
}

Json to_json(const BetaReport& r) {
  return {{"pass", r.pass},
          {"max_defect", r.max_defect},
          {"intertwining_defect", r.intertwining_defect},
          {"unit_defect", r.unit_defect},
          {"adjoint_defect", r.adjoint_defect},
          {"multiplicativity_defect", r.multiplicativity_defect},
          {"identity_on_p_defect", r.identity_on_p_defect},
          {"range_defect", r.range_defect},
          {"injectivity_margin", r.injectivity_margin},
          {"uniqueness_margin", r.uniqueness_margin},
          {"resolve_defect", r.resolve_defect}};
}

Json to_json(const EmbeddingReport& r) {
  return {{"pass", r.pass},
          {"unit_defect", r.unit_defect},
          {"multiplicativity_defect", r.multiplicativity_defect},
          {"adjoint_defect", r.adjoint_defect},
          {"injectivity_margin", r.injectivity_margin}};
}

Json to_json(const StageDefect& d) {
  return {{"stage", d.stage},
          {"projection_defect", d.projection_defect},
          {"commutation_defect", d.commutation_defect},
          {"expectation_defect", d.expectation_defect},
          {"max_defect", d.max_defect()}};
}

Json to_json(const DefectCurve& c) {
  Json records = Json::array();
  for (const auto& d : c.records) records.push_back(to_json(d));
  return {{"records", records}, {"decreasing", c.decreasing}, {"vanishing", c.vanishing}};
}

}  // namespace incl
