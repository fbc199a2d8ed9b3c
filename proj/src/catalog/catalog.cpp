#include "catalog/catalog.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cmath>

#include "io/reports.hpp"

namespace incl {

namespace {

constexpr double kScalarTol = 1e-8;

class Recorder {
 public:
  explicit Recorder(const Tolerance& tol) : tol_(tol) {}

  const Tolerance& tol() const { return tol_; }

  void flag(const std::string& name, bool actual, bool expected, double defect, const std::string& provenance) {
    checks_.push_back({name, expected, actual, defect, provenance, actual == expected});
  }

  void value(const std::string& name, double actual, double expected, const std::string& provenance) {
    const double err = std::abs(actual - expected);
    checks_.push_back({name, expected, actual, err, provenance, err <= kScalarTol});
  }

  void count(const std::string& name, int actual, int expected, const std::string& provenance) {
    checks_.push_back({name, expected, actual, 0.0, provenance, actual == expected});
  }

  std::vector<CatalogCheck> take() { return std::move(checks_); }

 private:
  const Tolerance& tol_;
  std::vector<CatalogCheck> checks_;
};

struct Core {
  QuasiBasis qb;
  IndexValue index;
  BasicConstruction bc;
};

Core core_checks(Recorder& rec, const ConditionalExpectation& e, double expected_index, const std::string& provenance) {
  const auto& tol = rec.tol();
  QuasiBasis qb = solve_quasi_basis(e, tol);
  IndexValue index = watatani_index(e, qb, tol);
  rec.value("index", index.scalar.value_or(std::nan("")), expected_index, provenance);
  const double left = left_identity_defect(e, qb.pairs(), tol);
  const double right = right_identity_defect(e, qb.pairs(), tol);
  rec.flag("quasi-basis-identities", within(std::max(left, right), tol.eq_tol), true, std::max(left, right), "oracle");
  BasicConstruction bc = build_basic_construction(e, qb, tol);
  rec.flag("basic-construction", bc.report.pass, true,
           std::max({bc.report.module_defect, bc.report.lemma_defect, bc.report.jones_projection_defect}), "oracle");
  const DualIndexReport dual = dual_index_check(bc, tol);
  rec.flag("dual-index", dual.pass, true, dual.difference, "oracle");
  return {std::move(qb), std::move(index), std::move(bc)};
}

double rohlin_max(const RohlinReport& r) {
  return std::max({r.projection_defect, r.membership_defect, r.centrality_defect, r.expectation_defect});
}

double approx_max(const ApproxRepReport& r) {
  return std::max({r.projection_defect, r.membership_defect, r.centrality_defect, r.module_defect});
}

/// Rohlin witness, the duality cycle and the beta map.
void rohlin_checks(Recorder& rec, const Core& core, const std::vector<Element>& witness, bool duality) {
  const auto& tol = rec.tol();
  const ConditionalExpectation& e = core.bc.expectation();
  const RohlinReport rc = rohlin_check(e, core.index, witness, tol);
  rec.flag("rohlin-check", rc.pass, true, rohlin_max(rc), "oracle");
  if (!duality) return;
  const RoundTripReport rt = duality_roundtrip(core.bc, witness, tol);
  rec.flag("duality-forward", rt.forward.pass, true, rt.forward.max_defect, "oracle");
  rec.flag("duality-backward", rt.backward.pass, true, rt.backward.max_defect, "oracle");
  rec.flag("duality-recover", rt.recover.pass, true, rt.recover.max_defect, "oracle");
  rec.flag("duality-roundtrip", rt.pass, true, std::max(rt.recovered_vs_image, rt.recovered_vs_input), "oracle");
  const BetaReport beta = beta_map(e, core.index, witness, tol);
  rec.flag("beta-map", beta.pass, true, beta.max_defect, "oracle");

  // The dual expectation is approximately representable, so its relative commutant sits inside lambda(A).
  const auto fw = duality_forward(core.bc, witness, tol);
  const auto rel = relative_commutant_report(core.bc.algebra, core.bc.image, tol);
  rec.flag("dual-relative-commutant-contained", rel.contained, true, rel.containment_defect, "oracle");
  rec.flag("dual-approx-rep-check", fw.report.dual_witness.pass, true, approx_max(fw.report.dual_witness), "oracle");
}

std::vector<Element> orbit(const GroupAction& act, const Element& e) {
  std::vector<Element> out;
  for (int g = 0; g < act.group().order(); ++g) out.push_back(act.apply(g, e));
  return out;
}

/// Criterion for the action against rohlin_check on the orbit, and outerness.
void action_checks(Recorder& rec, const GroupAction& act, const ConditionalExpectation& e, const IndexValue& index,
                   const Element& candidate, bool expect_rohlin, bool expect_outer) {
  const auto& tol = rec.tol();
  const CriterionResult cr = rohlin_criterion(act, candidate, tol);
  rec.flag("rohlin-criterion", cr.report.pass, expect_rohlin,
           std::max({cr.report.projection_defect, cr.report.centrality_defect, cr.report.expectation_defect}),
           "oracle");
  const RohlinReport rc = rohlin_check(e, index, orbit(act, candidate), tol);
  rec.flag("criterion-agrees-with-rohlin-check", cr.report.pass == rc.pass, true, rohlin_max(rc), "oracle");
  bool outer = true;
  double margin = 0.0;
  for (int g = 0; g < act.group().order(); ++g) {
    if (g == act.group().unit()) continue;
    const InnerResult ir = is_inner(act, g, tol);
    if (ir.unitary) outer = false;
    margin = std::max(margin, ir.implementation_defect);
  }
  rec.flag("outer", outer, expect_outer, margin, "oracle");
}

void relative_commutant_checks(Recorder& rec, const Inclusion& inc, int expected_dim, bool expected_contained) {
  const auto rel = relative_commutant_report(inc.a, inc.p, rec.tol());
  rec.count("relative-commutant-dim", rel.dim, expected_dim, "oracle");
  rec.flag("relative-commutant-contained", rel.contained, expected_contained, rel.containment_defect, "oracle");
}

Element diag_units_sum(const MultiMatrixAlgebra& alg, int block, int from, int to) {
  Element x = Element::zero(alg);
  for (int i = from; i < to; ++i) x = x + Element::matrix_unit(alg, block, i, i);
  return x;
}

CatalogSetup group_setup(std::string name, std::string description, GroupAction act, const Element& e,
                         const Tolerance& tol) {
  ConditionalExpectation ce = canonical_expectation(act, tol);
  Inclusion inc{ce.domain(), ce.range(), ce};
  std::vector<Element> witness = orbit(act, e);
  return {std::move(name), std::move(description), std::move(inc), std::move(act), std::move(witness), {}};
}

CatalogSetup pinching_setup(int n, const Tolerance& tol) {
  const auto alg = MultiMatrixAlgebra::full_matrix(n);
  std::vector<Element> units;
  for (int i = 0; i < n; ++i) units.push_back(Element::matrix_unit(alg, 0, i, i));
  Subalgebra p = generated_subalgebra(alg, units, tol);
  const std::vector<double> weights{1.0};
  ConditionalExpectation e = trace_preserving_expectation(alg, p, weights, tol);
  Inclusion inc{e.domain(), e.range(), e};
  return {"pinching-M" + std::to_string(n), "diagonal subalgebra of M" + std::to_string(n), std::move(inc),
          std::nullopt, {}, std::move(units)};
}

std::vector<CatalogCheck> run_entry(const std::string& name, const Tolerance& tol) {
  Recorder rec(tol);
  CatalogSetup s = catalog_setup(name, tol);
  const ConditionalExpectation& e = s.inclusion.e;

  if (name == "swap-M2") {
    const Core core = core_checks(rec, e, 2.0, "oracle");
    rohlin_checks(rec, core, s.rohlin_witness, true);
    action_checks(rec, *s.action, e, core.index, s.rohlin_witness.front(), true, true);
    relative_commutant_checks(rec, s.inclusion, 2, false);
    const auto alg = e.ambient();
    const TunnelResult literal = tunnel_construction(e, core.index, s.rohlin_witness.front(), tol);
    rec.flag("tunnel-(1,0)-full", literal.report.full, false, literal.report.fullness_distance, "oracle");
    const Element e11 = Element::matrix_unit(alg, 0, 0, 0) + Element::matrix_unit(alg, 1, 1, 1);
    const TunnelResult split = tunnel_construction(e, core.index, e11, tol);
    rec.flag("tunnel-(e11,e22)", split.report.pass, true, split.report.module_defect, "oracle");
  } else if (name == "pinching-M2" || name == "pinching-M3") {
    const int n = name.back() - '0';
    const Core core = core_checks(rec, e, n, "oracle");
    const std::vector<Element> unit{Element::unit(e.ambient())};
    const RohlinReport rc = rohlin_check(e, core.index, unit, tol);
    rec.flag("rohlin-check", rc.pass, false, rc.expectation_defect, "oracle");
    const ApproxRepReport ar = approx_rep_check(e, s.approx_witness, tol);
    rec.flag("approx-rep-check", ar.pass, true, approx_max(ar), "oracle");
    relative_commutant_checks(rec, s.inclusion, n, true);
    if (n == 2) {
      const BackwardResult bw = duality_backward(core.bc, core.qb, s.approx_witness, tol);
      rec.flag("duality-backward", bw.report.pass, true, bw.report.max_defect, "oracle");
    }
  } else if (name == "C(Z/2)" || name == "C(Z/3)" || name == "S3-translation") {
    const int order = s.action->group().order();
    const Core core = core_checks(rec, e, order, "oracle");
    rohlin_checks(rec, core, s.rohlin_witness, true);
    action_checks(rec, *s.action, e, core.index, s.rohlin_witness.front(), true, true);
    relative_commutant_checks(rec, s.inclusion, order, false);
  } else if (name == "S3-subgroup-H2") {
    const GroupAction& act = *s.action;
    std::vector<Element> partition;
    for (int g = 0; g < act.group().order(); ++g)
      partition.push_back(Element::matrix_unit(act.algebra(), g, 0, 0));
    const std::vector<int> h{act.group().unit(), act.group().find("[1,0,2]")};
    const SubgroupInclusion si = subgroup_inclusion(act, h, partition, tol);
    rec.value("index-F", si.report.index_scalar, 3.0, "reference-value");
    rec.flag("F(e_H)", within(si.report.f_of_projection_defect, tol.eq_tol), true, si.report.f_of_projection_defect,
             "reference-value");
    rec.value("E(e_H)", si.report.e_of_projection, 1.0 / 3.0, "reference-value");
    rec.flag("composition", within(si.report.composition_defect, tol.eq_tol), true, si.report.composition_defect,
             "oracle");
    rec.flag("subgroup-inclusion", si.report.pass, true,
             std::max({si.report.index_error, si.report.f_of_projection_defect, si.report.e_of_projection_defect}),
             "reference-value");
    const QuasiBasis qb = solve_quasi_basis(si.f, tol);
    const IndexValue index = watatani_index(si.f, qb, tol);
    const RohlinReport rc = rohlin_check(si.f, index, si.coset_projections, tol);
    rec.flag("rohlin-check-cosets", rc.pass, true, rohlin_max(rc), "oracle");
  } else if (name == "inner-Z2-M2") {
    const Core core = core_checks(rec, e, 2.0, "oracle");
    const auto& alg = e.ambient();
    action_checks(rec, *s.action, e, core.index, Element::matrix_unit(alg, 0, 0, 0), false, false);
    const CriterionResult unit = rohlin_criterion(*s.action, Element::unit(alg), tol);
    rec.flag("rohlin-criterion-unit", unit.report.pass, false, unit.report.expectation_defect, "oracle");
    const InnerResult ir = is_inner(*s.action, 1, tol);
    rec.flag("inner", ir.unitary.has_value(), true, ir.implementation_defect, "oracle");
  } else if (name == "identity") {
    const Core core = core_checks(rec, e, 1.0, "trivial");
    rohlin_checks(rec, core, s.rohlin_witness, false);
    const ApproxRepReport ar = approx_rep_check(e, s.approx_witness, tol);
    rec.flag("approx-rep-check", ar.pass, true, approx_max(ar), "trivial");
    relative_commutant_checks(rec, s.inclusion, 1, true);
  }
  return rec.take();
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"swap-M2",        "pinching-M2",    "pinching-M3",
                                              "C(Z/2)",         "C(Z/3)",         "S3-translation",
                                              "S3-subgroup-H2", "inner-Z2-M2",    "identity"};
  return names;
}

CatalogSetup catalog_setup(const std::string& name, const Tolerance& tol) {
  if (name == "swap-M2") {
    GroupAction act = swap_action(2, tol);
    const Element e = diag_units_sum(act.algebra(), 0, 0, 2);
    return group_setup(name, "diagonal M2 in M2 (+) M2, fixed points of the swap", std::move(act), e, tol);
  }
  if (name == "pinching-M2") return pinching_setup(2, tol);
  if (name == "pinching-M3") return pinching_setup(3, tol);
  if (name == "C(Z/2)" || name == "C(Z/3)") {
    GroupAction act = translation_action(FiniteGroup::cyclic(name == "C(Z/2)" ? 2 : 3), tol);
    const Element e = Element::matrix_unit(act.algebra(), 0, 0, 0);
    return group_setup(name, "scalars in " + name + " under translation", std::move(act), e, tol);
  }
  if (name == "S3-translation" || name == "S3-subgroup-H2") {
    GroupAction act = translation_action(FiniteGroup::symmetric(3), tol);
    const Element e = Element::matrix_unit(act.algebra(), act.group().unit(), 0, 0);
    if (name == "S3-translation") return group_setup(name, "scalars in C(S3) under translation", std::move(act), e, tol);
    CatalogSetup s = group_setup(name, "C(S3)^G in C(S3)^H, H generated by the transposition [1,0,2]",
                                 std::move(act), e, tol);
    const std::vector<int> h{s.action->group().unit(), s.action->group().find("[1,0,2]")};
    std::vector<Element> partition;
    for (int g = 0; g < s.action->group().order(); ++g)
      partition.push_back(Element::matrix_unit(s.action->algebra(), g, 0, 0));
    SubgroupInclusion si = subgroup_inclusion(*s.action, h, partition, tol);
    s.inclusion = Inclusion{si.a, si.p, si.f};
    s.rohlin_witness = si.coset_projections;
    return s;
  }
  if (name == "inner-Z2-M2") {
    const auto alg = MultiMatrixAlgebra::full_matrix(2);
    const Element u = Element::matrix_unit(alg, 0, 0, 0) - Element::matrix_unit(alg, 0, 1, 1);
    const std::vector<Element> us{Element::unit(alg), u};
    GroupAction act = inner_action(FiniteGroup::cyclic(2), us, tol);
    CatalogSetup s = group_setup(name, "Ad diag(1,-1) on M2", std::move(act), Element::unit(alg), tol);
    s.rohlin_witness.clear();
    return s;
  }
  if (name == "identity") {
    const auto alg = MultiMatrixAlgebra::full_matrix(2);
    const Subalgebra whole = Subalgebra::whole(alg);
    ConditionalExpectation e =
        ConditionalExpectation::create(whole, whole, Matrix::Identity(whole.dim(), whole.dim()), tol);
    Inclusion inc{whole, whole, e};
    return {name, "M2 in itself", std::move(inc), std::nullopt, {Element::unit(alg)}, {Element::unit(alg)}};
  }
  fail(ErrorKind::InvalidArgument, "catalog: unknown entry '" + name + "'");
}

CatalogEntryResult run_catalog_entry(const std::string& name, const Tolerance& tol) {
  CatalogEntryResult out;
  out.entry = name;
  try {
    out.checks = run_entry(name, tol);
  } catch (const Error& ex) {
    out.error = std::string(to_string(ex.kind())) + ": " + ex.what();
  }
  out.pass = out.error.empty() &&
             std::all_of(out.checks.begin(), out.checks.end(), [](const CatalogCheck& c) { return c.pass; });
  return out;
}

CatalogReport run_catalog(const std::string& filter, const Tolerance& tol) {
  CatalogReport rep;
  for (const auto& name : catalog_names()) {
    if (!filter.empty() && fnmatch(filter.c_str(), name.c_str(), 0) != 0) continue;
    rep.entries.push_back(run_catalog_entry(name, tol));
  }
  if (rep.entries.empty()) fail(ErrorKind::InvalidArgument, "catalog: no entry matches '" + filter + "'");
  rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(), [](const auto& r) { return r.pass; });
  return rep;
}

Json to_json(const CatalogCheck& c) {
  return {{"name", c.name},
          {"pass", c.pass},
          {"expected", c.expected},
          {"actual", c.actual},
          {"max_defect", c.max_defect},
          {"provenance", c.provenance}};
}

Json to_json(const CatalogEntryResult& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json j{{"entry", r.entry}, {"pass", r.pass}, {"checks", checks}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

Json to_json(const CatalogReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"pass", r.pass}, {"entries", entries}};
}

}  // namespace incl
