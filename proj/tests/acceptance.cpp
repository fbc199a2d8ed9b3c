// Acceptance run: one line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "catalog/catalog.hpp"
#include "rohlin/rohlin.hpp"

using namespace incl;

namespace {

const Tolerance kTol{};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[" << what << "] ";
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

struct Prepared {
  CatalogSetup setup;
  QuasiBasis qb;
  IndexValue index;
};

Prepared prepare(const std::string& name) {
  CatalogSetup s = catalog_setup(name, kTol);
  QuasiBasis qb = solve_quasi_basis(s.inclusion.e, kTol);
  IndexValue index = watatani_index(s.inclusion.e, qb, kTol);
  return {std::move(s), std::move(qb), std::move(index)};
}

ProjectionSequence orbit(const GroupAction& act, const Element& e) {
  ProjectionSequence out;
  for (int g = 0; g < act.group().order(); ++g) out.push_back(act.apply(g, e));
  return out;
}

ConditionalExpectation pinching(int n) {
  const auto alg = MultiMatrixAlgebra::full_matrix(n);
  std::vector<Element> units;
  for (int i = 0; i < n; ++i) units.push_back(Element::matrix_unit(alg, 0, i, i));
  const std::vector<double> w{1.0};
  return trace_preserving_expectation(alg, generated_subalgebra(alg, units, kTol), w, kTol);
}

void criterion1(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0, worst_identity = 0.0;
  auto check = [&](const ConditionalExpectation& e, double expected, const std::string& label) {
    const QuasiBasis qb = solve_quasi_basis(e, kTol);
    const IndexValue index = watatani_index(e, qb, kTol);
    const double identity = std::max(left_identity_defect(e, qb.pairs(), kTol), right_identity_defect(e, qb.pairs(), kTol));
    worst_identity = std::max(worst_identity, identity);
    out.require(identity <= kTol.eq_tol, label + " quasi-basis identities");
    if (!index.scalar) {
      out.require(false, label + " index not scalar");
      return;
    }
    const double err = std::abs(*index.scalar - expected);
    worst = std::max(worst, err);
    out.require(err <= 1e-8, label + " index " + std::to_string(*index.scalar));
  };
  for (int n = 2; n <= 8; ++n) check(pinching(n), n, "pinching M" + std::to_string(n));
  for (int n = 2; n <= 8; ++n) {
    const GroupAction act = translation_action(FiniteGroup::cyclic(n), kTol);
    check(canonical_expectation(act, kTol), n, "C(Z/" + std::to_string(n) + ")");
  }
  check(canonical_expectation(swap_action(2, kTol), kTol), 2.0, "swap");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(secs <= 10.0, "runtime");
  out.detail << "max index error " << sci(worst) << ", max identity defect " << sci(worst_identity) << ", "
             << secs << " s";
}

void criterion2(Outcome& out) {
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const Prepared p = prepare(name);
    const auto& e = p.setup.inclusion.e;
    const double d = std::max(left_identity_defect(e, p.qb.pairs(), kTol), right_identity_defect(e, p.qb.pairs(), kTol));
    worst = std::max(worst, d);
    out.require(d <= 1e-9, name);
  }
  out.detail << "max defect over " << catalog_names().size() << " entries " << sci(worst);
}

void criterion3(Outcome& out) {
  double module = 0.0, lemma = 0.0, dual_err = 0.0;
  for (const auto& name : catalog_names()) {
    const Prepared p = prepare(name);
    const auto& e = p.setup.inclusion.e;
    const BasicConstruction bc = build_basic_construction(e, p.qb, kTol);
    const Element& ep = bc.jones;
    for (const auto& a : e.domain().basis_elements())
      module = std::max(module, operator_norm(ep * bc.lambda(a) * ep - bc.lambda(e(a)) * ep));
    const Element ind = bc.lambda(p.index.element);
    for (const auto& z : bc.algebra.basis_elements())
      lemma = std::max(lemma, operator_norm(z * ep - ind * bc.dual(z * ep) * ep));
    if (p.index.scalar) {
      const IndexValue dual = watatani_index(bc.dual, dual_quasi_basis(bc, kTol), kTol);
      const double err = dual.scalar ? std::abs(*dual.scalar - *p.index.scalar) : 1.0;
      dual_err = std::max(dual_err, err);
      out.require(err <= 1e-8, name + " dual index");
    }
  }
  out.require(module <= 1e-9, "module identity");
  out.require(lemma <= 1e-9, "lemma identity");
  out.detail << "module " << sci(module) << ", lemma " << sci(lemma) << ", dual index error " << sci(dual_err);
}

void criterion4(Outcome& out) {
  double worst = 0.0, recovered = 0.0;
  for (const std::string name : {"swap-M2", "C(Z/2)", "C(Z/3)", "S3-translation"}) {
    const Prepared p = prepare(name);
    const BasicConstruction bc = build_basic_construction(p.setup.inclusion.e, p.qb, kTol);
    const RoundTripReport rt = duality_roundtrip(bc, p.setup.rohlin_witness, kTol);
    out.require(rt.forward.pass, name + " forward");
    out.require(rt.backward.pass, name + " backward");
    out.require(rt.recover.pass, name + " recover");
    out.require(rt.max_defect <= 1e-9, name + " identity defect");
    out.require(rt.recovered_vs_input <= 1e-9, name + " recovered e");
    worst = std::max(worst, rt.max_defect);
    recovered = std::max(recovered, rt.recovered_vs_input);
  }
  out.detail << "max identity defect " << sci(worst) << ", recovered vs input " << sci(recovered);
}

void criterion5(Outcome& out) {
  const Prepared p = prepare("swap-M2");
  const auto& e = p.setup.inclusion.e;
  const auto alg = e.ambient();
  const Element first = Element::unit(alg) - Element(alg, {Matrix::Zero(2, 2), Matrix::Identity(2, 2)});
  const TunnelReport r = tunnel_construction(e, p.index, first, kTol).report;
  out.require(r.expectation_defect <= kTol.eq_tol, "E(e)");
  out.require(r.f_verified, "F verified");
  out.require(r.full, "fullness");
  out.require(r.p_span_dim == r.a_dim, "span dim " + std::to_string(r.p_span_dim) + " vs " + std::to_string(r.a_dim));
  out.detail << "e=(1,0): E(e) defect " << sci(r.expectation_defect) << ", distance of 1 from AeA "
             << sci(r.fullness_distance) << "; ";
  const Element split = Element::matrix_unit(alg, 0, 0, 0) + Element::matrix_unit(alg, 1, 1, 1);
  const TunnelReport s = tunnel_construction(e, p.index, split, kTol).report;
  out.detail << "e=(e11,e22): " << (s.pass && s.full && s.p_span_dim == s.a_dim ? "all four hold" : "fails");
}

struct ActionCase {
  std::string name;
  GroupAction act;
  std::vector<Element> candidates;
};

std::vector<ActionCase> action_cases() {
  std::vector<ActionCase> out;
  for (const auto& name : catalog_names()) {
    CatalogSetup s = catalog_setup(name, kTol);
    if (!s.action) continue;
    const auto alg = s.action->algebra();
    std::vector<Element> cands{Element::unit(alg), Element::zero(alg)};
    if (!s.rohlin_witness.empty() && s.rohlin_witness.front().algebra() == alg)
      cands.push_back(s.rohlin_witness.front());
    if (alg.num_blocks() > 0) cands.push_back(Element::matrix_unit(alg, 0, 0, 0));
    out.push_back({name, *s.action, std::move(cands)});
  }
  return out;
}

void criterion6(Outcome& out) {
  int agree = 0, total = 0;
  for (const auto& c : action_cases()) {
    const ConditionalExpectation e = canonical_expectation(c.act, kTol);
    const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
    for (const auto& x : c.candidates) {
      const bool crit = rohlin_criterion(c.act, x, kTol).report.pass;
      const bool check = rohlin_check(e, index, orbit(c.act, x), kTol).pass;
      ++total;
      if (crit == check) ++agree;
      out.require(crit == check, c.name);
    }
  }
  out.detail << agree << "/" << total << " action/projection pairs agree";
}

void criterion7(Outcome& out) {
  int passing = 0;
  for (const auto& c : action_cases()) {
    bool any = false;
    for (const auto& x : c.candidates) any = any || rohlin_criterion(c.act, x, kTol).report.pass;
    if (!any) continue;
    ++passing;
    for (int g = 0; g < c.act.group().order(); ++g)
      if (g != c.act.group().unit()) out.require(!is_inner(c.act, g, kTol).unitary, c.name + " element " + c.act.group().labels()[g]);
  }
  out.require(passing > 0, "no action passes the criterion");
  out.detail << passing << " Rohlin actions, all non-unit elements outer";
}

void criterion8(Outcome& out) {
  const GroupAction act = translation_action(FiniteGroup::symmetric(3), kTol);
  std::vector<Element> partition;
  for (int g = 0; g < act.group().order(); ++g) partition.push_back(Element::matrix_unit(act.algebra(), g, 0, 0));
  const std::vector<int> h{act.group().unit(), act.group().find("[1,0,2]")};
  const SubgroupInclusionReport r = subgroup_inclusion(act, h, partition, kTol).report;
  out.require(std::abs(r.index_scalar - 3.0) <= 1e-8, "Index F");
  out.require(r.f_of_projection_defect <= kTol.eq_tol, "F(e_H)");
  out.require(std::abs(r.e_of_projection - 1.0 / 3.0) <= kTol.eq_tol, "E(e_H)");
  out.detail << "Index F " << r.index_scalar << ", F(e_H) defect " << sci(r.f_of_projection_defect) << ", E(e_H) "
             << r.e_of_projection;
}

void criterion9(Outcome& out) {
  int cases = 0;
  for (const auto& name : catalog_names()) {
    const Prepared p = prepare(name);
    const auto& inc = p.setup.inclusion;
    if (!p.setup.approx_witness.empty() && approx_rep_check(inc.e, p.setup.approx_witness, kTol).pass) {
      ++cases;
      out.require(relative_commutant_report(inc.a, inc.p, kTol).contained, name);
    }
    if (!p.setup.rohlin_witness.empty()) {
      const BasicConstruction bc = build_basic_construction(inc.e, p.qb, kTol);
      const ForwardResult fw = duality_forward(bc, p.setup.rohlin_witness, kTol);
      if (fw.report.dual_witness.pass) {
        ++cases;
        out.require(relative_commutant_report(bc.algebra, bc.image, kTol).contained, name + " dual");
      }
    }
  }
  out.require(cases > 0, "no approximately representable case");
  out.detail << cases << " approximately representable inclusions, relative commutant inside P for each";
}

void criterion10(Outcome& out) {
  double worst = 0.0;
  int entries = 0;
  for (const auto& name : catalog_names()) {
    const Prepared p = prepare(name);
    const auto& e = p.setup.inclusion.e;
    if (p.setup.rohlin_witness.empty() || !rohlin_check(e, p.index, p.setup.rohlin_witness, kTol).pass) continue;
    ++entries;
    const BetaReport b = beta_map(e, p.index, p.setup.rohlin_witness, kTol);
    out.require(b.pass && b.max_defect <= 1e-9, name);
    worst = std::max(worst, b.max_defect);
  }
  out.require(entries > 0, "no Rohlin entry");
  out.detail << entries << " Rohlin entries, max defect " << sci(worst);
}

void criterion11(Outcome& out) {
  {
    const ConditionalExpectation e = pinching(2);
    const IndexValue index = watatani_index(e, solve_quasi_basis(e, kTol), kTol);
    const auto alg = e.ambient();
    double least = 1e300;
    for (const auto& x : {Element::zero(alg), Element::unit(alg)}) {
      const RohlinReport r = rohlin_check(e, index, ProjectionSequence{x}, kTol);
      out.require(!r.pass, "pinching M2 passes");
      least = std::min(least, r.expectation_defect);
    }
    out.require(least >= 0.5 - 1e-9, "pinching expectation defect");
    out.detail << "pinching M2 expectation defect " << least << "; ";
  }
  {
    const auto alg = MultiMatrixAlgebra::full_matrix(2);
    const std::vector<Element> us{Element::unit(alg),
                                  Element::matrix_unit(alg, 0, 0, 0) - Element::matrix_unit(alg, 0, 1, 1)};
    const GroupAction inner = inner_action(FiniteGroup::cyclic(2), us, kTol);
    bool any = false;
    for (const auto& x : {Element::zero(alg), Element::unit(alg), Element::matrix_unit(alg, 0, 0, 0)})
      any = any || rohlin_criterion(inner, x, kTol).report.pass;
    out.require(!any, "inner action passes");
    out.detail << "inner Z/2 criterion fails; ";
  }
  {
    const Prepared p = prepare("swap-M2");
    const BasicConstruction bc = build_basic_construction(p.setup.inclusion.e, p.qb, kTol);
    ProjectionSequence seq = p.setup.rohlin_witness;
    const auto alg = p.setup.inclusion.e.ambient();
    seq[0] = seq[0] + Complex(0.1) * (Element::matrix_unit(alg, 0, 0, 1) + Element::matrix_unit(alg, 0, 1, 0));
    const ForwardReport bad = duality_forward(bc, seq, kTol).report;
    const ForwardReport clean = duality_forward(bc, ProjectionSequence{seq[1]}, kTol).report;
    out.require(!bad.pass && bad.dual_module_defect > kTol.eq_tol, "perturbed forward");
    out.require(clean.dual_module_defect <= kTol.eq_tol, "untouched stage");

    const Prepared z3 = prepare("C(Z/3)");
    ProjectionSequence w = z3.setup.rohlin_witness;
    const auto c3 = z3.setup.inclusion.e.ambient();
    w[0] = w[0] + Complex(0.05) * Element::matrix_unit(c3, 1, 0, 0);
    const RohlinReport r = rohlin_check(z3.setup.inclusion.e, z3.index, w, kTol);
    out.require(!r.pass && r.projection_defect > kTol.eq_tol && r.expectation_defect > kTol.eq_tol, "perturbed C(Z/3)");
    out.require(r.centrality_defect <= kTol.eq_tol, "centrality stays exact");
    out.detail << "perturbed swap: dual module " << sci(bad.dual_module_defect) << " vs clean stage "
               << sci(clean.dual_module_defect) << "; perturbed C(Z/3): projection " << sci(r.projection_defect)
               << ", centrality " << sci(r.centrality_defect);
  }
}

void criterion12(Outcome& out) {
  Tolerance tol = kTol;
  tol.seed = 0;
  const std::string a = to_json(run_catalog("", tol)).dump();
  const std::string b = to_json(run_catalog("", tol)).dump();
  out.require(a == b, "reports differ");
  out.detail << a.size() << " bytes, identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"index values", criterion1},
      {"quasi-basis identities", criterion2},
      {"basic construction", criterion3},
      {"duality", criterion4},
      {"tunnel for swap-M2 with e = (1,0)", criterion5},
      {"criterion equivalence", criterion6},
      {"Rohlin actions are outer", criterion7},
      {"subgroup inclusion", criterion8},
      {"relative commutant containment", criterion9},
      {"beta map", criterion10},
      {"negative controls", criterion11},
      {"determinism", criterion12},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      criteria[k].second(out);
    } catch (const std::exception& ex) {
      out.pass = false;
      out.detail << "error: " << ex.what();
    }
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first << ": "
              << out.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
