#include "incl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "catalog/catalog.hpp"
#include "io/reports.hpp"

using namespace incl;

struct incl_context {
  Tolerance tol;
  std::string last_error;
};

struct incl_inclusion {
  std::string name;
  Inclusion inclusion;
  std::vector<Element> rohlin_witness;
  std::vector<Element> approx_witness;
  std::optional<QuasiBasis> qb;
  std::optional<IndexValue> index;
  std::optional<BasicConstruction> bc;
};

struct incl_action {
  GroupAction action;
  std::optional<Element> projection;
};

namespace {

incl_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return INCL_ERR_INVALID_ARGUMENT;
    case ErrorKind::Conformance: return INCL_ERR_CONFORMANCE;
    case ErrorKind::Parse: return INCL_ERR_PARSE;
    case ErrorKind::Verification: return INCL_ERR_VERIFICATION;
    case ErrorKind::InfiniteIndex: return INCL_ERR_INFINITE_INDEX;
    case ErrorKind::Precondition: return INCL_ERR_PRECONDITION;
    case ErrorKind::Limit: return INCL_ERR_LIMIT;
  }
  return INCL_ERR_INTERNAL;
}

template <class F>
incl_status guarded(incl_context* ctx, F&& body) {
  if (!ctx) return INCL_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    body();
    return INCL_OK;
  } catch (const Error& ex) {
    ctx->last_error = ex.what();
    return status_of(ex.kind());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
  } catch (const std::exception& ex) {
    ctx->last_error = ex.what();
  }
  return INCL_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

void emit(const Json& j, char** out) {
  const std::string s = j.dump(2);
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.c_str(), s.size() + 1);
  *out = buf;
}

void ensure_index(incl_inclusion* inc, const Tolerance& tol) {
  if (!inc->qb) inc->qb = solve_quasi_basis(inc->inclusion.e, tol);
  if (!inc->index) inc->index = watatani_index(inc->inclusion.e, *inc->qb, tol);
}

void ensure_basic(incl_inclusion* inc, const Tolerance& tol) {
  ensure_index(inc, tol);
  if (!inc->bc) inc->bc = build_basic_construction(inc->inclusion.e, *inc->qb, tol);
}

std::vector<Element> witness_or_default(const incl_inclusion* inc, const char* json,
                                        const std::vector<Element>& fallback) {
  if (json) return parse_witness(inc->inclusion.e.ambient(), parse_json_text(json));
  if (fallback.empty()) fail(ErrorKind::InvalidArgument, "no witness given and none stored for this inclusion");
  return fallback;
}

Json dims_json(const Inclusion& inc) {
  return {{"algebra", to_json(inc.e.ambient())}, {"domain_dim", inc.a.dim()}, {"range_dim", inc.p.dim()}};
}

std::vector<Element> orbit(const GroupAction& act, const Element& e) {
  std::vector<Element> out;
  for (int g = 0; g < act.group().order(); ++g) out.push_back(act.apply(g, e));
  return out;
}

}  // namespace

extern "C" {

const char* incl_version(void) { return "0.1.0"; }

const char* incl_status_string(incl_status status) {
  switch (status) {
    case INCL_OK: return "ok";
    case INCL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case INCL_ERR_CONFORMANCE: return "conformance error";
    case INCL_ERR_PARSE: return "parse error";
    case INCL_ERR_VERIFICATION: return "verification failed";
    case INCL_ERR_INFINITE_INDEX: return "infinite index";
    case INCL_ERR_PRECONDITION: return "precondition failed";
    case INCL_ERR_LIMIT: return "size limit exceeded";
    case INCL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void incl_string_free(char* s) { std::free(s); }

incl_status incl_context_create(incl_context** out) {
  if (!out) return INCL_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) incl_context();
  return *out ? INCL_OK : INCL_ERR_INTERNAL;
}

void incl_context_destroy(incl_context* ctx) { delete ctx; }

incl_status incl_context_set_tolerance(incl_context* ctx, double eq_tol, double rank_tol, int sample_count,
                                       uint64_t seed) {
  return guarded(ctx, [&] {
    Tolerance t{eq_tol, rank_tol, sample_count, seed};
    t.validate();
    ctx->tol = t;
  });
}

const char* incl_context_last_error(const incl_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

incl_status incl_inclusion_from_json(incl_context* ctx, const char* json, incl_inclusion** out) {
  return guarded(ctx, [&] {
    require(json && out, "null argument");
    *out = nullptr;
    Inclusion inc = parse_inclusion(parse_json_text(json), ctx->tol);
    *out = new incl_inclusion{"", std::move(inc), {}, {}, {}, {}, {}};
  });
}

incl_status incl_inclusion_from_catalog(incl_context* ctx, const char* name, incl_inclusion** out) {
  return guarded(ctx, [&] {
    require(name && out, "null argument");
    *out = nullptr;
    CatalogSetup s = catalog_setup(name, ctx->tol);
    *out = new incl_inclusion{s.name, std::move(s.inclusion), std::move(s.rohlin_witness),
                              std::move(s.approx_witness), {}, {}, {}};
  });
}

void incl_inclusion_destroy(incl_inclusion* inc) { delete inc; }

int incl_inclusion_dims(const incl_inclusion* inc, int* domain_dim, int* range_dim) {
  if (!inc) return 0;
  if (domain_dim) *domain_dim = inc->inclusion.a.dim();
  if (range_dim) *range_dim = inc->inclusion.p.dim();
  return 1;
}

incl_status incl_index(incl_context* ctx, incl_inclusion* inc, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    ensure_index(inc, ctx->tol);
    const auto& e = inc->inclusion.e;
    Json j = dims_json(inc->inclusion);
    j["expectation"] = to_json(e.report());
    j["faithful"] = to_json(is_faithful(e, ctx->tol));
    j["quasi_basis"] = to_json(inc->qb->report());
    j["quasi_basis"]["size"] = inc->qb->size();
    j["index"] = to_json(*inc->index);
    emit(j, report);
  });
}

incl_status incl_basic_construction(incl_context* ctx, incl_inclusion* inc, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    ensure_basic(inc, ctx->tol);
    const auto& bc = *inc->bc;
    Json j = dims_json(inc->inclusion);
    j["gns_dim"] = bc.gns->dim();
    j["basic_dim"] = bc.algebra.dim();
    j["index_scalar"] = inc->index->scalar ? Json(*inc->index->scalar) : Json(nullptr);
    j["report"] = to_json(bc.report);
    j["dual_expectation"] = to_json(bc.dual.report());
    j["dual_index"] = to_json(dual_index_check(bc, ctx->tol));
    emit(j, report);
  });
}

incl_status incl_tower(incl_context* ctx, incl_inclusion* inc, int levels, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    Json arr = Json::array();
    for (const auto& t : jones_tower(inc->inclusion.e, levels, ctx->tol)) arr.push_back(to_json(t));
    emit(Json{{"levels", arr}}, report);
  });
}

incl_status incl_tunnel(incl_context* ctx, incl_inclusion* inc, const char* projection_json, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    ensure_index(inc, ctx->tol);
    const Element e = projection_json ? parse_element(inc->inclusion.e.ambient(), parse_json_text(projection_json))
                                      : witness_or_default(inc, nullptr, inc->rohlin_witness).front();
    const TunnelResult t = tunnel_construction(inc->inclusion.e, *inc->index, e, ctx->tol);
    emit(Json{{"report", to_json(t.report)}}, report);
  });
}

incl_status incl_rohlin_check(incl_context* ctx, incl_inclusion* inc, const char* witness_json, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    ensure_index(inc, ctx->tol);
    const auto seq = witness_or_default(inc, witness_json, inc->rohlin_witness);
    emit(to_json(rohlin_check(inc->inclusion.e, *inc->index, seq, ctx->tol)), report);
  });
}

incl_status incl_approx_rep_check(incl_context* ctx, incl_inclusion* inc, const char* witness_json, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    const auto seq = witness_or_default(inc, witness_json, inc->approx_witness);
    emit(to_json(approx_rep_check(inc->inclusion.e, seq, ctx->tol)), report);
  });
}

incl_status incl_duality(incl_context* ctx, incl_inclusion* inc, const char* direction, const char* witness_json,
                         char** report) {
  return guarded(ctx, [&] {
    require(inc && direction && report, "null argument");
    const std::string dir = direction;
    ensure_basic(inc, ctx->tol);
    if (dir == "forward") {
      const auto seq = witness_or_default(inc, witness_json, inc->rohlin_witness);
      emit(to_json(duality_forward(*inc->bc, seq, ctx->tol).report), report);
    } else if (dir == "backward") {
      const auto seq = witness_or_default(inc, witness_json, inc->approx_witness);
      emit(to_json(duality_backward(*inc->bc, *inc->qb, seq, ctx->tol).report), report);
    } else if (dir == "roundtrip") {
      const auto seq = witness_or_default(inc, witness_json, inc->rohlin_witness);
      emit(to_json(duality_roundtrip(*inc->bc, seq, ctx->tol)), report);
    } else {
      fail(ErrorKind::InvalidArgument, "direction must be forward, backward or roundtrip");
    }
  });
}

incl_status incl_beta_map(incl_context* ctx, incl_inclusion* inc, const char* witness_json, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    ensure_index(inc, ctx->tol);
    const auto seq = witness_or_default(inc, witness_json, inc->rohlin_witness);
    emit(to_json(beta_map(inc->inclusion.e, *inc->index, seq, ctx->tol)), report);
  });
}

incl_status incl_relative_commutant(incl_context* ctx, incl_inclusion* inc, char** report) {
  return guarded(ctx, [&] {
    require(inc && report, "null argument");
    emit(to_json(relative_commutant_report(inc->inclusion.a, inc->inclusion.p, ctx->tol)), report);
  });
}

incl_status incl_action_from_json(incl_context* ctx, const char* json, incl_action** out) {
  return guarded(ctx, [&] {
    require(json && out, "null argument");
    *out = nullptr;
    const Json j = parse_json_text(json);
    GroupAction act = parse_action(j, ctx->tol);
    std::optional<Element> e;
    if (j.contains("projection")) e = parse_element(act.algebra(), j.at("projection"));
    *out = new incl_action{std::move(act), std::move(e)};
  });
}

incl_status incl_action_from_catalog(incl_context* ctx, const char* name, incl_action** out) {
  return guarded(ctx, [&] {
    require(name && out, "null argument");
    *out = nullptr;
    CatalogSetup s = catalog_setup(name, ctx->tol);
    if (!s.action) fail(ErrorKind::InvalidArgument, std::string("catalog entry '") + name + "' has no group action");
    std::optional<Element> e;
    if (!s.rohlin_witness.empty() && s.rohlin_witness.size() == static_cast<std::size_t>(s.action->group().order()))
      e = s.rohlin_witness.front();
    else
      e = Element::unit(s.action->algebra());
    *out = new incl_action{std::move(*s.action), std::move(e)};
  });
}

void incl_action_destroy(incl_action* act) { delete act; }

incl_status incl_fixed_point(incl_context* ctx, incl_action* act, char** report) {
  return guarded(ctx, [&] {
    require(act && report, "null argument");
    const auto& a = act->action;
    const ConditionalExpectation e = canonical_expectation(a, ctx->tol);
    const QuasiBasis qb = solve_quasi_basis(e, ctx->tol);
    const IndexValue index = watatani_index(e, qb, ctx->tol);
    emit(Json{{"group_order", a.group().order()},
              {"algebra", to_json(a.algebra())},
              {"action", to_json(a.report())},
              {"fixed_point_dim", e.range().dim()},
              {"expectation", to_json(e.report())},
              {"index", to_json(index)}},
         report);
  });
}

incl_status incl_rohlin_action_check(incl_context* ctx, incl_action* act, const char* projection_json,
                                     char** report) {
  return guarded(ctx, [&] {
    require(act && report, "null argument");
    const auto& a = act->action;
    const auto& tol = ctx->tol;
    if (!projection_json && !act->projection) fail(ErrorKind::InvalidArgument, "no projection given");
    const Element e =
        projection_json ? parse_element(a.algebra(), parse_json_text(projection_json)) : *act->projection;
    const CriterionResult cr = rohlin_criterion(a, e, tol);
    const ConditionalExpectation ce = canonical_expectation(a, tol);
    const IndexValue index = watatani_index(ce, solve_quasi_basis(ce, tol), tol);
    const RohlinReport rc = rohlin_check(ce, index, orbit(a, e), tol);
    Json inner = Json::array();
    for (int g = 0; g < a.group().order(); ++g) {
      if (g == a.group().unit()) continue;
      const InnerResult ir = is_inner(a, g, tol);
      Json item{{"element", a.group().labels()[g]}};
      item.update(to_json(ir));
      item.erase("unitary");
      inner.push_back(std::move(item));
    }
    emit(Json{{"criterion", to_json(cr.report)},
              {"rohlin_check", to_json(rc)},
              {"equivalent", cr.report.pass == rc.pass},
              {"inner", inner}},
         report);
  });
}

incl_status incl_subgroup_inclusion(incl_context* ctx, incl_action* act, const char* subgroup_json, char** report) {
  return guarded(ctx, [&] {
    require(act && subgroup_json && report, "null argument");
    const auto& a = act->action;
    const Json j = parse_json_text(subgroup_json);
    if (!j.is_array()) fail(ErrorKind::Parse, "subgroup: expected an array of elements");
    std::vector<int> h;
    for (const auto& x : j) {
      if (x.is_number_integer()) {
        h.push_back(x.get<int>());
      } else if (x.is_string()) {
        const int g = a.group().find(x.get<std::string>());
        if (g < 0) fail(ErrorKind::InvalidArgument, "subgroup: unknown element " + x.get<std::string>());
        h.push_back(g);
      } else {
        fail(ErrorKind::Parse, "subgroup: elements are indices or labels");
      }
    }
    if (!act->projection) fail(ErrorKind::InvalidArgument, "subgroup inclusion needs a Rohlin projection");
    const SubgroupInclusion si = subgroup_inclusion(a, h, orbit(a, *act->projection), ctx->tol);
    emit(Json{{"q_h_dim", si.a.dim()}, {"q_g_dim", si.p.dim()}, {"report", to_json(si.report)}}, report);
  });
}

incl_status incl_defect_curve(incl_context* ctx, const char* system_json, char** report) {
  return guarded(ctx, [&] {
    require(system_json && report, "null argument");
    SystemInput in = parse_system(parse_json_text(system_json), ctx->tol);
    std::vector<Element> candidates;
    if (in.candidates)
      candidates = *in.candidates;
    else
      for (int n = 0; n < in.system.size(); ++n) candidates.push_back(Element::unit(in.system.algebra(n)));
    Json embeddings = Json::array();
    for (const auto& r : in.system.reports()) embeddings.push_back(to_json(r));
    Json j = to_json(defect_curve(in.system, candidates, ctx->tol));
    j["embeddings"] = embeddings;
    emit(j, report);
  });
}

incl_status incl_catalog_list(incl_context* ctx, char** names_json) {
  return guarded(ctx, [&] {
    require(names_json, "null argument");
    Json arr = Json::array();
    for (const auto& n : catalog_names()) arr.push_back(n);
    emit(arr, names_json);
  });
}

incl_status incl_catalog_run(incl_context* ctx, const char* filter, char** report, int* all_pass) {
  return guarded(ctx, [&] {
    require(report, "null argument");
    const CatalogReport rep = run_catalog(filter ? filter : "", ctx->tol);
    if (all_pass) *all_pass = rep.pass ? 1 : 0;
    emit(to_json(rep), report);
  });
}

}  // extern "C"
