#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "actions/action.hpp"
#include "asymptotic/asymptotic.hpp"
#include "expectations/expectation.hpp"

namespace incl {

using Json = nlohmann::ordered_json;

/// {"blocks": [n_1, ..., n_k]}
MultiMatrixAlgebra parse_algebra(const Json& j);
Json to_json(const MultiMatrixAlgebra& algebra);

/// Entries are numbers or [re, im] pairs, rows first.
Matrix parse_matrix(const Json& j);
Json to_json(const Matrix& m);

/// One square matrix per block. A full matrix algebra also accepts a bare matrix.
Element parse_element(const MultiMatrixAlgebra& algebra, const Json& j);
Json to_json(const Element& x);

/// {"generators": [...]} closes under products and adjoints, {"basis": [...]} is
/// verified as given.
Subalgebra parse_subalgebra(const MultiMatrixAlgebra& algebra, const Json& j, const Tolerance& tol);

struct Inclusion {
  Subalgebra a;
  Subalgebra p;
  ConditionalExpectation e;
};

/// {"algebra", "domain"?, "subalgebra", "expectation"} with the expectation
/// given as {"map_matrix": [[...]]} on ambient coordinates or
/// {"kind": "trace_preserving", "weights": [...]}.
Inclusion parse_inclusion(const Json& j, const Tolerance& tol);

/// An element or {"sequence": [...]}.
std::vector<Element> parse_witness(const MultiMatrixAlgebra& algebra, const Json& j);

/// {"group": {"kind": "cyclic"|"symmetric", "n"} or {"table"}, "action": {"kind":
/// "translation"|"swap"|"inner"|"maps", ...}}
GroupAction parse_action(const Json& j, const Tolerance& tol);

/// {"kind": "inner-z2", "stages"} or {"stages": [inclusion + "target"], "embeddings": [...]}.
/// Candidates come from "candidates" when present.
struct SystemInput {
  InductiveSystem system;
  std::optional<std::vector<Element>> candidates;
};
SystemInput parse_system(const Json& j, const Tolerance& tol);

Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

}  // namespace incl
