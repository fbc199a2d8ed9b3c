#include "io/json_io.hpp"

#include <fstream>
#include <sstream>

namespace incl {

namespace {

const Json& field(const Json& j, const char* name, const std::string& ctx) {
  if (!j.is_object() || !j.contains(name)) fail(ErrorKind::Parse, ctx + ": missing field '" + name + "'");
  return j.at(name);
}

const Json& array_field(const Json& j, const char* name, const std::string& ctx) {
  const Json& v = field(j, name, ctx);
  if (!v.is_array()) fail(ErrorKind::Parse, ctx + ": field '" + name + "' must be an array");
  return v;
}

int int_field(const Json& j, const char* name, const std::string& ctx) {
  const Json& v = field(j, name, ctx);
  if (!v.is_number_integer()) fail(ErrorKind::Parse, ctx + ": field '" + name + "' must be an integer");
  return v.get<int>();
}

std::string kind_of(const Json& j, const std::string& ctx) {
  const Json& v = field(j, "kind", ctx);
  if (!v.is_string()) fail(ErrorKind::Parse, ctx + ": field 'kind' must be a string");
  return v.get<std::string>();
}

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::Parse, "matrix: entries must be numbers or [re, im] pairs");
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::vector<Element> parse_elements(const MultiMatrixAlgebra& algebra, const Json& j) {
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(parse_element(algebra, x));
  return out;
}

std::vector<double> parse_weights(const Json& j, const std::string& ctx) {
  std::vector<double> w;
  for (const auto& x : j) {
    if (!x.is_number()) fail(ErrorKind::Parse, ctx + ": weights must be numbers");
    w.push_back(x.get<double>());
  }
  return w;
}

FiniteGroup parse_group(const Json& j) {
  const std::string ctx = "group";
  if (j.contains("table")) {
    std::vector<std::vector<int>> table;
    for (const auto& row : array_field(j, "table", ctx)) {
      if (!row.is_array()) fail(ErrorKind::Parse, "group: table rows must be arrays");
      std::vector<int> r;
      for (const auto& x : row) {
        if (!x.is_number_integer()) fail(ErrorKind::Parse, "group: table entries must be integers");
        r.push_back(x.get<int>());
      }
      table.push_back(std::move(r));
    }
    return FiniteGroup::from_table(std::move(table));
  }
  const std::string kind = kind_of(j, ctx);
  if (kind == "cyclic") return FiniteGroup::cyclic(int_field(j, "n", ctx));
  if (kind == "symmetric") return FiniteGroup::symmetric(int_field(j, "n", ctx));
  fail(ErrorKind::Parse, "group: unknown kind '" + kind + "'");
}

}  // namespace

MultiMatrixAlgebra parse_algebra(const Json& j) {
  std::vector<int> dims;
  for (const auto& d : array_field(j, "blocks", "algebra")) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      fail(ErrorKind::Parse, "algebra: block dimensions must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.empty()) fail(ErrorKind::Parse, "algebra: at least one block required");
  return MultiMatrixAlgebra(dims);
}

Json to_json(const MultiMatrixAlgebra& algebra) {
  Json blocks = Json::array();
  for (int d : algebra.block_dims()) blocks.push_back(d);
  return Json{{"blocks", blocks}};
}

Matrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorKind::Parse, "matrix: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail(ErrorKind::Parse, "matrix: rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      fail(ErrorKind::Parse, "matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_complex(row[c]);
  }
  return m;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Element parse_element(const MultiMatrixAlgebra& algebra, const Json& j) {
  if (j.is_object() && j.contains("blocks")) return parse_element(algebra, j.at("blocks"));
  if (!j.is_array()) fail(ErrorKind::Parse, "element: expected a list of blocks");
  // A bare matrix is accepted for a single-block algebra when its shape fits.
  if (algebra.num_blocks() == 1) {
    try {
      const Matrix m = parse_matrix(j);
      if (m.rows() == algebra.block_dim(0) && m.cols() == algebra.block_dim(0)) return Element(algebra, {m});
    } catch (const Error&) {
    }
  }
  if (static_cast<int>(j.size()) != algebra.num_blocks())
    fail(ErrorKind::Parse, "element: expected " + std::to_string(algebra.num_blocks()) + " blocks");
  std::vector<Matrix> blocks;
  for (int r = 0; r < algebra.num_blocks(); ++r) {
    Matrix m = parse_matrix(j[r]);
    if (m.rows() != algebra.block_dim(r) || m.cols() != algebra.block_dim(r))
      fail(ErrorKind::Conformance, "element: block " + std::to_string(r) + " has the wrong size");
    blocks.push_back(std::move(m));
  }
  return Element(algebra, std::move(blocks));
}

Json to_json(const Element& x) {
  Json blocks = Json::array();
  for (int r = 0; r < x.num_blocks(); ++r) blocks.push_back(to_json(x.block(r)));
  return blocks;
}

Subalgebra parse_subalgebra(const MultiMatrixAlgebra& algebra, const Json& j, const Tolerance& tol) {
  if (j.is_string() && j.get<std::string>() == "whole") return Subalgebra::whole(algebra);
  if (j.is_object() && j.contains("generators")) {
    const auto gens = parse_elements(algebra, array_field(j, "generators", "subalgebra"));
    return generated_subalgebra(algebra, gens, tol);
  }
  if (j.is_object() && j.contains("basis")) {
    const auto basis = parse_elements(algebra, array_field(j, "basis", "subalgebra"));
    return Subalgebra::verified(Subspace::span(algebra, basis, tol.rank_tol), tol);
  }
  fail(ErrorKind::Parse, "subalgebra: expected 'generators' or 'basis'");
}

Inclusion parse_inclusion(const Json& j, const Tolerance& tol) {
  const std::string ctx = "inclusion";
  const MultiMatrixAlgebra algebra = parse_algebra(field(j, "algebra", ctx));
  Subalgebra a = j.contains("domain") ? parse_subalgebra(algebra, j.at("domain"), tol) : Subalgebra::whole(algebra);
  Subalgebra p = parse_subalgebra(algebra, field(j, "subalgebra", ctx), tol);
  const Json& ej = field(j, "expectation", ctx);
  if (ej.is_object() && ej.contains("map_matrix")) {
    const Matrix m = parse_matrix(ej.at("map_matrix"));
    if (m.rows() != algebra.vector_dim() || m.cols() != algebra.vector_dim())
      fail(ErrorKind::Conformance, "expectation: map_matrix must be vector_dim x vector_dim");
    auto e = ConditionalExpectation::from_ambient_map(a, p, m, tol);
    return {std::move(a), std::move(p), std::move(e)};
  }
  const std::string kind = kind_of(ej, "expectation");
  if (kind != "trace_preserving") fail(ErrorKind::Parse, "expectation: unknown kind '" + kind + "'");
  std::vector<double> weights(algebra.num_blocks(), 1.0);
  if (ej.contains("weights")) weights = parse_weights(array_field(ej, "weights", "expectation"), "expectation");
  auto e = trace_preserving_expectation(a, p, weights, tol);
  return {std::move(a), std::move(p), std::move(e)};
}

std::vector<Element> parse_witness(const MultiMatrixAlgebra& algebra, const Json& j) {
  if (j.is_object() && j.contains("sequence")) {
    auto seq = parse_elements(algebra, array_field(j, "sequence", "witness"));
    if (seq.empty()) fail(ErrorKind::Parse, "witness: empty sequence");
    return seq;
  }
  return {parse_element(algebra, j)};
}

GroupAction parse_action(const Json& j, const Tolerance& tol) {
  const std::string ctx = "action";
  FiniteGroup group = parse_group(field(j, "group", ctx));
  const Json& aj = field(j, "action", ctx);
  const std::string kind = kind_of(aj, ctx);
  if (kind == "translation") return translation_action(group, tol);
  if (kind == "swap") {
    if (group.order() != 2) fail(ErrorKind::InvalidArgument, "action: swap needs a group of order 2");
    return swap_action(int_field(aj, "n", ctx), tol);
  }
  const MultiMatrixAlgebra algebra = parse_algebra(field(aj, "algebra", ctx));
  if (kind == "inner") {
    const auto us = parse_elements(algebra, array_field(aj, "unitaries", ctx));
    return inner_action(group, us, tol);
  }
  if (kind == "maps") {
    std::vector<Matrix> maps;
    for (const auto& m : array_field(aj, "maps", ctx)) maps.push_back(parse_matrix(m));
    return GroupAction::create(std::move(group), algebra, std::move(maps), tol);
  }
  if (kind == "trivial") return trivial_action(group, algebra, tol);
  fail(ErrorKind::Parse, "action: unknown kind '" + kind + "'");
}

SystemInput parse_system(const Json& j, const Tolerance& tol) {
  const std::string ctx = "system";
  if (j.contains("kind")) {
    const std::string kind = kind_of(j, ctx);
    if (kind != "inner-z2") fail(ErrorKind::Parse, "system: unknown kind '" + kind + "'");
    SystemInput in{inner_z2_system(int_field(j, "stages", ctx), tol), std::nullopt};
    if (j.contains("candidates")) {
      std::vector<Element> c;
      int n = 0;
      for (const auto& x : array_field(j, "candidates", ctx)) {
        if (n >= in.system.size()) fail(ErrorKind::Parse, "system: more candidates than stages");
        c.push_back(parse_element(in.system.algebra(n++), x));
      }
      in.candidates = std::move(c);
    }
    return in;
  }
  std::vector<StageData> stages;
  std::vector<Element> candidates;
  for (const auto& s : array_field(j, "stages", ctx)) {
    Inclusion inc = parse_inclusion(s, tol);
    const auto& alg = inc.e.ambient();
    std::vector<Element> gens = s.contains("generators") ? parse_elements(alg, array_field(s, "generators", ctx))
                                                           : inc.a.generators();
    const Element target = parse_element(alg, field(s, "target", ctx));
    if (s.contains("candidate")) candidates.push_back(parse_element(alg, s.at("candidate")));
    stages.push_back({std::move(inc.e), std::move(gens), target});
  }
  std::vector<Matrix> embeddings;
  if (j.contains("embeddings"))
    for (const auto& m : array_field(j, "embeddings", ctx)) embeddings.push_back(parse_matrix(m));
  SystemInput in{InductiveSystem::create(std::move(stages), std::move(embeddings), tol), std::nullopt};
  if (!candidates.empty()) {
    if (static_cast<int>(candidates.size()) != in.system.size())
      fail(ErrorKind::Parse, "system: give a candidate for every stage or none");
    in.candidates = std::move(candidates);
  }
  return in;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::Parse, std::string("json: ") + ex.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_json_text(os.str());
}

}  // namespace incl
