#include "tensorforge/serialize.hpp"

#include <json.hpp>

namespace tensorforge {

using json = nlohmann::ordered_json;

namespace {

json tensor_to_json(const Tensor3& t) {
  json out;
  out["dims"] = {t.dims()[0], t.dims()[1], t.dims()[2]};
  json entries = json::array();
  for (const auto& [idx, v] : t.entries())
    entries.push_back(json::array({idx[0], idx[1], idx[2], to_string(v)}));
  out["entries"] = std::move(entries);
  return out;
}

json matrix_to_json(const MatrixQ& m) {
  json out;
  out["dims"] = {m.rows(), m.cols()};
  json entries = json::array();
  for (const auto& [ij, v] : m.entries())
    entries.push_back(json::array({ij.first, ij.second, to_string(v)}));
  out["entries"] = std::move(entries);
  return out;
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("malformed JSON document");
  return doc;
}

std::int64_t read_index(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(std::string("expected integer ") + what);
  return v.get<std::int64_t>();
}

Rational read_value(const json& v) {
  if (!v.is_string()) throw ParseError("entry value must be a string rational");
  Rational r = parse_rational(v.get<std::string>());
  if (r == 0) throw ParseError("zero entry present");
  return r;
}

Tensor3 tensor_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("entries"))
    throw ParseError("tensor document must have dims and entries");
  const auto& dims = doc["dims"];
  if (!dims.is_array() || dims.size() != 3) throw ParseError("dims must be [a,b,c]");
  Tensor3 out(read_index(dims[0], "dim"), read_index(dims[1], "dim"), read_index(dims[2], "dim"));
  const auto& entries = doc["entries"];
  if (!entries.is_array()) throw ParseError("entries must be an array");
  Index3 prev{-1, -1, -1};
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 4) throw ParseError("tensor entry must be [i,j,k,value]");
    Index3 idx{read_index(e[0], "index"), read_index(e[1], "index"), read_index(e[2], "index")};
    if (!(prev < idx)) throw ParseError("entries not sorted lexicographically");
    prev = idx;
    out.set(idx[0], idx[1], idx[2], read_value(e[3]));
  }
  return out;
}

MatrixQ matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("entries"))
    throw ParseError("matrix document must have dims and entries");
  const auto& dims = doc["dims"];
  if (!dims.is_array() || dims.size() != 2) throw ParseError("dims must be [rows,cols]");
  MatrixQ out(read_index(dims[0], "dim"), read_index(dims[1], "dim"));
  const auto& entries = doc["entries"];
  if (!entries.is_array()) throw ParseError("entries must be an array");
  std::pair<std::int64_t, std::int64_t> prev{-1, -1};
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 3) throw ParseError("matrix entry must be [i,j,value]");
    std::pair<std::int64_t, std::int64_t> ij{read_index(e[0], "index"), read_index(e[1], "index")};
    if (!(prev < ij)) throw ParseError("entries not sorted lexicographically");
    prev = ij;
    out.set(ij.first, ij.second, read_value(e[2]));
  }
  return out;
}

}  // namespace

std::string serialize(const Tensor3& t) { return tensor_to_json(t).dump(); }

Tensor3 deserialize_tensor(const std::string& text) {
  try {
    return tensor_from_json(parse_document(text));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string serialize(const MatrixQ& m) { return matrix_to_json(m).dump(); }

MatrixQ deserialize_matrix(const std::string& text) {
  try {
    return matrix_from_json(parse_document(text));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string serialize(const MatrixSubspace& s) {
  json out;
  out["ambient"] = {s.ambient_rows(), s.ambient_cols()};
  json basis = json::array();
  for (const auto& b : s.basis()) basis.push_back(matrix_to_json(b));
  out["basis"] = std::move(basis);
  return out.dump();
}

MatrixSubspace deserialize_subspace(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("ambient") || !doc.contains("basis"))
    throw ParseError("subspace document must have ambient and basis");
  const auto& ambient = doc["ambient"];
  if (!ambient.is_array() || ambient.size() != 2) throw ParseError("ambient must be [rows,cols]");
  std::vector<MatrixQ> basis;
  for (const auto& b : doc["basis"]) {
    try {
      basis.push_back(matrix_from_json(b));
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  try {
    return MatrixSubspace(read_index(ambient[0], "dim"), read_index(ambient[1], "dim"),
                          std::move(basis));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace tensorforge
