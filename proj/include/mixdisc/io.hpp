#pragma once

// JSON documents for tuples, block matrices, pencils and weight combinations.
// Complex entries are always [re, im] pairs; every document carries
// schema_version "1" and a kind tag. Serialization sorts keys, so
// serialize(parse(serialize(x))) == serialize(x).

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixdisc/genaf.hpp"
#include "mixdisc/hyperbolic.hpp"
#include "mixdisc/pascal.hpp"

namespace mixdisc::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Throws ParseError with line and column on malformed text.
Json parse_json(std::string_view text, std::string_view source = "<input>");
/// Two-space indent, sorted keys, trailing newline.
std::string serialize(const Json& doc);
std::string sha256_hex(std::string_view bytes);
/// Reads a whole file, or `in` when path is "-". Throws ParseError if the
/// file cannot be opened.
std::string read_source(const std::string& path, std::istream& in);

Json matrix_to_json(const CMatrix& m);
/// Row-major grid of [re, im] pairs; `field` prefixes diagnostics.
CMatrix matrix_from_json(const Json& j, const std::string& field);
Json real_vector_to_json(const RVector& v);
RVector real_vector_from_json(const Json& j, const std::string& field);

Json tuple_to_json(const MatrixTuple& t);
MatrixTuple tuple_from_json(const Json& j, const Tolerances& tol = kDefaultTolerances);

Json block_to_json(const BlockMatrix& b);
BlockMatrix block_from_json(const Json& j);

struct PencilDocument {
  HyperbolicPencil pencil;
  std::vector<RVector> points;  // optional x_1, ..., x_k
};

Json pencil_to_json(const HyperbolicPencil& p, const std::vector<RVector>& points = {});
PencilDocument pencil_from_json(const Json& j, const Tolerances& tol = kDefaultTolerances);

Json combination_to_json(const ConvexCombination& c);
ConvexCombination combination_from_json(const Json& j);

/// Kind tag of a document after the schema check.
std::string document_kind(const Json& j);

}  // namespace mixdisc::io
