#include "mixdisc/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace mixdisc::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ParseError(field + ": " + message);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

void expect_kind(const Json& j, const char* kind) {
  const std::string got = document_kind(j);
  if (got != kind) fail("kind", "expected \"" + std::string(kind) + "\", got \"" + got + "\"");
}

Json header(const char* kind) { return Json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

std::vector<RVector> points_from_json(const Json& j, int m) {
  std::vector<RVector> out;
  if (!j.is_array()) fail("points", "expected an array");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string field = "points[" + std::to_string(k) + "]";
    RVector v = real_vector_from_json(j[k], field);
    if (v.size() != m) fail(field, "expected " + std::to_string(m) + " coordinates");
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON");
  }
}

std::string serialize(const Json& doc) { return doc.dump(2) + "\n"; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ParseError(path + ": cannot open file");
  buf << file.rdbuf();
  return buf.str();
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail(field + "[0]", "expected a nonempty row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rf, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string cf = rf + "[" + std::to_string(c) + "]";
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2) fail(cf, "expected a [re, im] pair");
      m(r, c) = Complex(number(e[0], cf + "[0]"), number(e[1], cf + "[1]"));
    }
  }
  return m;
}

Json real_vector_to_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVector real_vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of numbers");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

std::string document_kind(const Json& j) {
  const Json& version = member(j, "schema_version", "document");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    fail("schema_version", std::string("expected \"") + kSchemaVersion + "\"");
  }
  const Json& kind = member(j, "kind", "document");
  if (!kind.is_string()) fail("kind", "expected a string");
  return kind.get<std::string>();
}

Json tuple_to_json(const MatrixTuple& t) {
  Json doc = header("tuple");
  doc["n"] = t.dim();
  Json mats = Json::array();
  for (const auto& a : t) mats.push_back(matrix_to_json(a.matrix()));
  doc["matrices"] = std::move(mats);
  return doc;
}

MatrixTuple tuple_from_json(const Json& j, const Tolerances& tol) {
  expect_kind(j, "tuple");
  const int n = integer(member(j, "n", "document"), "n");
  if (n < 1) fail("n", "must be positive");
  const Json& mats = member(j, "matrices", "document");
  if (!mats.is_array() || static_cast<int>(mats.size()) != n) fail("matrices", "expected " + std::to_string(n) + " matrices");
  std::vector<HermitianMatrix> out;
  for (int i = 0; i < n; ++i) {
    const std::string field = "matrices[" + std::to_string(i) + "]";
    const CMatrix m = matrix_from_json(mats[static_cast<std::size_t>(i)], field);
    if (m.rows() != n || m.cols() != n) fail(field, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " grid");
    out.emplace_back(m, tol.hermitian_tol);
  }
  return MatrixTuple(std::move(out));
}

Json block_to_json(const BlockMatrix& b) {
  Json doc = header("block");
  doc["n"] = b.n();
  doc["matrix"] = matrix_to_json(b.full());
  return doc;
}

BlockMatrix block_from_json(const Json& j) {
  expect_kind(j, "block");
  const int n = integer(member(j, "n", "document"), "n");
  if (n < 1) fail("n", "must be positive");
  CMatrix m = matrix_from_json(member(j, "matrix", "document"), "matrix");
  if (m.rows() != n * n || m.cols() != n * n) fail("matrix", "expected an n^2 x n^2 grid");
  return BlockMatrix(std::move(m));
}

Json pencil_to_json(const HyperbolicPencil& p, const std::vector<RVector>& points) {
  Json doc = header("pencil");
  doc["n"] = p.n();
  doc["m"] = p.m();
  Json mats = Json::array();
  for (const auto& b : p.matrices()) mats.push_back(matrix_to_json(b.matrix()));
  doc["matrices"] = std::move(mats);
  doc["direction"] = real_vector_to_json(p.e());
  if (!points.empty()) {
    Json pts = Json::array();
    for (const auto& x : points) pts.push_back(real_vector_to_json(x));
    doc["points"] = std::move(pts);
  }
  return doc;
}

PencilDocument pencil_from_json(const Json& j, const Tolerances& tol) {
  expect_kind(j, "pencil");
  const int n = integer(member(j, "n", "document"), "n");
  const int m = integer(member(j, "m", "document"), "m");
  if (n < 1 || m < 1) fail("n", "n and m must be positive");
  const Json& mats = member(j, "matrices", "document");
  if (!mats.is_array() || static_cast<int>(mats.size()) != m) fail("matrices", "expected " + std::to_string(m) + " matrices");
  std::vector<HermitianMatrix> b;
  for (int i = 0; i < m; ++i) {
    const std::string field = "matrices[" + std::to_string(i) + "]";
    const CMatrix c = matrix_from_json(mats[static_cast<std::size_t>(i)], field);
    if (c.rows() != n || c.cols() != n) fail(field, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " grid");
    b.emplace_back(c, tol.hermitian_tol);
  }
  RVector e = real_vector_from_json(member(j, "direction", "document"), "direction");
  if (e.size() != m) fail("direction", "expected " + std::to_string(m) + " coordinates");
  PencilDocument doc{HyperbolicPencil(std::move(b), std::move(e), tol), {}};
  if (const auto it = j.find("points"); it != j.end()) doc.points = points_from_json(*it, m);
  return doc;
}

Json combination_to_json(const ConvexCombination& c) {
  Json doc = header("combination");
  doc["target"] = c.target.values();
  Json vecs = Json::array();
  for (const auto& v : c.vectors) vecs.push_back(v.values());
  doc["vectors"] = std::move(vecs);
  doc["weights"] = c.weights;
  return doc;
}

ConvexCombination combination_from_json(const Json& j) {
  expect_kind(j, "combination");
  auto ints = [](const Json& a, const std::string& field) {
    if (!a.is_array() || a.empty()) fail(field, "expected a nonempty array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(integer(a[i], field + "[" + std::to_string(i) + "]"));
    return out;
  };
  ConvexCombination c;
  c.target = WeightVector(ints(member(j, "target", "document"), "target"));
  const Json& vecs = member(j, "vectors", "document");
  const Json& weights = member(j, "weights", "document");
  if (!vecs.is_array() || !weights.is_array()) fail("vectors", "vectors and weights must be arrays");
  for (std::size_t k = 0; k < vecs.size(); ++k) c.vectors.emplace_back(ints(vecs[k], "vectors[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < weights.size(); ++k) c.weights.push_back(number(weights[k], "weights[" + std::to_string(k) + "]"));
  c.validate();
  return c;
}

}  // namespace mixdisc::io
