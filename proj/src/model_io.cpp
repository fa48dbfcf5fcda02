#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "liftspec/errors.hpp"
#include "liftspec/model.hpp"

namespace liftspec {

using nlohmann::json;

namespace {

int line_of_offset(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Best-effort location of a key for diagnostics after a successful parse.
int line_of_key(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
 public:
  Reader(std::string_view text, std::string what) : text_(text), what_(std::move(what)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    const int line = line_of_key(text_, field);
    throw ParseError(what_ + ": field '" + field + "': " + msg +
                         (line > 0 ? " (line " + std::to_string(line) + ")" : ""),
                     line, field);
  }

  const json& member(const json& obj, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(key, "missing");
    return *it;
  }

  int integer(const json& obj, const std::string& key) const {
    const json& v = member(obj, key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  Complex entry(const json& v, const std::string& field) const {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(field, "matrix entries must be [re, im] pairs");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  CMatrix matrix(const json& v, int r, const std::string& field) const {
    if (!v.is_array() || static_cast<int>(v.size()) != r)
      fail(field, "expected " + std::to_string(r) + " rows");
    CMatrix m(r, r);
    for (int i = 0; i < r; ++i) {
      const json& row = v[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != r)
        fail(field, "row " + std::to_string(i + 1) + " must have " +
                        std::to_string(r) + " entries");
      for (int j = 0; j < r; ++j) m(i, j) = entry(row[static_cast<size_t>(j)], field);
    }
    if (!all_finite(m)) fail(field, "non-finite entry");
    return m;
  }

 private:
  std::string_view text_;
  std::string what_;
};

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string weight_system_to_json(const WeightSystem& ws) {
  json j;
  j["version"] = kWeightSystemVersion;
  j["r"] = ws.r;
  j["d"] = ws.d();
  json star = json::array();
  for (int s : ws.star) star.push_back(s + 1);
  j["star"] = std::move(star);
  j["symmetric"] = ws.symmetric;
  j["a0"] = matrix_json(ws.a0);
  json weights = json::array();
  for (const auto& a : ws.weights) weights.push_back(matrix_json(a));
  j["weights"] = std::move(weights);
  return j.dump(2) + "\n";
}

WeightSystem parse_weight_system(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("weight system: malformed JSON at line " +
                         std::to_string(line) + ": " + e.what(),
                     line, "");
  }
  Reader rd(text, "weight system");
  if (!j.is_object()) throw ParseError("weight system: top level must be an object", 1, "");
  const json& version = rd.member(j, "version");
  if (!version.is_string() || version.get<std::string>() != kWeightSystemVersion)
    rd.fail("version", std::string("expected \"") + kWeightSystemVersion + "\"");

  WeightSystem ws;
  ws.r = rd.integer(j, "r");
  if (ws.r < 1) rd.fail("r", "must be >= 1");
  const int d = rd.integer(j, "d");
  if (d < 0) rd.fail("d", "must be >= 0");
  if (j.contains("symmetric")) {
    if (!j["symmetric"].is_boolean()) rd.fail("symmetric", "expected a boolean");
    ws.symmetric = j["symmetric"].get<bool>();
  }

  const json& star = rd.member(j, "star");
  if (!star.is_array() || static_cast<int>(star.size()) != d)
    rd.fail("star", "expected an array of " + std::to_string(d) + " indices");
  for (const auto& s : star) {
    if (!s.is_number_integer()) rd.fail("star", "indices must be integers");
    const int v = s.get<int>();
    if (v < 1 || v > d) rd.fail("star", "index " + std::to_string(v) + " outside [1, d]");
    ws.star.push_back(v - 1);
  }
  for (int i = 0; i < d; ++i) {
    if (ws.star[static_cast<size_t>(ws.star[static_cast<size_t>(i)])] != i)
      rd.fail("star", "not an involution at index " + std::to_string(i + 1));
  }

  ws.a0 = rd.matrix(rd.member(j, "a0"), ws.r, "a0");
  const json& weights = rd.member(j, "weights");
  if (!weights.is_array() || static_cast<int>(weights.size()) != d)
    rd.fail("weights", "expected " + std::to_string(d) + " matrices");
  for (int i = 0; i < d; ++i)
    ws.weights.push_back(rd.matrix(weights[static_cast<size_t>(i)], ws.r, "weights"));

  const auto violations = validate(ws);
  if (!violations.empty()) rd.fail("weights", violations.front().message);
  return ws;
}

WeightSystem load_weight_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight system file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_weight_system(buf.str());
}

void save_weight_system(const WeightSystem& ws, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weight system file " + path.string());
  out << weight_system_to_json(ws);
  if (!out) throw IoError("write failed for " + path.string());
}

std::string permutation_family_to_json(const PermutationFamily& pf) {
  json j;
  j["version"] = kPermutationFamilyVersion;
  j["n"] = pf.n;
  j["q"] = pf.q;
  json perms = json::array();
  for (const auto& p : pf.perms) {
    json row = json::array();
    for (int y : p) row.push_back(y + 1);
    perms.push_back(std::move(row));
  }
  j["perms"] = std::move(perms);
  return j.dump() + "\n";
}

PermutationFamily parse_permutation_family(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("permutation family: malformed JSON at line " + std::to_string(line) +
                         ": " + e.what(),
                     line, "");
  }
  Reader rd(text, "permutation family");
  if (!j.is_object()) throw ParseError("permutation family: top level must be an object", 1, "");
  const json& version = rd.member(j, "version");
  if (!version.is_string() || version.get<std::string>() != kPermutationFamilyVersion)
    rd.fail("version", std::string("expected \"") + kPermutationFamilyVersion + "\"");
  PermutationFamily pf;
  pf.n = rd.integer(j, "n");
  pf.q = rd.integer(j, "q");
  if (pf.n < 1) rd.fail("n", "must be >= 1");
  const json& perms = rd.member(j, "perms");
  if (!perms.is_array()) rd.fail("perms", "expected an array of arrays");
  for (const auto& row : perms) {
    if (!row.is_array() || static_cast<int>(row.size()) != pf.n)
      rd.fail("perms", "every permutation needs " + std::to_string(pf.n) + " entries");
    std::vector<int> p;
    for (const auto& v : row) {
      if (!v.is_number_integer()) rd.fail("perms", "entries must be integers");
      p.push_back(v.get<int>() - 1);
    }
    pf.perms.push_back(std::move(p));
  }
  const auto violations = validate(pf);
  if (!violations.empty()) rd.fail("perms", violations.front().message);
  return pf;
}

PermutationFamily load_permutation_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open permutation family file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_permutation_family(buf.str());
}

void save_permutation_family(const PermutationFamily& pf, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write permutation family file " + path.string());
  out << permutation_family_to_json(pf);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace liftspec
