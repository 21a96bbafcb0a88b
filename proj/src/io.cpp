#include "ssbkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "ssbkit/error.hpp"

namespace ssb::io {

namespace {

[[noreturn]] void fail(const std::string& file, const std::string& field, const std::string& message) {
  throw ValidationError(file + ": field '" + field + "': " + message, {{"file", file}, {"field", field}});
}

const json& require(const json& doc, const char* key, const std::string& file) {
  if (!doc.is_object() || !doc.contains(key)) fail(file, key, "missing");
  return doc.at(key);
}

std::size_t index_field(const json& value, const std::vector<std::string>& labels, const std::string& where) {
  if (value.is_number_integer()) {
    const auto i = value.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= labels.size()) {
      throw ValidationError(where + ": index out of range", {{"field", where}});
    }
    return static_cast<std::size_t>(i);
  }
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == s) return i;
    throw ValidationError(where + ": unknown label '" + s + "'", {{"field", where}});
  }
  throw ValidationError(where + ": expected an index or a label", {{"field", where}});
}

std::vector<std::string> split_list(std::string_view text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> basis_labels(const json& doc, std::size_t dim, const std::string& file) {
  std::vector<std::string> labels;
  if (doc.contains("basis")) {
    if (!doc["basis"].is_array() || doc["basis"].size() != dim) fail(file, "basis", "expected dim labels");
    for (const auto& l : doc["basis"]) {
      if (!l.is_string()) fail(file, "basis", "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i) labels.push_back("x" + std::to_string(i));
  }
  return labels;
}

std::size_t dim_field(const json& doc, const std::string& file) {
  const json& d = require(doc, "dim", file);
  if (!d.is_number_integer() || d.get<long long>() <= 0) fail(file, "dim", "expected a positive integer");
  return d.get<std::size_t>();
}

StructureTensor sparse_tensor(const json& entries, const std::vector<std::string>& labels, const std::string& file,
                              const char* field, const std::vector<int>* grading) {
  const std::size_t dim = labels.size();
  StructureTensor t(dim);
  std::vector<bool> listed(dim * dim * dim, false);
  if (!entries.is_array()) fail(file, field, "expected a list of [a, b, d, value] entries");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string where = file + ": " + field + "[" + std::to_string(k) + "]";
    const json& e = entries[k];
    if (!e.is_array() || e.size() != 4) throw ValidationError(where + ": expected [a, b, d, value]", {{"field", field}});
    const std::size_t a = index_field(e[0], labels, where), b = index_field(e[1], labels, where),
                      d = index_field(e[2], labels, where);
    const Rational v = rational_field(e[3], where);
    t(a, b, d) = v;
    listed[(a * dim + b) * dim + d] = true;
    if (grading && a != b && !listed[(b * dim + a) * dim + d]) {
      const bool both_odd = !grading->empty() && (*grading)[a] == 1 && (*grading)[b] == 1;
      t(b, a, d) = both_odd ? v : Rational(-v);
    }
  }
  return t;
}

RationalMatrix rational_matrix(const json& value, std::size_t n, const std::string& file, const char* field) {
  if (!value.is_array() || value.size() != n) fail(file, field, "expected a dim x dim matrix");
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!value[i].is_array() || value[i].size() != n) fail(file, field, "row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rational_field(value[i][j], file + ": " + field);
  }
  return m;
}

std::vector<CMatrix> matrix_list(const json& value, const std::string& file, const char* field) {
  if (!value.is_array()) fail(file, field, "expected a list of matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(complex_matrix_field(value[i], file + ": " + field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file '" + path + "'", {{"file", path}});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": JSON syntax error: " + e.what(), {{"file", path}, {"byte", e.byte}});
  }
}

bool is_file(const std::string& spec) {
  std::error_code ec;
  return std::filesystem::is_regular_file(spec, ec);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string input_digest(const std::string& spec) {
  if (!is_file(spec)) return sha256_hex("catalog:" + spec);
  std::ifstream in(spec, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

Rational rational_field(const json& value, const std::string& where) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number()) {
      std::ostringstream s;
      s << std::setprecision(17) << value.get<double>();
      return parse_rational(s.str());
    }
  } catch (const Error&) {
  }
  throw ValidationError(where + ": expected a rational number", {{"field", where}});
}

Complex complex_field(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return to_double(rational_field(value, where));
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw ValidationError(where + ": expected a number or a [re, im] pair", {{"field", where}});
}

CMatrix complex_matrix_field(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty() || !value[0].is_array()) {
    throw ValidationError(where + ": expected a nonempty list of rows", {{"field", where}});
  }
  const auto rows = value.size(), cols = value[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols) {
      throw ValidationError(where + ": ragged matrix", {{"field", where}});
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = complex_field(value[i][j], where);
    }
  }
  return m;
}

LoadedAlgebra parse_algebra(const json& doc, const std::string& file) {
  const std::size_t dim = dim_field(doc, file);
  const auto labels = basis_labels(doc, dim, file);
  std::vector<int> grading;
  if (doc.contains("grading")) {
    const json& g = doc["grading"];
    if (!g.is_array() || g.size() != dim) fail(file, "grading", "expected dim parities");
    for (const auto& p : g) {
      if (!p.is_number_integer() || (p.get<int>() != 0 && p.get<int>() != 1)) fail(file, "grading", "parity must be 0 or 1");
      grading.push_back(p.get<int>());
    }
  }
  StructureTensor c = sparse_tensor(require(doc, "c", file), labels, file, "c", &grading);
  std::optional<ReductiveSplit> split;
  if (doc.contains("split")) {
    const json& s = doc["split"];
    ReductiveSplit rs;
    for (const char* key : {"h", "f"}) {
      if (!s.is_object() || !s.contains(key) || !s[key].is_array()) fail(file, std::string("split.") + key, "expected a list");
      auto& target = std::string_view(key) == "h" ? rs.h : rs.f;
      for (const auto& v : s[key]) target.push_back(index_field(v, labels, file + ": split." + key));
    }
    split = rs;
  }
  const std::string name = doc.value("name", std::filesystem::path(file).stem().string());
  LoadedAlgebra out{std::make_shared<const LieAlgebra>(name, labels, std::move(c), std::move(grading), split),
                    std::nullopt};
  if (doc.contains("rep")) out.rep.emplace(out.algebra, matrix_list(doc["rep"], file, "rep"));
  return out;
}

LoadedAlgebra load_algebra(const std::string& spec) {
  if (is_file(spec)) return parse_algebra(read_json_file(spec), spec);
  LoadedAlgebra out{catalog_algebra(spec), std::nullopt};
  if (spec != "superheis") out.rep.emplace(catalog_representation(spec));
  return out;
}

StarAlgebra parse_star_algebra(const json& doc, const std::string& file) {
  const std::size_t dim = dim_field(doc, file);
  auto labels = basis_labels(doc, dim, file);
  StructureTensor m = sparse_tensor(require(doc, "m", file), labels, file, "m", nullptr);
  RationalMatrix star = rational_matrix(require(doc, "star", file), dim, file, "star");
  const json& u = require(doc, "unit", file);
  if (!u.is_array() || u.size() != dim) fail(file, "unit", "expected dim entries");
  std::vector<Rational> unit;
  for (const auto& x : u) unit.push_back(rational_field(x, file + ": unit"));
  std::vector<CMatrix> rep;
  if (doc.contains("rep")) rep = matrix_list(doc["rep"], file, "rep");
  const std::string name = doc.value("name", std::filesystem::path(file).stem().string());
  return StarAlgebra(name, std::move(labels), std::move(m), std::move(star), std::move(unit), std::move(rep));
}

StarAlgebra load_star_algebra(const std::string& spec) {
  if (is_file(spec)) return parse_star_algebra(read_json_file(spec), spec);
  return catalog_star_algebra(spec);
}

State load_state(const StarAlgebra& algebra, const std::string& spec) {
  if (!is_file(spec)) return catalog_state(algebra, spec);
  const json doc = read_json_file(spec);
  const json& v = require(doc, "values", spec);
  if (!v.is_array() || v.size() != algebra.dim()) fail(spec, "values", "expected one value per basis element");
  State f{CVector(static_cast<Eigen::Index>(algebra.dim()))};
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    f.values(static_cast<Eigen::Index>(a)) = complex_field(v[a], spec + ": values[" + std::to_string(a) + "]");
  }
  return f;
}

Automorphism load_automorphism(const StarAlgebra& algebra, const std::string& spec) {
  if (!is_file(spec)) return catalog_automorphism(algebra, spec);
  const json doc = read_json_file(spec);
  if (doc.contains("unitary")) return automorphism_from_unitary(algebra, complex_matrix_field(doc["unitary"], spec + ": unitary"));
  return {complex_matrix_field(require(doc, "map", spec), spec + ": map")};
}

Derivation load_derivation(const StarAlgebra& algebra, const std::string& spec) {
  if (!is_file(spec)) return catalog_derivation(algebra, spec);
  const json doc = read_json_file(spec);
  if (doc.contains("hamiltonian")) {
    return inner_derivation(algebra, complex_matrix_field(doc["hamiltonian"], spec + ": hamiltonian"));
  }
  return {complex_matrix_field(require(doc, "map", spec), spec + ": map")};
}

LoadedGroup parse_group(const json& doc, const std::string& file) {
  const json& t = require(doc, "cayley", file);
  if (!t.is_array()) fail(file, "cayley", "expected a square table");
  CayleyTable table;
  for (const auto& row : t) {
    if (!row.is_array()) fail(file, "cayley", "rows must be lists");
    std::vector<std::size_t> r;
    for (const auto& x : row) {
      if (!x.is_number_integer() || x.get<long long>() < 0) fail(file, "cayley", "entries must be element indices");
      r.push_back(x.get<std::size_t>());
    }
    table.push_back(std::move(r));
  }
  if (doc.contains("order") && (!doc["order"].is_number_integer() || doc["order"].get<std::size_t>() != table.size())) {
    fail(file, "order", "does not match the table");
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) fail(file, "labels", "expected a list of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) fail(file, "labels", "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  const std::string name = doc.value("name", std::filesystem::path(file).stem().string());
  LoadedGroup out{FiniteGroup(std::move(table), std::move(labels), name), {}};
  if (doc.contains("subgroup")) {
    for (const auto& x : doc["subgroup"]) out.subgroup.push_back(index_field(x, out.group.labels(), file + ": subgroup"));
  } else {
    out.subgroup = {out.group.identity()};
  }
  return out;
}

LoadedGroup load_group(const std::string& spec) {
  if (is_file(spec)) return parse_group(read_json_file(spec), spec);
  return {catalog_group(spec), catalog_subgroup(spec)};
}

Multiplier load_multiplier(const FiniteGroup& group, const std::string& spec) {
  if (!is_file(spec)) return catalog_multiplier(group, spec);
  const json doc = read_json_file(spec);
  const std::size_t n = group.order();
  auto table = [&](const char* field) -> const json& {
    const json& t = doc[field];
    if (!t.is_array() || t.size() != n) fail(spec, field, "expected an order x order table");
    for (const auto& row : t)
      if (!row.is_array() || row.size() != n) fail(spec, field, "expected an order x order table");
    return t;
  };
  if (doc.contains("angles")) {
    const json& t = table("angles");
    std::vector<Rational> angles;
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t h = 0; h < n; ++h) angles.push_back(rational_field(t[g][h], spec + ": angles"));
    return Multiplier::exact(n, std::move(angles));
  }
  if (doc.contains("values")) {
    const json& t = table("values");
    std::vector<Complex> values;
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t h = 0; h < n; ++h) values.push_back(complex_field(t[g][h], spec + ": values"));
    return Multiplier::numeric(n, std::move(values));
  }
  if (doc.contains("family")) return multiplier_from_family(group, matrix_list(doc["family"], spec, "family"));
  fail(spec, "angles", "expected one of 'angles', 'values' or 'family'");
}

std::vector<CMatrix> load_subgroup_rep(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                       const std::string& spec) {
  if (spec == "trivial") return std::vector<CMatrix>(subgroup.size(), CMatrix::Identity(1, 1));
  if (spec == "sign") {
    if (subgroup.size() != 2) throw ValidationError("the sign representation needs a subgroup of order 2");
    std::vector<CMatrix> out;
    for (std::size_t h : subgroup) out.push_back(CMatrix::Constant(1, 1, h == group.identity() ? 1.0 : -1.0));
    return out;
  }
  if (!is_file(spec)) {
    throw ValidationError("unknown subgroup representation '" + spec + "'", {{"known", {"trivial", "sign"}}});
  }
  auto mats = matrix_list(require(read_json_file(spec), "matrices", spec), spec, "matrices");
  if (mats.size() != subgroup.size()) fail(spec, "matrices", "expected one matrix per subgroup element");
  return mats;
}

ExactElement parse_element(const AlgebraPtr& algebra, std::string_view text) {
  ExactElement x = ExactElement::zero(algebra);
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s == "0") return x;
  for (const auto& term : split_list(s)) {
    if (term.empty()) throw ValidationError("empty term in element '" + std::string(text) + "'");
    std::string label = term;
    Rational coeff = 1;
    if (auto eq = term.find('='); eq != std::string::npos) {
      label = term.substr(0, eq);
      coeff = parse_rational(term.substr(eq + 1));
    } else if (term[0] == '-' || term[0] == '+') {
      label = term.substr(1);
      if (term[0] == '-') coeff = -1;
    }
    auto idx = algebra->index_of(label);
    if (!idx) {
      throw ValidationError("unknown basis label '" + label + "' for algebra '" + algebra->name() + "'",
                            {{"known", algebra->basis_labels()}});
    }
    x[*idx] += coeff;
  }
  return x;
}

std::vector<std::size_t> parse_group_elements(const FiniteGroup& group, std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    if (auto idx = group.index_of(item)) {
      out.push_back(*idx);
    } else if (!item.empty() && item.size() <= 9 && std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const auto i = std::stoul(item);
      if (i >= group.order()) throw ValidationError("group element index out of range: " + item);
      out.push_back(i);
    } else {
      throw ValidationError("unknown group element '" + item + "'", {{"known", group.labels()}});
    }
  }
  return out;
}

std::vector<std::size_t> parse_basis_indices(const LieAlgebra& algebra, std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    if (item.empty()) continue;
    auto idx = algebra.index_of(item);
    if (!idx) throw ValidationError("unknown basis label '" + item + "'", {{"known", algebra.basis_labels()}});
    out.push_back(*idx);
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + item + "'");
    }
  }
  return out;
}

double clean(double x) { return std::abs(x) < 1e-14 ? 0.0 : x; }

json to_json(const Complex& z) { return json::array({clean(z.real()), clean(z.imag())}); }

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(Complex(m(i, j))));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(Complex(v(i))));
  return out;
}

json to_json(const Element& x) {
  json out = json::array();
  for (double c : x.coeffs()) out.push_back(clean(c));
  return out;
}

json to_json(const ExactElement& x) {
  json out = json::array();
  for (const auto& c : x.coeffs()) out.push_back(format_rational(c));
  return out;
}

json to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace ssb::io
