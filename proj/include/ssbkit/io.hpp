#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssbkit/finite_group.hpp"
#include "ssbkit/gns.hpp"
#include "ssbkit/group_oracle.hpp"
#include "ssbkit/lie_algebra.hpp"
#include "ssbkit/symmetry.hpp"

namespace ssb::io {

using nlohmann::json;

/// Parses a JSON file. Missing files and syntax errors become
/// ValidationError naming the file.
json read_json_file(const std::string& path);

/// True when spec names an existing regular file.
bool is_file(const std::string& spec);

/// SHA-256 hex digest of the file contents, or of "catalog:<name>" when spec
/// is not a file.
std::string input_digest(const std::string& spec);
std::string sha256_hex(std::string_view bytes);

/// Rational from a JSON number or string.
Rational rational_field(const json& value, const std::string& where);
/// Complex from a number, a rational string, or a [re, im] pair.
Complex complex_field(const json& value, const std::string& where);
CMatrix complex_matrix_field(const json& value, const std::string& where);

struct LoadedAlgebra {
  AlgebraPtr algebra;
  std::optional<MatrixRepresentation> rep;
};

/// Lie algebra file { "dim", "basis", "c": [[a, b, d, "p/q"], ...], "grading",
/// "split", "rep" } or a catalog name. Unlisted triples are zero; each
/// listed triple also sets its (graded) antisymmetric partner.
LoadedAlgebra load_algebra(const std::string& spec);
LoadedAlgebra parse_algebra(const json& doc, const std::string& file);

/// *-algebra file { "dim", "basis", "m", "star", "unit", "rep" } or a catalog
/// name.
StarAlgebra load_star_algebra(const std::string& spec);
StarAlgebra parse_star_algebra(const json& doc, const std::string& file);

/// { "values": [...] } file or a catalog state name.
State load_state(const StarAlgebra& algebra, const std::string& spec);

/// { "map": matrix } or { "unitary": matrix } file, or a catalog name.
Automorphism load_automorphism(const StarAlgebra& algebra, const std::string& spec);
/// { "map": matrix } or { "hamiltonian": matrix } file, or a catalog name.
Derivation load_derivation(const StarAlgebra& algebra, const std::string& spec);

struct LoadedGroup {
  FiniteGroup group;
  std::vector<std::size_t> subgroup;
};

/// { "order", "cayley", "labels", "subgroup" } file or a catalog name.
LoadedGroup load_group(const std::string& spec);
LoadedGroup parse_group(const json& doc, const std::string& file);

/// { "angles": [[...]] }, { "values": [[[re, im], ...]] } or
/// { "family": [matrices] } file, or a catalog name.
Multiplier load_multiplier(const FiniteGroup& group, const std::string& spec);

/// Subgroup representation: "trivial", "sign" (order-2 subgroups), or a file
/// { "matrices": [...] } listed in subgroup order.
std::vector<CMatrix> load_subgroup_rep(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                       const std::string& spec);

/// "X=0.5,Y=1/3", "X", "-Z", "0". Labels are matched case-insensitively.
ExactElement parse_element(const AlgebraPtr& algebra, std::string_view text);

/// Comma-separated group element indices or labels.
std::vector<std::size_t> parse_group_elements(const FiniteGroup& group, std::string_view text);
/// Comma-separated basis labels or indices.
std::vector<std::size_t> parse_basis_indices(const LieAlgebra& algebra, std::string_view text);
std::vector<double> parse_doubles(std::string_view text);

/// Values below 1e-14 in magnitude are written as 0.
double clean(double x);
json to_json(const Complex& z);
json to_json(const CMatrix& m);
json to_json(const CVector& v);
json to_json(const Element& x);
json to_json(const ExactElement& x);
json to_json(const std::vector<Complex>& v);

}  // namespace ssb::io
