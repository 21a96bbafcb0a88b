#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ssb {

/// One failed check: which rule, on which indices.
struct Violation {
  std::string rule;
  std::vector<std::int64_t> indices;
  std::string detail;
};

/// Result of a structural check. Violations are data, not errors; an empty
/// list means the object passed.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string rule, std::vector<std::int64_t> indices, std::string detail = {}) {
    violations.push_back({std::move(rule), std::move(indices), std::move(detail)});
  }
  void append(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }

  nlohmann::json to_json() const;
};

/// Throws ValidationError carrying the report when it is not ok.
void throw_if_invalid(const ValidationReport& report, const std::string& what);

}  // namespace ssb
