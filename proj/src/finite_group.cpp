#include "ssbkit/finite_group.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "ssbkit/error.hpp"

namespace ssb {

namespace {

std::int64_t as_index(std::size_t i) { return static_cast<std::int64_t>(i); }

}  // namespace

ValidationReport check_group_axioms(const CayleyTable& table) {
  ValidationReport report;
  const std::size_t n = table.size();
  if (n == 0) {
    report.add("shape", {}, "empty table");
    return report;
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (table[g].size() != n) {
      report.add("shape", {as_index(g)}, "row length differs from order");
      return report;
    }
    for (std::size_t h = 0; h < n; ++h)
      if (table[g][h] >= n) report.add("range", {as_index(g), as_index(h)});
  }
  if (!report.ok()) return report;

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          report.add("associativity", {as_index(a), as_index(b), as_index(c)});
        }

  std::vector<std::size_t> identities;
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
    if (ok) identities.push_back(e);
  }
  if (identities.size() != 1) {
    report.add("identity", {as_index(identities.size())}, "expected exactly one two-sided identity");
    return report;
  }
  const std::size_t e = identities.front();
  for (std::size_t g = 0; g < n; ++g) {
    bool found = false;
    for (std::size_t h = 0; h < n && !found; ++h) found = table[g][h] == e && table[h][g] == e;
    if (!found) report.add("inverse", {as_index(g)});
  }
  return report;
}

FiniteGroup::FiniteGroup(CayleyTable table, std::vector<std::string> labels, std::string name)
    : name_(std::move(name)), table_(std::move(table)), labels_(std::move(labels)) {
  throw_if_invalid(check_group_axioms(table_), "invalid group table");
  const std::size_t n = order();
  if (labels_.empty()) {
    for (std::size_t g = 0; g < n; ++g) labels_.push_back(std::to_string(g));
  } else if (labels_.size() != n) {
    throw ValidationError("group labels must match the order", {{"order", n}, {"labels", labels_.size()}});
  }
  for (std::size_t g = 0; g < n; ++g)
    if (table_[g][g] == g) identity_ = g;
  inverse_.resize(n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (table_[g][h] == identity_) inverse_[g] = h;
}

std::optional<std::size_t> FiniteGroup::index_of(std::string_view label) const {
  for (std::size_t g = 0; g < labels_.size(); ++g)
    if (labels_[g] == label) return g;
  return std::nullopt;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t g = 0; g < order(); ++g)
    for (std::size_t h = g + 1; h < order(); ++h)
      if (mul(g, h) != mul(h, g)) return false;
  return true;
}

std::vector<std::size_t> FiniteGroup::center() const {
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < order(); ++z) {
    bool central = true;
    for (std::size_t g = 0; g < order() && central; ++g) central = mul(z, g) == mul(g, z);
    if (central) out.push_back(z);
  }
  return out;
}

std::vector<std::vector<std::size_t>> FiniteGroup::conjugacy_classes() const {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> seen(order(), false);
  for (std::size_t x = 0; x < order(); ++x) {
    if (seen[x]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t g = 0; g < order(); ++g) {
      const std::size_t y = mul(mul(g, x), inverse(g));
      if (!seen[y]) {
        seen[y] = true;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

ValidationReport check_subgroup(const FiniteGroup& group, const std::vector<std::size_t>& subgroup) {
  ValidationReport report;
  if (subgroup.empty()) {
    report.add("nonempty", {}, "subgroup is empty");
    return report;
  }
  std::vector<bool> member(group.order(), false);
  for (std::size_t h : subgroup) {
    if (h >= group.order()) {
      report.add("range", {as_index(h)});
      return report;
    }
    if (member[h]) report.add("duplicate", {as_index(h)});
    member[h] = true;
  }
  for (std::size_t a : subgroup)
    for (std::size_t b : subgroup)
      if (!member[group.mul(a, b)]) report.add("closure", {as_index(a), as_index(b)});
  return report;
}

CosetSpace left_cosets(const FiniteGroup& group, const std::vector<std::size_t>& subgroup) {
  throw_if_invalid(check_subgroup(group, subgroup), "not a subgroup");
  CosetSpace space;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  space.coset_of.assign(group.order(), unset);
  // identity coset first even when the identity is not element 0
  auto add_coset = [&](std::size_t g) {
    std::vector<std::size_t> coset;
    for (std::size_t h : subgroup) coset.push_back(group.mul(g, h));
    std::sort(coset.begin(), coset.end());
    for (std::size_t x : coset) space.coset_of[x] = space.cosets.size();
    space.cosets.push_back(std::move(coset));
  };
  add_coset(group.identity());
  for (std::size_t g = 0; g < group.order(); ++g)
    if (space.coset_of[g] == unset) add_coset(g);
  return space;
}

SectionChoice canonical_section(const FiniteGroup& group, const std::vector<std::size_t>& subgroup) {
  CosetSpace space = left_cosets(group, subgroup);
  SectionChoice s;
  for (const auto& coset : space.cosets) s.reps.push_back(coset.front());
  s.reps.front() = group.identity();
  return s;
}

ValidationReport validate_section(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                  const SectionChoice& section) {
  ValidationReport report = check_subgroup(group, subgroup);
  if (!report.ok()) return report;
  CosetSpace space = left_cosets(group, subgroup);
  if (section.reps.size() != space.size()) {
    report.add("count", {as_index(section.reps.size()), as_index(space.size())}, "one representative per coset");
    return report;
  }
  for (std::size_t i = 0; i < section.reps.size(); ++i) {
    const std::size_t r = section.reps[i];
    if (r >= group.order() || space.coset_of[r] != i) report.add("membership", {as_index(i), as_index(r)});
  }
  if (section.reps.front() != group.identity()) report.add("identity", {as_index(section.reps.front())});
  return report;
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw ValidationError("cyclic group order must be positive");
  CayleyTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t), {}, "z" + std::to_string(n));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string name) {
  const std::size_t na = a.order(), nb = b.order();
  CayleyTable t(na * nb, std::vector<std::size_t>(na * nb));
  std::vector<std::string> labels(na * nb);
  // (x, y) at index x + na * y
  for (std::size_t i = 0; i < na * nb; ++i) {
    labels[i] = a.labels()[i % na] + b.labels()[i / na];
    for (std::size_t j = 0; j < na * nb; ++j) {
      t[i][j] = a.mul(i % na, j % na) + na * b.mul(i / na, j / na);
    }
  }
  if (name.empty()) name = a.name() + "x" + b.name();
  return FiniteGroup(std::move(t), std::move(labels), std::move(name));
}

FiniteGroup symmetric_group_3() {
  using Perm = std::array<std::size_t, 3>;
  const std::vector<Perm> perms = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  const std::vector<std::string> labels = {"e", "(12)", "(13)", "(23)", "(123)", "(132)"};
  CayleyTable t(6, std::vector<std::size_t>(6));
  for (std::size_t g = 0; g < 6; ++g)
    for (std::size_t h = 0; h < 6; ++h) {
      Perm gh{};
      for (std::size_t x = 0; x < 3; ++x) gh[x] = perms[g][perms[h][x]];
      t[g][h] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), gh) - perms.begin());
    }
  return FiniteGroup(std::move(t), labels, "s3");
}

FiniteGroup catalog_group(std::string_view name) {
  if (name == "s3") return symmetric_group_3();
  if (name == "z2xz2") return direct_product(cyclic_group(2), cyclic_group(2), "z2xz2");
  if (name.size() > 1 && name.size() <= 5 && name[0] == 'z' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const auto n = std::stoul(std::string(name.substr(1)));
    if (n >= 1 && n <= 4096) return cyclic_group(n);
  }
  throw ValidationError("unknown catalog group '" + std::string(name) + "'", {{"known", catalog_group_names()}});
}

std::vector<std::size_t> catalog_subgroup(std::string_view name) {
  if (name == "z4") return {0, 2};
  if (name == "s3") return {0, 1};
  if (name == "z2xz2") return {0, 1};
  catalog_group(name);
  return {0};
}

std::vector<std::string> catalog_group_names() { return {"z2", "z3", "z4", "z2xz2", "s3", "zN"}; }

}  // namespace ssb
