#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssbkit/report.hpp"

namespace ssb {

using CayleyTable = std::vector<std::vector<std::size_t>>;

/// Square shape, entries in range, associativity, a unique two-sided
/// identity and two-sided inverses.
ValidationReport check_group_axioms(const CayleyTable& table);

/// Finite group given by its Cayley table: mul(g, h) = table[g][h].
/// Construction validates the axioms.
class FiniteGroup {
 public:
  explicit FiniteGroup(CayleyTable table, std::vector<std::string> labels = {}, std::string name = {});

  const std::string& name() const { return name_; }
  std::size_t order() const { return table_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t g, std::size_t h) const { return table_[g][h]; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  const CayleyTable& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool is_abelian() const;
  std::vector<std::size_t> center() const;
  /// Classes ordered by smallest member; members sorted.
  std::vector<std::vector<std::size_t>> conjugacy_classes() const;

 private:
  std::string name_;
  CayleyTable table_;
  std::vector<std::string> labels_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
};

/// Nonempty, in range, closed under the product (finite, so that suffices).
ValidationReport check_subgroup(const FiniteGroup& group, const std::vector<std::size_t>& subgroup);

/// Left cosets gH ordered by smallest member; the identity coset comes first.
struct CosetSpace {
  std::vector<std::vector<std::size_t>> cosets;
  std::vector<std::size_t> coset_of;  // element -> coset index

  std::size_t size() const { return cosets.size(); }
};

CosetSpace left_cosets(const FiniteGroup& group, const std::vector<std::size_t>& subgroup);

/// One representative per coset, reps[i] in cosets[i].
struct SectionChoice {
  std::vector<std::size_t> reps;
};

/// Smallest index in each coset (the identity for the identity coset).
SectionChoice canonical_section(const FiniteGroup& group, const std::vector<std::size_t>& subgroup);
ValidationReport validate_section(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                  const SectionChoice& section);

FiniteGroup cyclic_group(std::size_t n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string name = {});
/// Permutations of {1,2,3}: e, (12), (13), (23), (123), (132), with
/// (gh)(x) = g(h(x)).
FiniteGroup symmetric_group_3();

/// z2, z3, z4, z2xz2, s3, and zN for any N >= 1.
FiniteGroup catalog_group(std::string_view name);
/// Default subgroup used when none is given: z4 -> {0,2}, s3 -> <(12)>,
/// z2xz2 -> {00,10}, otherwise the trivial subgroup.
std::vector<std::size_t> catalog_subgroup(std::string_view name);
std::vector<std::string> catalog_group_names();

}  // namespace ssb
