#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssbkit/finite_group.hpp"
#include "ssbkit/gns.hpp"
#include "ssbkit/linalg.hpp"
#include "ssbkit/rational.hpp"

namespace ssb {

/// U(1)-valued two-cochain k(g, h) = exp(2 pi i angle(g, h)). Exact
/// multipliers store angles reduced into [0, 1); numeric ones store unit
/// complex values only.
class Multiplier {
 public:
  static Multiplier exact(std::size_t order, std::vector<Rational> angles);
  /// Throws ValidationError when some |value| differs from 1 by more than tol.
  static Multiplier numeric(std::size_t order, std::vector<Complex> values, double tol = 1e-10);
  static Multiplier trivial(std::size_t order) { return exact(order, std::vector<Rational>(order * order)); }

  std::size_t order() const { return order_; }
  bool is_exact() const { return exact_; }
  const Rational& angle(std::size_t g, std::size_t h) const { return angles_[g * order_ + h]; }
  Complex value(std::size_t g, std::size_t h) const { return values_[g * order_ + h]; }
  /// Least common denominator of the angles: the value group is Z_N.
  Integer value_group_order() const;

  /// Exact version of a numeric multiplier whose entries are roots of unity of
  /// order <= max_denominator, if there is one.
  std::optional<Multiplier> to_exact(long max_denominator = 720, double tol = 1e-9) const;

  friend bool operator==(const Multiplier& a, const Multiplier& b) {
    return a.order_ == b.order_ && a.exact_ == b.exact_ && a.angles_ == b.angles_ && a.values_ == b.values_;
  }

 private:
  std::size_t order_ = 0;
  bool exact_ = false;
  std::vector<Rational> angles_;
  std::vector<Complex> values_;
};

/// Normalization k(e, g) = k(g, e) = 1 and
/// k(g1, g2 g3) k(g2, g3) = k(g1, g2) k(g1 g2, g3) on all triples.
/// Exact multipliers are checked exactly, numeric ones to tol.
ValidationReport verify_cocycle(const FiniteGroup& group, const Multiplier& k, double tol = 1e-10);

/// k(g, h) = b(g) b(h) / b(gh) for b given as angles.
Multiplier coboundary_of(const FiniteGroup& group, const std::vector<Rational>& b);

/// b with k = coboundary_of(b), as angles, or nullopt when k is not a
/// coboundary. Solved exactly over Z_{N|G|} (N = value group order) by
/// diagonalising the linear system modulo each prime power. Numeric
/// multipliers are converted by to_exact first; when that fails a
/// CapabilityError is thrown. Throws ValidationError if k is not a cocycle.
std::optional<std::vector<Rational>> coboundary_solve(const FiniteGroup& group, const Multiplier& k);

/// Multiplication table of Z_N x G with (z1, g1)(z2, g2) =
/// (z1 + z2 + N angle(g1, g2), g1 g2), element (z, g) at index z * |G| + g.
/// No validation; the table is associative exactly when k satisfies the
/// cocycle identity.
CayleyTable extension_table(const FiniteGroup& group, const Multiplier& k);

struct CentralExtension {
  FiniteGroup group;
  std::size_t fiber_order;

  std::size_t index(std::size_t z, std::size_t g, std::size_t base_order) const { return z * base_order + g; }
};

/// Validated extension. Throws ValidationError on a non-cocycle and
/// CapabilityError when the value group is not finite.
CentralExtension central_extension(const FiniteGroup& group, const Multiplier& k);

/// k(g, h) from U_g U_h = k(g, h) U_{gh}. Exact when every entry is a root of
/// unity of small order. Throws ValidationError if some U_g is not unitary or
/// the family is not projective.
Multiplier multiplier_from_family(const FiniteGroup& group, std::span<const CMatrix> family, double tol = 1e-10);

/// pauli: U = X^a Z^b on z2xz2 (element a + 2b).
std::vector<CMatrix> catalog_family(const FiniteGroup& group, std::string_view name);
/// trivial (any group), pauli (z2xz2 only).
Multiplier catalog_multiplier(const FiniteGroup& group, std::string_view name);
std::vector<std::string> catalog_multiplier_names();

struct InducedRepresentation {
  CosetSpace cosets;
  SectionChoice section;
  std::size_t block_dim = 0;
  std::vector<CMatrix> matrices;  // one per group element, block (g sigma, sigma) = hrep(g_sigma)
};

/// hrep[i] represents subgroup[i]. g acts by (sigma, v) -> (g sigma,
/// hrep(s(g sigma)^-1 g s(sigma)) v). Throws ValidationError when hrep is not
/// a homomorphism, the section is invalid, or the result fails M(g)M(h) =
/// M(gh).
InducedRepresentation induced_action(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                     const SectionChoice& section, std::span<const CMatrix> hrep,
                                     double tol = 1e-12);

std::vector<Complex> character(std::span<const CMatrix> rep);
/// Character value on each conjugacy class (classes as in conjugacy_classes).
std::vector<Complex> class_character(const FiniteGroup& group, std::span<const CMatrix> rep);

/// Basis of {X : X pi(a) = pi(a) X for all a}.
std::vector<CMatrix> commutant_basis(std::span<const CMatrix> pi, double tol = 1e-10);

/// Unitary U with U pi1(a) = pi2(a) U for every a, or nullopt. The candidate
/// is the orthogonal projection of the identity onto the intertwiner space,
/// then the basis vectors, then seeded random combinations; the first
/// invertible one is made unitary by its polar part. pi2 = pi1 gives the
/// identity.
std::optional<CMatrix> implementing_unitary(std::span<const CMatrix> pi1, std::span<const CMatrix> pi2,
                                            double tol = 1e-10);

struct SSBWitness {
  std::size_t basis_index;
  std::string label;
  std::vector<Complex> spectrum;          // of pi_f(x)
  std::vector<Complex> rotated_spectrum;  // of pi_f(rho(x))
};

struct SSBVerdict {
  bool implementable = false;
  std::size_t carrier_dim = 0;
  double stationarity_defect = 0.0;
  std::optional<CMatrix> unitary;
  std::optional<SSBWitness> witness;
};

/// Compares pi_f with pi_f o rho. Stationary states use stationary_unitary;
/// otherwise implementing_unitary decides. A broken verdict names the first
/// basis element whose spectra differ in the two representations.
SSBVerdict detect_ssb(const StarAlgebra& algebra, const State& f, const Automorphism& rho, double tol = 1e-10);

}  // namespace ssb
