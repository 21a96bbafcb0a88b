#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssbkit/lie_algebra.hpp"
#include "ssbkit/linalg.hpp"
#include "ssbkit/rational.hpp"
#include "ssbkit/report.hpp"

namespace ssb {

/// Exact checks: associativity, involution is an antihomomorphism squaring to
/// the identity, and the unit is a two-sided identity.
ValidationReport check_star_axioms(const StructureTensor& m, const RationalMatrix& star, std::span<const Rational> unit);

/// Finite-dimensional unital *-algebra given by a multiplication tensor:
/// x_a x_b = sum_d m(a,b,d) x_d and x_a^* = sum_d star(d,a) x_d, extended
/// antilinearly. Catalog algebras also carry a faithful defining
/// representation.
class StarAlgebra {
 public:
  StarAlgebra(std::string name, std::vector<std::string> basis, StructureTensor m, RationalMatrix star,
              std::vector<Rational> unit, std::vector<CMatrix> defining_rep = {});

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& basis_labels() const { return basis_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  const StructureTensor& product_constants() const { return m_; }
  const RationalMatrix& star_matrix() const { return star_; }
  const std::vector<Rational>& unit() const { return unit_; }

  CVector unit_vector() const;
  CVector basis_vector(std::size_t a) const;
  CVector multiply(const CVector& x, const CVector& y) const;
  CVector star(const CVector& x) const;
  /// Matrix of y -> x_a y on coefficient vectors.
  const CMatrix& left_multiplication(std::size_t a) const { return left_[a]; }

  bool has_defining_rep() const { return !defining_.empty(); }
  const std::vector<CMatrix>& defining_rep() const { return defining_; }
  /// Coordinates of a matrix in the image of the defining representation.
  CVector coordinates(const CMatrix& m) const;

  friend bool operator==(const StarAlgebra& a, const StarAlgebra& b) {
    return a.basis_ == b.basis_ && a.m_ == b.m_ && a.star_ == b.star_ && a.unit_ == b.unit_;
  }

 private:
  std::string name_;
  std::vector<std::string> basis_;
  StructureTensor m_;
  RationalMatrix star_;
  std::vector<Rational> unit_;
  std::vector<CMatrix> defining_;
  CMatrix star_c_;
  std::vector<CMatrix> left_;
};

/// M_n on matrix units e_ij (index i*n + j).
StarAlgebra matrix_algebra(std::size_t n);
/// C^n: functions on n points, basis of minimal projections.
StarAlgebra commutative_algebra(std::size_t n);
StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b, std::string name = {});

/// c2, c3, m2, m2m1 (M_2 + M_1).
StarAlgebra catalog_star_algebra(std::string_view name);
std::vector<std::string> catalog_star_algebra_names();

/// Linear functional f(x) = sum_a values_a x_a.
struct State {
  CVector values;

  Complex operator()(const CVector& x) const { return values.transpose() * x; }
};

/// G_ab = f(x_a^* x_b). <x, y> = x^H G y is the GNS inner product, linear in
/// the second argument.
CMatrix gram_matrix(const StarAlgebra& algebra, const State& f);

/// f(1) = 1 and G Hermitian positive semidefinite (min eigenvalue >= -tol).
ValidationReport validate_state(const StarAlgebra& algebra, const State& f, double tol = 1e-10);

/// Named states: "trace" (normalised trace in the defining representation),
/// "evK"/"vecK" (vector state on the K-th defining basis vector, 1-based),
/// "uniform" (alias of trace).
State catalog_state(const StarAlgebra& algebra, std::string_view name);

/// f(x) = tr(rho pi0(x)) for a density matrix rho on the defining space.
State state_from_density(const StarAlgebra& algebra, const CMatrix& rho);

struct GNSRep {
  std::size_t carrier_dim = 0;
  std::vector<CMatrix> ops;  // pi(x_a)
  CVector theta;             // class of the unit
  CMatrix quotient;          // algebra coefficients -> carrier (carrier_dim x dim)
  CMatrix lift;              // right inverse of quotient on the carrier

  CMatrix image(const CVector& x) const;
};

/// Carrier = algebra modulo the Gram null space (eigenvalues below
/// null_rel * lambda_max dropped); pi acts by left multiplication and theta
/// is the class of 1. Throws ValidationError if f is not a state.
GNSRep gns_construct(const StarAlgebra& algebra, const State& f, double tol = 1e-10, double null_rel = 1e-12);

/// Unital *-homomorphism, cyclicity of theta, and f(x) = <theta, pi(x) theta>.
ValidationReport check_gns(const StarAlgebra& algebra, const State& f, const GNSRep& rep, double tol = 1e-10);

/// Linear map on coefficient vectors: column a is the image of x_a.
struct Automorphism {
  CMatrix map;
};

struct Derivation {
  CMatrix map;
};

ValidationReport validate_automorphism(const StarAlgebra& algebra, const Automorphism& rho, double tol = 1e-10);
ValidationReport validate_derivation(const StarAlgebra& algebra, const Derivation& delta, double tol = 1e-10);

/// x -> u x u^* read through the defining representation.
Automorphism automorphism_from_unitary(const StarAlgebra& algebra, const CMatrix& u);
/// x -> i [h, x] read through the defining representation.
Derivation inner_derivation(const StarAlgebra& algebra, const CMatrix& h);

/// "identity", "swap" (C^n cyclic shift of points; c2 swaps them),
/// "conj-diag" (conjugation by diag(1, i, ...)), "conj-x" (by the flip on the
/// first two defining basis vectors).
Automorphism catalog_automorphism(const StarAlgebra& algebra, std::string_view name);
/// "zero", "inner-z" (i[h, x] with h = diag(1, -1, 0, ...)).
Derivation catalog_derivation(const StarAlgebra& algebra, std::string_view name);

/// (rho f)(x) = f(rho(x)).
State pullback_state(const StarAlgebra& algebra, const State& f, const Automorphism& rho);

/// Max |f(rho(x_a)) - f(x_a)| over the basis, and the worst index.
std::pair<double, std::size_t> stationarity_defect(const StarAlgebra& algebra, const State& f,
                                                   const Automorphism& rho);

/// Unitary on the GNS carrier with U[x] = [rho(x)], so that
/// U pi(x) U^-1 = pi(rho(x)) and U theta = theta. Throws PreconditionError
/// naming the violating basis element when f is not rho-stationary.
CMatrix stationary_unitary(const StarAlgebra& algebra, const State& f, const Automorphism& rho, double tol = 1e-10);

struct HamiltonianResult {
  CMatrix H;
  double residual = 0.0;
};

/// Hermitian H with pi(delta(x_a)) = -i [H, pi(x_a)] for every a, solved in
/// least squares. Among all solutions the minimum-norm one is returned; it is
/// orthogonal to the commutant, hence traceless on every irreducible block.
/// Throws ValidationError if delta is not a *-derivation and
/// PreconditionError when no generator reaches residual < tol.
HamiltonianResult derivation_hamiltonian(const StarAlgebra& algebra, std::span<const CMatrix> rep,
                                         const Derivation& delta, double tol = 1e-10);

struct EvolveReport {
  std::vector<double> times;
  std::vector<double> deviations;
  double max_deviation = 0.0;
};

/// Compares exp(-itH) pi(x) exp(itH) with pi(exp(t delta) x) on the basis.
EvolveReport evolve_check(std::span<const CMatrix> rep, const CMatrix& H, const Derivation& delta,
                          std::span<const double> times);

}  // namespace ssb
