#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ssbkit/error.hpp"
#include "ssbkit/rational.hpp"
#include "ssbkit/report.hpp"

namespace ssb {

/// c(a, b, d) is the coefficient of x_d in [x_a, x_b].
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(std::size_t dim) : dim_(dim), data_(dim * dim * dim) {}

  std::size_t dim() const { return dim_; }
  Rational& operator()(std::size_t a, std::size_t b, std::size_t d) { return data_[(a * dim_ + b) * dim_ + d]; }
  const Rational& operator()(std::size_t a, std::size_t b, std::size_t d) const {
    return data_[(a * dim_ + b) * dim_ + d];
  }

  friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> data_;
};

/// Decomposition g = h + f given by basis index sets. For graded algebras
/// the split lives on the even generators only.
struct ReductiveSplit {
  std::vector<std::size_t> h;
  std::vector<std::size_t> f;

  friend bool operator==(const ReductiveSplit&, const ReductiveSplit&) = default;
};

/// Checks (graded) antisymmetry, the (graded) Jacobi identity, and grading
/// compatibility exactly. An empty grading means ungraded.
ValidationReport check_lie_axioms(const StructureTensor& c, std::span<const int> grading = {});

/// Finite-dimensional Lie (super)algebra over exact rational structure
/// constants. Construction validates every axiom and throws ValidationError
/// on failure, so a LieAlgebra value is always a valid algebra.
class LieAlgebra {
 public:
  struct Term {
    std::size_t d;
    Rational value;
    double approx;
  };

  LieAlgebra(std::string name, std::vector<std::string> basis, StructureTensor c, std::vector<int> grading = {},
             std::optional<ReductiveSplit> split = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& basis_labels() const { return basis_; }
  const StructureTensor& constants() const { return c_; }

  /// Exact label match first, then case-insensitive.
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool is_graded() const { return !grading_.empty(); }
  const std::vector<int>& grading() const { return grading_; }
  int parity(std::size_t i) const { return grading_.empty() ? 0 : grading_[i]; }

  /// Nonzero entries of c(a, b, .).
  std::span<const Term> terms(std::size_t a, std::size_t b) const { return sparse_[a * dim() + b]; }

  const std::optional<ReductiveSplit>& canonical_split() const { return split_; }

  friend bool operator==(const LieAlgebra& x, const LieAlgebra& y) {
    return x.basis_ == y.basis_ && x.grading_ == y.grading_ && x.c_ == y.c_;
  }

 private:
  std::string name_;
  std::vector<std::string> basis_;
  StructureTensor c_;
  std::vector<int> grading_;
  std::optional<ReductiveSplit> split_;
  std::vector<std::vector<Term>> sparse_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

template <class Scalar>
class BasicElement {
 public:
  BasicElement() = default;
  BasicElement(AlgebraPtr algebra, std::vector<Scalar> coeffs);

  static BasicElement zero(AlgebraPtr algebra);
  static BasicElement basis(AlgebraPtr algebra, std::size_t i, Scalar scale = Scalar(1));

  const LieAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  std::size_t dim() const { return coeffs_.size(); }
  std::span<const Scalar> coeffs() const { return coeffs_; }
  const Scalar& operator[](std::size_t i) const { return coeffs_[i]; }
  Scalar& operator[](std::size_t i) { return coeffs_[i]; }

  bool is_zero() const;
  /// Max-norm over coefficients.
  double norm() const;
  /// Keeps the listed coefficients, zeroes the rest.
  BasicElement project(std::span<const std::size_t> indices) const;
  /// Max |coefficient| outside the listed indices.
  double leakage(std::span<const std::size_t> indices) const;

  BasicElement& operator+=(const BasicElement& other);
  BasicElement& operator-=(const BasicElement& other);
  BasicElement& operator*=(const Scalar& s);

  friend BasicElement operator+(BasicElement a, const BasicElement& b) { return a += b; }
  friend BasicElement operator-(BasicElement a, const BasicElement& b) { return a -= b; }
  friend BasicElement operator*(const Scalar& s, BasicElement a) { return a *= s; }
  friend BasicElement operator-(BasicElement a) { return a *= Scalar(-1); }
  friend bool operator==(const BasicElement& a, const BasicElement& b) {
    return a.coeffs_ == b.coeffs_ && same_algebra(a.algebra_, b.algebra_);
  }

 private:
  static bool same_algebra(const AlgebraPtr& x, const AlgebraPtr& y) { return x == y || (x && y && *x == *y); }

  AlgebraPtr algebra_;
  std::vector<Scalar> coeffs_;
};

using Element = BasicElement<double>;
using ExactElement = BasicElement<Rational>;

Element to_float(const ExactElement& x);

/// Throws ValidationError unless x and y live over the same algebra.
void require_same_algebra(const LieAlgebra& x, const LieAlgebra& y);

/// Bilinear extension of the structure constants. Exact on exact inputs.
template <class Scalar>
BasicElement<Scalar> bracket(const BasicElement<Scalar>& x, const BasicElement<Scalar>& y);

/// Column d is the coefficient vector of [x, x_d].
Eigen::MatrixXd adjoint_matrix(const Element& x);
RationalMatrix adjoint_matrix(const ExactElement& x);

/// Lists every violated inclusion [h,h]<h, [f,f]<h, [f,h]<f with the
/// offending (a, b, d) triple, plus partition problems. For graded algebras
/// the partition is over the even generators.
ValidationReport validate_split(const LieAlgebra& algebra, const ReductiveSplit& split);

struct EvenPart {
  AlgebraPtr algebra;
  /// index_map[i] is the index in the parent algebra of even generator i.
  std::vector<std::size_t> index_map;

  ReductiveSplit map_split(const ReductiveSplit& parent_split) const;
  template <class Scalar>
  BasicElement<Scalar> restrict(const BasicElement<Scalar>& parent_element) const;
  template <class Scalar>
  BasicElement<Scalar> extend(const BasicElement<Scalar>& even_element, const AlgebraPtr& parent) const;
};

/// Restriction to the parity-0 generators. Throws ValidationError on an
/// ungraded algebra.
EvenPart even_subalgebra(const AlgebraPtr& algebra);

/// Built-in algebras: heisenberg3, so3, su2, sl2r, superheis. Each carries
/// its canonical reductive split.
AlgebraPtr catalog_algebra(std::string_view name);
std::vector<std::string> catalog_algebra_names();

}  // namespace ssb
