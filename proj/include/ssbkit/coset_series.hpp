#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ssbkit/lie_algebra.hpp"
#include "ssbkit/rational.hpp"

namespace ssb {

/// l_1 .. l_nmax, solving  n/(n+1)! = sum_{i=1..n} l_i / (n+1-i)!  in order.
std::vector<Rational> l_coefficients(int n_max);

struct RealizationConfig {
  int max_order = 20;
  double tol = 1e-12;

  void validate() const;
};

/// (F', I') with truncation diagnostics. F' is supported on f and I' on h.
template <class Scalar>
struct RealizationOutput {
  BasicElement<Scalar> f_prime;
  BasicElement<Scalar> i_prime;
  int terms_used = 0;
  double last_term_norm = 0.0;
  bool converged = false;
};

using Realization = RealizationOutput<double>;
using ExactRealization = RealizationOutput<Rational>;

/// Action of a broken generator F_alpha (in f) at the point F (in f):
///   I' = sum_k l_{2k-1} R_F^{2k-1}(F_alpha)
///   F' = F_alpha + sum_k l_{2k} R_F^{2k}(F_alpha) - sum_n l_n R_{I'}^n(F)
/// with R_Y(X) = [X, Y]. I' is evaluated first and fed into F'.
/// Throws NonConvergenceError (details carry the partial sums) when a series
/// is still above tol at max_order.
template <class Scalar>
RealizationOutput<Scalar> realize_broken(const BasicElement<Scalar>& f_alpha, const BasicElement<Scalar>& F,
                                         const ReductiveSplit& split, const RealizationConfig& cfg = {});

/// Action of an unbroken generator I_a (in h):
///   F' = 2 sum_k l_{2k-1} R_F^{2k-1}(I_a),  I' = I_a.
template <class Scalar>
RealizationOutput<Scalar> realize_unbroken(const BasicElement<Scalar>& i_a, const BasicElement<Scalar>& F,
                                           const ReductiveSplit& split, const RealizationConfig& cfg = {});

/// Splits gen linearly into its f and h parts and sums the two actions.
template <class Scalar>
RealizationOutput<Scalar> realize(const BasicElement<Scalar>& gen, const BasicElement<Scalar>& F,
                                  const ReductiveSplit& split, const RealizationConfig& cfg = {});

/// Linear representation of h on a carrier V: one matrix per h generator,
/// listed in the order of split.h.
struct HRepresentation {
  std::vector<std::size_t> h_indices;
  std::vector<Eigen::MatrixXcd> generators;

  std::size_t carrier_dim() const { return generators.empty() ? 0 : static_cast<std::size_t>(generators[0].rows()); }
  Eigen::MatrixXcd image(const Element& i_element) const;
};

/// Checks rho([I_a, I_b]) = [rho(I_a), rho(I_b)] to tol, plus shapes.
ValidationReport validate_h_representation(const LieAlgebra& algebra, const HRepresentation& rep, double tol = 1e-10);

struct ProductAction {
  Element f_prime;
  Eigen::VectorXcd v_prime;
  Realization realization;
};

/// Realization on U_F x V: (F, v) -> (F', rho(I') v).
ProductAction realize_on_product(const Element& gen, const Element& F, const Eigen::VectorXcd& v,
                                 const HRepresentation& rep, const ReductiveSplit& split,
                                 const RealizationConfig& cfg = {});

/// The same series evaluated inside the even part of a superalgebra. The split
/// is given over the parent's even generator indices; outputs live on the
/// parent algebra. Odd components in gen or F are a validation error.
template <class Scalar>
RealizationOutput<Scalar> realize_even_super(const BasicElement<Scalar>& gen, const BasicElement<Scalar>& F,
                                             const ReductiveSplit& split, const RealizationConfig& cfg = {});

}  // namespace ssb
