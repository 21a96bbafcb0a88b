#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ssbkit/coset_series.hpp"
#include "ssbkit/lie_algebra.hpp"
#include "ssbkit/linalg.hpp"

namespace ssb {

/// Concrete matrices for the basis generators of an algebra. Construction
/// checks commutator closure [M_a, M_b] = sum_d c(a,b,d) M_d to tol.
class MatrixRepresentation {
 public:
  MatrixRepresentation(AlgebraPtr algebra, std::vector<CMatrix> mats, double tol = 1e-10);

  const LieAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  std::size_t rep_dim() const { return static_cast<std::size_t>(mats_.front().rows()); }
  const std::vector<CMatrix>& matrices() const { return mats_; }

  CMatrix image(const Element& x) const;
  /// Least-squares real coordinates of a matrix in the span of the generators.
  Element coordinates(const CMatrix& m) const;

 private:
  AlgebraPtr algebra_;
  std::vector<CMatrix> mats_;
};

ValidationReport check_closure(const LieAlgebra& algebra, const std::vector<CMatrix>& mats, double tol = 1e-10);

/// Faithful matrix model for each catalog algebra with a matrix group
/// (heisenberg3, so3, su2, sl2r).
MatrixRepresentation catalog_representation(std::string_view name);

CMatrix exp_element(const Element& x, const MatrixRepresentation& rep);

struct FactorizeOptions {
  double tol = 1e-12;
  int max_iterations = 60;
};

/// g = exp(F) exp(I) with F in f, I in h.
struct FactorizationResult {
  Element F;
  Element I;
  double residual = 0.0;  // operator norm of exp(F)exp(I) - g
  int iterations = 0;
};

/// Damped Gauss-Newton on (F, I) with a central-difference Jacobian of the
/// full map. The default seed is the split projection of the principal log of
/// g; a stalled run is retried once from the halved seed.
/// Errors: DomainError when the principal log does not exist (default seed),
/// NonConvergenceError carrying the best iterate when the residual stays
/// above tol.
FactorizationResult coset_factorize(const CMatrix& g, const ReductiveSplit& split, const MatrixRepresentation& rep,
                                    const FactorizeOptions& opts = {},
                                    const std::optional<std::pair<Element, Element>>& seed = std::nullopt);

/// Group-level velocity of the coset action compared with the series.
struct VelocityReport {
  Element dF;
  Element dI;
  Realization series;
  Element gap_F;  // series F' - dF
  Element gap_I;  // series I' - dI
  double gap_F_norm = 0.0;
  double gap_I_norm = 0.0;

  double gap_norm() const { return std::max(gap_F_norm, gap_I_norm); }
};

/// Central difference in t of coset_factorize(exp(t gen) exp(F)) at t = 0.
VelocityReport velocity_check(const Element& gen, const Element& F, const ReductiveSplit& split,
                              const MatrixRepresentation& rep, double eps = 1e-5, const RealizationConfig& cfg = {},
                              const FactorizeOptions& opts = {});

/// Only the finite-difference part of velocity_check.
std::pair<Element, Element> factorization_velocity(const Element& gen, const Element& F, const ReductiveSplit& split,
                                                   const MatrixRepresentation& rep, double eps = 1e-5,
                                                   const FactorizeOptions& opts = {});

}  // namespace ssb
