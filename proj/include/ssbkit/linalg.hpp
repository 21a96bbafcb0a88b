#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ssb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// exp(A) by scaling and squaring with a truncated Taylor series. Accurate to
/// ~1e-13 relative for ||A|| <= 5 in double precision.
CMatrix expm(const CMatrix& a);

/// Principal logarithm. Throws DomainError when an eigenvalue lies on the
/// closed negative real axis.
CMatrix logm(const CMatrix& a);

/// Largest singular value.
double operator_norm(const CMatrix& a);
double max_abs(const CMatrix& a);

/// Orthonormal basis (columns) of the null space of a, using the relative
/// singular-value threshold rel_tol * sigma_max (absolute when sigma_max ~ 0).
CMatrix null_space(const CMatrix& a, double rel_tol = 1e-10);

/// Unitary factor of the polar decomposition.
CMatrix unitary_part(const CMatrix& a);

/// Column-stacking vectorisation.
CVector vec(const CMatrix& a);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Real coordinates x minimising || sum_i x_i basis_i - target ||_F.
Eigen::VectorXd real_coordinates(std::span<const CMatrix> basis, const CMatrix& target);
/// Complex coordinates c minimising || sum_i c_i basis_i - target ||_F.
CVector complex_coordinates(std::span<const CMatrix> basis, const CMatrix& target);

/// Sorted eigenvalues (by real, then imaginary part).
std::vector<Complex> spectrum(const CMatrix& a);

}  // namespace ssb
