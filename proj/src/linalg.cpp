#include "ssbkit/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "ssbkit/error.hpp"

namespace ssb {

CMatrix expm(const CMatrix& a) {
  const auto n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix result = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * std::max(1.0, result.cwiseAbs().maxCoeff())) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

CMatrix logm(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  for (const auto& lambda : es.eigenvalues()) {
    if (std::abs(lambda.imag()) <= 1e-12 * std::max(1.0, std::abs(lambda)) && lambda.real() <= 0.0) {
      throw DomainError("principal logarithm undefined: eigenvalue on the closed negative real axis",
                        {{"eigenvalue", {lambda.real(), lambda.imag()}}});
    }
  }
  return a.log();
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

CMatrix null_space(const CMatrix& a, double rel_tol) {
  const auto cols = a.cols();
  if (a.rows() == 0) return CMatrix::Identity(cols, cols);
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = smax > 1e-300 ? rel_tol * smax : rel_tol;
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

CMatrix unitary_part(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CVector vec(const CMatrix& a) { return Eigen::Map<const CVector>(a.data(), a.size()); }

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

Eigen::VectorXd real_coordinates(std::span<const CMatrix> basis, const CMatrix& target) {
  const auto m = target.size();
  Eigen::MatrixXd system(2 * m, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CVector v = vec(basis[i]);
    system.col(static_cast<Eigen::Index>(i)) << v.real(), v.imag();
  }
  CVector t = vec(target);
  Eigen::VectorXd rhs(2 * m);
  rhs << t.real(), t.imag();
  return system.completeOrthogonalDecomposition().solve(rhs);
}

CVector complex_coordinates(std::span<const CMatrix> basis, const CMatrix& target) {
  CMatrix system(target.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) system.col(static_cast<Eigen::Index>(i)) = vec(basis[i]);
  return system.completeOrthogonalDecomposition().solve(vec(target));
}

std::vector<Complex> spectrum(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

}  // namespace ssb
