#include "ssbkit/gns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace ssb {

namespace {

CMatrix to_complex(const RationalMatrix& m) {
  CMatrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
  return out;
}

std::int64_t as_index(std::size_t i) { return static_cast<std::int64_t>(i); }

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

ValidationReport check_star_axioms(const StructureTensor& m, const RationalMatrix& star,
                                   std::span<const Rational> unit) {
  ValidationReport report;
  const std::size_t n = m.dim();
  if (star.rows() != n || star.cols() != n || unit.size() != n) {
    report.add("shape", {as_index(n)}, "star matrix must be dim x dim and unit of length dim");
    return report;
  }
  Rational lhs, rhs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          lhs = 0;
          rhs = 0;
          for (std::size_t e = 0; e < n; ++e) {
            if (m(a, b, e) != 0 && m(e, c, d) != 0) lhs += m(a, b, e) * m(e, c, d);
            if (m(b, c, e) != 0 && m(a, e, d) != 0) rhs += m(b, c, e) * m(a, e, d);
          }
          if (lhs != rhs) report.add("associativity", {as_index(a), as_index(b), as_index(c), as_index(d)});
        }

  if (!(star * star == RationalMatrix::identity(n))) report.add("involution", {}, "star applied twice is not 1");

  // (x_a x_b)^* = x_b^* x_a^*
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) {
        lhs = 0;
        rhs = 0;
        for (std::size_t e = 0; e < n; ++e)
          if (m(a, b, e) != 0) lhs += star(d, e) * m(a, b, e);
        for (std::size_t p = 0; p < n; ++p) {
          if (star(p, b) == 0) continue;
          for (std::size_t q = 0; q < n; ++q)
            if (star(q, a) != 0 && m(p, q, d) != 0) rhs += star(p, b) * star(q, a) * m(p, q, d);
        }
        if (lhs != rhs) report.add("antihomomorphism", {as_index(a), as_index(b), as_index(d)});
      }

  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d) {
      lhs = 0;
      rhs = 0;
      for (std::size_t a = 0; a < n; ++a) {
        lhs += unit[a] * m(a, b, d);
        rhs += unit[a] * m(b, a, d);
      }
      const Rational expected = b == d ? 1 : 0;
      if (lhs != expected || rhs != expected) report.add("unit", {as_index(b), as_index(d)});
    }
  return report;
}

StarAlgebra::StarAlgebra(std::string name, std::vector<std::string> basis, StructureTensor m, RationalMatrix star,
                         std::vector<Rational> unit, std::vector<CMatrix> defining_rep)
    : name_(std::move(name)), basis_(std::move(basis)), m_(std::move(m)), star_(std::move(star)),
      unit_(std::move(unit)), defining_(std::move(defining_rep)) {
  if (m_.dim() != basis_.size()) throw ValidationError("multiplication tensor dimension differs from basis size");
  throw_if_invalid(check_star_axioms(m_, star_, unit_), "invalid *-algebra '" + name_ + "'");

  const auto n = ix(dim());
  star_c_ = to_complex(star_);
  left_.assign(dim(), CMatrix::Zero(n, n));
  for (std::size_t a = 0; a < dim(); ++a)
    for (std::size_t b = 0; b < dim(); ++b)
      for (std::size_t d = 0; d < dim(); ++d)
        if (m_(a, b, d) != 0) left_[a](ix(d), ix(b)) = to_double(m_(a, b, d));

  if (!defining_.empty()) {
    if (defining_.size() != dim()) throw ValidationError("defining representation needs one matrix per basis element");
    const auto k = defining_.front().rows();
    CMatrix stacked(k * k, n);
    for (std::size_t a = 0; a < dim(); ++a) {
      if (defining_[a].rows() != k || defining_[a].cols() != k) {
        throw ValidationError("defining representation matrices must share one square shape");
      }
      stacked.col(ix(a)) = vec(defining_[a]);
    }
    if (stacked.fullPivLu().rank() != n) throw ValidationError("defining representation is not faithful");
    for (std::size_t a = 0; a < dim(); ++a) {
      CMatrix star_image = CMatrix::Zero(k, k);
      for (std::size_t d = 0; d < dim(); ++d) star_image += star_c_(ix(d), ix(a)) * defining_[d];
      if (max_abs(star_image - defining_[a].adjoint()) > 1e-12) {
        throw ValidationError("defining representation does not preserve the involution", {{"index", a}});
      }
      for (std::size_t b = 0; b < dim(); ++b) {
        CMatrix prod = CMatrix::Zero(k, k);
        for (std::size_t d = 0; d < dim(); ++d) prod += left_[a](ix(d), ix(b)) * defining_[d];
        if (max_abs(prod - defining_[a] * defining_[b]) > 1e-12) {
          throw ValidationError("defining representation is not multiplicative", {{"indices", {a, b}}});
        }
      }
    }
  }
}

std::optional<std::size_t> StarAlgebra::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i] == label) return i;
  return std::nullopt;
}

CVector StarAlgebra::unit_vector() const {
  CVector u(ix(dim()));
  for (std::size_t a = 0; a < dim(); ++a) u(ix(a)) = to_double(unit_[a]);
  return u;
}

CVector StarAlgebra::basis_vector(std::size_t a) const {
  CVector e = CVector::Zero(ix(dim()));
  e(ix(a)) = 1.0;
  return e;
}

CVector StarAlgebra::multiply(const CVector& x, const CVector& y) const {
  CVector out = CVector::Zero(ix(dim()));
  for (std::size_t a = 0; a < dim(); ++a)
    if (x(ix(a)) != Complex(0)) out += x(ix(a)) * (left_[a] * y);
  return out;
}

CVector StarAlgebra::star(const CVector& x) const { return star_c_ * x.conjugate(); }

CVector StarAlgebra::coordinates(const CMatrix& m) const {
  if (defining_.empty()) throw ValidationError("algebra '" + name_ + "' has no defining representation");
  CVector c = complex_coordinates(defining_, m);
  CMatrix back = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t a = 0; a < dim(); ++a) back += c(ix(a)) * defining_[a];
  if (max_abs(back - m) > 1e-10) throw ValidationError("matrix is not in the image of the defining representation");
  return c;
}

StarAlgebra matrix_algebra(std::size_t n) {
  const std::size_t d = n * n;
  StructureTensor m(d);
  RationalMatrix star(d, d);
  std::vector<Rational> unit(d);
  std::vector<std::string> labels;
  std::vector<CMatrix> rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      star(j * n + i, i * n + j) = 1;
      if (i == j) unit[i * n + j] = 1;
      CMatrix e = CMatrix::Zero(ix(n), ix(n));
      e(ix(i), ix(j)) = 1.0;
      rep.push_back(e);
      for (std::size_t l = 0; l < n; ++l) m(i * n + j, j * n + l, i * n + l) = 1;
    }
  return StarAlgebra("m" + std::to_string(n), std::move(labels), std::move(m), std::move(star), std::move(unit),
                     std::move(rep));
}

StarAlgebra commutative_algebra(std::size_t n) {
  StructureTensor m(n);
  std::vector<std::string> labels;
  std::vector<CMatrix> rep;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i, i) = 1;
    labels.push_back("p" + std::to_string(i + 1));
    CMatrix p = CMatrix::Zero(ix(n), ix(n));
    p(ix(i), ix(i)) = 1.0;
    rep.push_back(p);
  }
  return StarAlgebra("c" + std::to_string(n), std::move(labels), std::move(m), RationalMatrix::identity(n),
                     std::vector<Rational>(n, Rational(1)), std::move(rep));
}

StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b, std::string name) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na + nb;
  StructureTensor m(n);
  RationalMatrix star(n, n);
  std::vector<Rational> unit(n);
  std::vector<std::string> labels = a.basis_labels();
  for (const auto& l : b.basis_labels()) labels.push_back(a.index_of(l) ? "b." + l : l);
  for (std::size_t x = 0; x < na; ++x) {
    unit[x] = a.unit()[x];
    for (std::size_t y = 0; y < na; ++y) {
      star(x, y) = a.star_matrix()(x, y);
      for (std::size_t z = 0; z < na; ++z) m(x, y, z) = a.product_constants()(x, y, z);
    }
  }
  for (std::size_t x = 0; x < nb; ++x) {
    unit[na + x] = b.unit()[x];
    for (std::size_t y = 0; y < nb; ++y) {
      star(na + x, na + y) = b.star_matrix()(x, y);
      for (std::size_t z = 0; z < nb; ++z) m(na + x, na + y, na + z) = b.product_constants()(x, y, z);
    }
  }
  std::vector<CMatrix> rep;
  if (a.has_defining_rep() && b.has_defining_rep()) {
    const auto ka = a.defining_rep().front().rows(), kb = b.defining_rep().front().rows();
    for (std::size_t x = 0; x < n; ++x) {
      CMatrix block = CMatrix::Zero(ka + kb, ka + kb);
      if (x < na)
        block.topLeftCorner(ka, ka) = a.defining_rep()[x];
      else
        block.bottomRightCorner(kb, kb) = b.defining_rep()[x - na];
      rep.push_back(std::move(block));
    }
  }
  if (name.empty()) name = a.name() + b.name();
  return StarAlgebra(std::move(name), std::move(labels), std::move(m), std::move(star), std::move(unit),
                     std::move(rep));
}

StarAlgebra catalog_star_algebra(std::string_view name) {
  if (name == "c2") return commutative_algebra(2);
  if (name == "c3") return commutative_algebra(3);
  if (name == "m2") return matrix_algebra(2);
  if (name == "m2m1") return direct_sum(matrix_algebra(2), matrix_algebra(1), "m2m1");
  throw ValidationError("unknown catalog *-algebra '" + std::string(name) + "'",
                        {{"known", catalog_star_algebra_names()}});
}

std::vector<std::string> catalog_star_algebra_names() { return {"c2", "c3", "m2", "m2m1"}; }

CMatrix gram_matrix(const StarAlgebra& algebra, const State& f) {
  const auto n = ix(algebra.dim());
  if (f.values.size() != n) throw ValidationError("state has wrong length");
  CMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    CVector sa = algebra.star(algebra.basis_vector(static_cast<std::size_t>(a)));
    for (Eigen::Index b = 0; b < n; ++b) g(a, b) = f(algebra.multiply(sa, algebra.basis_vector(static_cast<std::size_t>(b))));
  }
  return g;
}

ValidationReport validate_state(const StarAlgebra& algebra, const State& f, double tol) {
  ValidationReport report;
  if (f.values.size() != ix(algebra.dim())) {
    report.add("shape", {f.values.size()}, "state length differs from algebra dimension");
    return report;
  }
  const Complex norm = f(algebra.unit_vector());
  if (std::abs(norm - Complex(1)) > tol) report.add("normalisation", {}, "f(1) != 1");
  CMatrix g = gram_matrix(algebra, f);
  if (max_abs(g - g.adjoint()) > tol) report.add("hermitian", {}, "Gram matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    report.add("positivity", {}, "Gram matrix min eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  return report;
}

namespace {

const std::vector<CMatrix>& require_defining(const StarAlgebra& algebra) {
  if (!algebra.has_defining_rep()) {
    throw ValidationError("algebra '" + algebra.name() + "' has no defining representation");
  }
  return algebra.defining_rep();
}

}  // namespace

State state_from_density(const StarAlgebra& algebra, const CMatrix& rho) {
  const auto& rep = require_defining(algebra);
  CVector values(ix(algebra.dim()));
  for (std::size_t a = 0; a < algebra.dim(); ++a) values(ix(a)) = (rho * rep[a]).trace();
  return {values};
}

State catalog_state(const StarAlgebra& algebra, std::string_view name) {
  const auto& rep = require_defining(algebra);
  const auto k = rep.front().rows();
  if (name == "trace" || name == "uniform") {
    return state_from_density(algebra, CMatrix::Identity(k, k) / static_cast<double>(k));
  }
  for (std::string_view prefix : {"ev", "vec"}) {
    if (name.substr(0, prefix.size()) == prefix && name.size() > prefix.size()) {
      auto digits = name.substr(prefix.size());
      if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        break;
      }
      const auto slot = std::stol(std::string(digits));
      if (slot < 1 || slot > k) throw ValidationError("vector state index out of range: " + std::string(name));
      CMatrix rho = CMatrix::Zero(k, k);
      rho(slot - 1, slot - 1) = 1.0;
      return state_from_density(algebra, rho);
    }
  }
  throw ValidationError("unknown catalog state '" + std::string(name) + "'",
                        {{"known", {"trace", "uniform", "evK", "vecK"}}});
}

CMatrix GNSRep::image(const CVector& x) const {
  CMatrix out = CMatrix::Zero(ix(carrier_dim), ix(carrier_dim));
  for (std::size_t a = 0; a < ops.size(); ++a) out += x(ix(a)) * ops[a];
  return out;
}

GNSRep gns_construct(const StarAlgebra& algebra, const State& f, double tol, double null_rel) {
  throw_if_invalid(validate_state(algebra, f, tol), "not a state");
  CMatrix g = gram_matrix(algebra, f);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()));
  const auto& lambda = es.eigenvalues();
  const double lmax = lambda.maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = lambda.size() - 1; i >= 0; --i)
    if (lambda(i) > null_rel * lmax) kept.push_back(i);

  GNSRep rep;
  rep.carrier_dim = kept.size();
  const auto k = ix(rep.carrier_dim);
  const auto n = ix(algebra.dim());
  rep.quotient.resize(k, n);
  rep.lift.resize(n, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const double s = std::sqrt(lambda(kept[static_cast<std::size_t>(r)]));
    const CVector v = es.eigenvectors().col(kept[static_cast<std::size_t>(r)]);
    rep.quotient.row(r) = s * v.adjoint();
    rep.lift.col(r) = v / s;
  }
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    rep.ops.push_back(rep.quotient * algebra.left_multiplication(a) * rep.lift);
  }
  rep.theta = rep.quotient * algebra.unit_vector();
  return rep;
}

ValidationReport check_gns(const StarAlgebra& algebra, const State& f, const GNSRep& rep, double tol) {
  ValidationReport report;
  const std::size_t n = algebra.dim();
  const auto k = ix(rep.carrier_dim);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      CMatrix expected = rep.image(algebra.multiply(algebra.basis_vector(a), algebra.basis_vector(b)));
      if (max_abs(rep.ops[a] * rep.ops[b] - expected) > tol) report.add("product", {as_index(a), as_index(b)});
    }
    if (max_abs(rep.image(algebra.star(algebra.basis_vector(a))) - rep.ops[a].adjoint()) > tol) {
      report.add("involution", {as_index(a)});
    }
    const Complex value = rep.theta.dot(rep.ops[a] * rep.theta);  // dot conjugates the left operand
    if (std::abs(value - f.values(ix(a))) > tol) report.add("gns-identity", {as_index(a)});
  }
  if (max_abs(rep.image(algebra.unit_vector()) - CMatrix::Identity(k, k)) > tol) report.add("unit", {});
  CMatrix orbit(k, ix(n));
  for (std::size_t a = 0; a < n; ++a) orbit.col(ix(a)) = rep.ops[a] * rep.theta;
  if (k > 0) {
    Eigen::JacobiSVD<CMatrix> svd(orbit);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
    if (r != k) report.add("cyclicity", {r, k}, "pi(A) theta does not span the carrier");
  }
  return report;
}

ValidationReport validate_automorphism(const StarAlgebra& algebra, const Automorphism& rho, double tol) {
  ValidationReport report;
  const auto n = ix(algebra.dim());
  if (rho.map.rows() != n || rho.map.cols() != n) {
    report.add("shape", {}, "automorphism must be a dim x dim matrix");
    return report;
  }
  if (rho.map.fullPivLu().rank() != n) report.add("invertible", {}, "map is singular");
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    const CVector ra = rho.map.col(ix(a));
    for (std::size_t b = 0; b < algebra.dim(); ++b) {
      CVector lhs = rho.map * algebra.multiply(algebra.basis_vector(a), algebra.basis_vector(b));
      CVector rhs = algebra.multiply(ra, rho.map.col(ix(b)));
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) report.add("product", {as_index(a), as_index(b)});
    }
    CVector lhs = rho.map * algebra.star(algebra.basis_vector(a));
    if ((lhs - algebra.star(ra)).cwiseAbs().maxCoeff() > tol) report.add("involution", {as_index(a)});
  }
  if ((rho.map * algebra.unit_vector() - algebra.unit_vector()).cwiseAbs().maxCoeff() > tol) report.add("unit", {});
  return report;
}

ValidationReport validate_derivation(const StarAlgebra& algebra, const Derivation& delta, double tol) {
  ValidationReport report;
  const auto n = ix(algebra.dim());
  if (delta.map.rows() != n || delta.map.cols() != n) {
    report.add("shape", {}, "derivation must be a dim x dim matrix");
    return report;
  }
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    const CVector ea = algebra.basis_vector(a);
    const CVector da = delta.map.col(ix(a));
    for (std::size_t b = 0; b < algebra.dim(); ++b) {
      const CVector eb = algebra.basis_vector(b);
      CVector lhs = delta.map * algebra.multiply(ea, eb);
      CVector rhs = algebra.multiply(da, eb) + algebra.multiply(ea, delta.map.col(ix(b)));
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) report.add("leibniz", {as_index(a), as_index(b)});
    }
    CVector lhs = delta.map * algebra.star(ea);
    if ((lhs - algebra.star(da)).cwiseAbs().maxCoeff() > tol) report.add("involution", {as_index(a)});
  }
  return report;
}

Automorphism automorphism_from_unitary(const StarAlgebra& algebra, const CMatrix& u) {
  const auto& rep = require_defining(algebra);
  const auto n = ix(algebra.dim());
  CMatrix map(n, n);
  for (std::size_t a = 0; a < algebra.dim(); ++a) map.col(ix(a)) = algebra.coordinates(u * rep[a] * u.adjoint());
  return {map};
}

Derivation inner_derivation(const StarAlgebra& algebra, const CMatrix& h) {
  const auto& rep = require_defining(algebra);
  const auto n = ix(algebra.dim());
  const Complex i(0, 1);
  CMatrix map(n, n);
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    map.col(ix(a)) = algebra.coordinates(i * (h * rep[a] - rep[a] * h));
  }
  return {map};
}

Automorphism catalog_automorphism(const StarAlgebra& algebra, std::string_view name) {
  const auto n = ix(algebra.dim());
  if (name == "identity") return {CMatrix::Identity(n, n)};
  const auto k = require_defining(algebra).front().rows();
  CMatrix u = CMatrix::Identity(k, k);
  if (name == "swap") {
    u.setZero();
    for (Eigen::Index i = 0; i < k; ++i) u((i + 1) % k, i) = 1.0;
  } else if (name == "conj-diag") {
    if (k < 2) throw ValidationError("conj-diag needs a defining space of dimension >= 2");
    u(1, 1) = Complex(0, 1);
  } else if (name == "conj-x") {
    if (k < 2) throw ValidationError("conj-x needs a defining space of dimension >= 2");
    u.topLeftCorner(2, 2) << 0, 1, 1, 0;
  } else {
    throw ValidationError("unknown catalog automorphism '" + std::string(name) + "'",
                          {{"known", {"identity", "swap", "conj-diag", "conj-x"}}});
  }
  auto rho = automorphism_from_unitary(algebra, u);
  throw_if_invalid(validate_automorphism(algebra, rho), "'" + std::string(name) + "' is not an automorphism here");
  return rho;
}

Derivation catalog_derivation(const StarAlgebra& algebra, std::string_view name) {
  const auto n = ix(algebra.dim());
  if (name == "zero") return {CMatrix::Zero(n, n)};
  if (name == "inner-z") {
    const auto k = require_defining(algebra).front().rows();
    if (k < 2) throw ValidationError("inner-z needs a defining space of dimension >= 2");
    CMatrix h = CMatrix::Zero(k, k);
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    return inner_derivation(algebra, h);
  }
  throw ValidationError("unknown catalog derivation '" + std::string(name) + "'", {{"known", {"zero", "inner-z"}}});
}

State pullback_state(const StarAlgebra& algebra, const State& f, const Automorphism& rho) {
  throw_if_invalid(validate_automorphism(algebra, rho), "invalid automorphism");
  State out{rho.map.transpose() * f.values};
  throw_if_invalid(validate_state(algebra, out), "pullback lost positivity");
  return out;
}

std::pair<double, std::size_t> stationarity_defect(const StarAlgebra& algebra, const State& f,
                                                   const Automorphism& rho) {
  CVector diff = rho.map.transpose() * f.values - f.values;
  double worst = 0.0;
  std::size_t where = 0;
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    if (std::abs(diff(ix(a))) > worst) {
      worst = std::abs(diff(ix(a)));
      where = a;
    }
  }
  return {worst, where};
}

CMatrix stationary_unitary(const StarAlgebra& algebra, const State& f, const Automorphism& rho, double tol) {
  throw_if_invalid(validate_automorphism(algebra, rho), "invalid automorphism");
  auto [defect, where] = stationarity_defect(algebra, f, rho);
  if (defect >= tol) {
    throw PreconditionError("state is not stationary under the automorphism",
                            {{"basis_index", where}, {"basis_label", algebra.basis_labels()[where]}, {"defect", defect}});
  }
  auto rep = gns_construct(algebra, f, tol);
  return rep.quotient * rho.map * rep.lift;
}

HamiltonianResult derivation_hamiltonian(const StarAlgebra& algebra, std::span<const CMatrix> rep,
                                         const Derivation& delta, double tol) {
  throw_if_invalid(validate_derivation(algebra, delta), "not a *-derivation");
  if (rep.size() != algebra.dim()) throw ValidationError("representation needs one operator per basis element");
  const auto k = rep.front().rows();
  const Complex i(0, 1);
  const double r2 = std::sqrt(0.5);

  std::vector<CMatrix> herm;  // orthonormal real basis of Hermitian k x k matrices
  for (Eigen::Index p = 0; p < k; ++p) {
    CMatrix e = CMatrix::Zero(k, k);
    e(p, p) = 1.0;
    herm.push_back(e);
    for (Eigen::Index q = p + 1; q < k; ++q) {
      CMatrix s = CMatrix::Zero(k, k), t = CMatrix::Zero(k, k);
      s(p, q) = s(q, p) = r2;
      t(p, q) = i * r2;
      t(q, p) = -i * r2;
      herm.push_back(s);
      herm.push_back(t);
    }
  }

  std::vector<CMatrix> images(algebra.dim());
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    images[a] = CMatrix::Zero(k, k);
    for (std::size_t d = 0; d < algebra.dim(); ++d) images[a] += delta.map(ix(d), ix(a)) * rep[d];
  }

  const auto block = 2 * k * k;
  Eigen::MatrixXd system(block * ix(algebra.dim()), ix(herm.size()));
  Eigen::VectorXd rhs(block * ix(algebra.dim()));
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    CVector target = vec(i * images[a]);  // [H, pi(x_a)] = i pi(delta(x_a))
    rhs.segment(ix(a) * block, block) << target.real(), target.imag();
    for (std::size_t p = 0; p < herm.size(); ++p) {
      CVector col = vec(herm[p] * rep[a] - rep[a] * herm[p]);
      system.block(ix(a) * block, ix(p), block, 1) << col.real(), col.imag();
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  Eigen::VectorXd h = svd.solve(rhs);

  HamiltonianResult out{CMatrix::Zero(k, k), 0.0};
  for (std::size_t p = 0; p < herm.size(); ++p) out.H += h(ix(p)) * herm[p];
  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    out.residual = std::max(out.residual, (images[a] + i * (out.H * rep[a] - rep[a] * out.H)).norm());
  }
  if (out.residual >= tol) {
    throw PreconditionError("derivation has no bounded generator in this representation",
                            {{"residual", out.residual}, {"tol", tol}});
  }
  return out;
}

EvolveReport evolve_check(std::span<const CMatrix> rep, const CMatrix& H, const Derivation& delta,
                          std::span<const double> times) {
  EvolveReport report;
  const Complex i(0, 1);
  for (double t : times) {
    const CMatrix u = expm(-i * t * H);
    const CMatrix flow = expm(t * delta.map);
    double dev = 0.0;
    for (std::size_t a = 0; a < rep.size(); ++a) {
      CMatrix rhs = CMatrix::Zero(H.rows(), H.cols());
      for (std::size_t d = 0; d < rep.size(); ++d) rhs += flow(ix(d), ix(a)) * rep[d];
      dev = std::max(dev, max_abs(u * rep[a] * u.adjoint() - rhs));
    }
    report.times.push_back(t);
    report.deviations.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

}  // namespace ssb
