#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "ssbkit/gns.hpp"

using namespace ssb;

namespace {

std::size_t rank_of(const CMatrix& m, double rel = 1e-9) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * std::max(1.0, s(0))) ++r;
  return r;
}

// Carrier dimension predicted from the density alone: on a block algebra
// M_{n_1} + ... the GNS space of tr(rho .) is the sum of n_k * rank(rho_k).
std::size_t predicted_dim(const CMatrix& rho, const std::vector<Eigen::Index>& blocks) {
  std::size_t dim = 0;
  Eigen::Index at = 0;
  for (auto n : blocks) {
    dim += static_cast<std::size_t>(n) * rank_of(rho.block(at, at, n, n));
    at += n;
  }
  return dim;
}

CMatrix block_unitary(std::mt19937& rng) {
  CMatrix u = CMatrix::Zero(3, 3);
  u.topLeftCorner(2, 2) = oracle::random_unitary(2, rng);
  std::uniform_real_distribution<double> phase(0, 6.28);
  u(2, 2) = std::polar(1.0, phase(rng));
  return u;
}

CMatrix random_hermitian(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(StarAlgebra, CatalogAlgebrasSatisfyAxioms) {
  for (const auto& name : catalog_star_algebra_names()) {
    auto a = catalog_star_algebra(name);
    EXPECT_TRUE(check_star_axioms(a.product_constants(), a.star_matrix(), a.unit()).ok()) << name;
  }
  auto m2m1 = catalog_star_algebra("m2m1");
  EXPECT_EQ(m2m1.dim(), 5u);
  EXPECT_EQ(m2m1.basis_labels().back(), "b.e11");
  EXPECT_THROW(catalog_star_algebra("m7"), ValidationError);
}

TEST(StarAlgebra, MatrixUnitsMultiplyLikeMatrices) {
  auto m2 = matrix_algebra(2);
  std::mt19937 rng(1);
  std::normal_distribution<double> normal;
  CVector x(4), y(4);
  for (int i = 0; i < 4; ++i) {
    x(i) = Complex(normal(rng), normal(rng));
    y(i) = Complex(normal(rng), normal(rng));
  }
  auto as_matrix = [](const CVector& v) {
    CMatrix m(2, 2);
    m << v(0), v(1), v(2), v(3);
    return m;
  };
  CMatrix xy = as_matrix(x) * as_matrix(y);
  EXPECT_LT((as_matrix(m2.multiply(x, y)) - xy).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((as_matrix(m2.star(x)) - as_matrix(x).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StarAlgebra, RejectsBrokenInvolution) {
  auto c2 = commutative_algebra(2);
  RationalMatrix bad_star(2, 2);
  bad_star(0, 0) = 2;
  bad_star(1, 1) = 1;
  EXPECT_FALSE(check_star_axioms(c2.product_constants(), bad_star, c2.unit()).ok());
  EXPECT_THROW(StarAlgebra("bad", c2.basis_labels(), c2.product_constants(), bad_star, c2.unit()), ValidationError);
  std::vector<Rational> bad_unit{1, 0};
  EXPECT_FALSE(check_star_axioms(c2.product_constants(), c2.star_matrix(), bad_unit).ok());
}

TEST(States, ValidationCatchesNormalisationAndPositivity) {
  auto c2 = commutative_algebra(2);
  State neg{CVector(2)};
  neg.values << 1.5, -0.5;
  auto r = validate_state(c2, neg);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].rule, "positivity");
  State unnormalised{CVector::Constant(2, 1.0)};
  EXPECT_EQ(validate_state(c2, unnormalised).violations[0].rule, "normalisation");
  EXPECT_THROW(gns_construct(c2, neg), ValidationError);
  EXPECT_THROW(catalog_state(c2, "ev3"), ValidationError);
  EXPECT_THROW(catalog_state(c2, "nope"), ValidationError);
}

TEST(GNS, WorkedExampleCarrierDimensions) {
  auto m2 = catalog_star_algebra("m2");
  auto c2 = catalog_star_algebra("c2");
  EXPECT_EQ(gns_construct(m2, catalog_state(m2, "trace")).carrier_dim, 4u);
  EXPECT_EQ(gns_construct(m2, catalog_state(m2, "ev1")).carrier_dim, 2u);
  auto rep = gns_construct(c2, catalog_state(c2, "ev1"));
  ASSERT_EQ(rep.carrier_dim, 1u);
  EXPECT_NEAR(std::abs(rep.ops[0](0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rep.ops[1](0, 0)), 0.0, 1e-14);
}

TEST(GNS, RandomStatesSatisfyAllInvariants) {
  std::mt19937 rng(2024);
  struct Case {
    const char* name;
    std::vector<Eigen::Index> blocks;
  };
  for (const Case& c : {Case{"m2", {2}}, Case{"c2", {1, 1}}, Case{"m2m1", {2, 1}}}) {
    auto alg = catalog_star_algebra(c.name);
    const auto k = alg.defining_rep().front().rows();
    for (int t = 0; t < 100; ++t) {
      CMatrix rho = oracle::random_density(k, rng, t % 3 != 0);
      State f = state_from_density(alg, rho);
      auto rep = gns_construct(alg, f);
      EXPECT_TRUE(check_gns(alg, f, rep).ok()) << c.name << " trial " << t;
      EXPECT_EQ(rep.carrier_dim, predicted_dim(rho, c.blocks)) << c.name;
      EXPECT_NEAR(rep.theta.norm(), 1.0, 1e-10);
      // GNS identity evaluated directly on a random element.
      CVector x = CVector::Random(static_cast<Eigen::Index>(alg.dim()));
      CMatrix px = CMatrix::Zero(k, k);
      for (std::size_t a = 0; a < alg.dim(); ++a) px += x(static_cast<Eigen::Index>(a)) * alg.defining_rep()[a];
      const Complex direct = (rho * px).trace();
      EXPECT_NEAR(std::abs(rep.theta.dot(rep.image(x) * rep.theta) - direct), 0.0, 1e-10);
    }
  }
}

TEST(Pullback, DocumentedExamples) {
  auto c2 = catalog_star_algebra("c2");
  auto ev1 = catalog_state(c2, "ev1");
  auto ev2 = catalog_state(c2, "ev2");
  auto swapped = pullback_state(c2, ev1, catalog_automorphism(c2, "swap"));
  EXPECT_LT((swapped.values - ev2.values).norm(), 1e-15);
  auto same = pullback_state(c2, ev1, catalog_automorphism(c2, "identity"));
  EXPECT_LT((same.values - ev1.values).norm(), 1e-15);

  auto m2 = catalog_star_algebra("m2");
  std::mt19937 rng(9);
  auto tr = catalog_state(m2, "trace");
  auto rho = automorphism_from_unitary(m2, oracle::random_unitary(2, rng));
  EXPECT_TRUE(validate_automorphism(m2, rho).ok());
  EXPECT_LT((pullback_state(m2, tr, rho).values - tr.values).norm(), 1e-12);
}

TEST(Pullback, CarrierDimensionIsPreserved) {
  std::mt19937 rng(77);
  auto m2 = catalog_star_algebra("m2");
  auto m2m1 = catalog_star_algebra("m2m1");
  for (int t = 0; t < 100; ++t) {
    const bool small = t % 2 == 0;
    const auto& alg = small ? m2 : m2m1;
    CMatrix u = small ? oracle::random_unitary(2, rng) : block_unitary(rng);
    CMatrix d = oracle::random_density(small ? 2 : 3, rng, t % 4 < 2);
    State f = state_from_density(alg, d);
    auto rho = automorphism_from_unitary(alg, u);
    State g = pullback_state(alg, f, rho);
    EXPECT_EQ(gns_construct(alg, f).carrier_dim, gns_construct(alg, g).carrier_dim) << t;
  }
}

TEST(Automorphisms, ValidationCatchesNonMultiplicativeMaps) {
  auto m2 = catalog_star_algebra("m2");
  Automorphism doubled{2.0 * CMatrix::Identity(4, 4)};
  auto r = validate_automorphism(m2, doubled);
  EXPECT_FALSE(r.ok());
  Automorphism singular{CMatrix::Zero(4, 4)};
  EXPECT_FALSE(validate_automorphism(m2, singular).ok());
  for (const auto& name : {"identity", "swap", "conj-diag", "conj-x"})
    EXPECT_TRUE(validate_automorphism(m2, catalog_automorphism(m2, name)).ok()) << name;
  EXPECT_THROW(catalog_automorphism(m2, "flip"), ValidationError);
}

TEST(StationaryUnitary, SwapOnTwoPoints) {
  auto c2 = catalog_star_algebra("c2");
  State f{CVector::Constant(2, 0.5)};
  auto rho = catalog_automorphism(c2, "swap");
  auto rep = gns_construct(c2, f);
  ASSERT_EQ(rep.carrier_dim, 2u);
  CMatrix U = stationary_unitary(c2, f, rho);
  EXPECT_LT((U.adjoint() * U - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((U * rep.theta - rep.theta).norm(), 1e-12);
  for (std::size_t a = 0; a < 2; ++a) {
    CMatrix rotated = rep.image(rho.map.col(static_cast<Eigen::Index>(a)));
    EXPECT_LT((U * rep.ops[a] * U.adjoint() - rotated).cwiseAbs().maxCoeff(), 1e-12);
  }
  // U swaps the two one-dimensional eigenspaces of pi(p1).
  EXPECT_NEAR(std::abs(U.trace()), 0.0, 1e-12);
}

TEST(StationaryUnitary, IsUniqueGivenTheFixedCyclicVector) {
  auto m2 = catalog_star_algebra("m2");
  auto f = catalog_state(m2, "trace");
  auto rho = catalog_automorphism(m2, "conj-diag");
  auto rep = gns_construct(m2, f);
  CMatrix U = stationary_unitary(m2, f, rho);
  ASSERT_EQ(U.rows(), 4);
  // Homogeneous system X pi(a) = pi(rho a) X, X theta = 0 has only X = 0.
  const Eigen::Index k = 4;
  const CMatrix I = CMatrix::Identity(k, k);
  CMatrix system(k * k * 4 + k, k * k);
  for (std::size_t a = 0; a < 4; ++a) {
    CMatrix target = rep.image(rho.map.col(static_cast<Eigen::Index>(a)));
    system.middleRows(static_cast<Eigen::Index>(a) * k * k, k * k) =
        Eigen::kroneckerProduct(rep.ops[a].transpose(), I) - Eigen::kroneckerProduct(I, target);
  }
  system.bottomRows(k) = Eigen::kroneckerProduct(rep.theta.transpose(), I);
  EXPECT_EQ(rank_of(system), static_cast<std::size_t>(k * k));
  CMatrix again = stationary_unitary(m2, f, rho);
  EXPECT_LT((U - again).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(StationaryUnitary, IdentityAutomorphismGivesIdentity) {
  auto m2 = catalog_star_algebra("m2");
  std::mt19937 rng(4);
  State f = state_from_density(m2, oracle::random_density(2, rng));
  CMatrix U = stationary_unitary(m2, f, catalog_automorphism(m2, "identity"));
  EXPECT_LT((U - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(StationaryUnitary, NonStationaryStateNamesTheBasisElement) {
  auto c2 = catalog_star_algebra("c2");
  try {
    stationary_unitary(c2, catalog_state(c2, "ev1"), catalog_automorphism(c2, "swap"));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.details()["basis_label"], "p1");
    EXPECT_NEAR(e.details()["defect"].get<double>(), 1.0, 1e-15);
  }
}

TEST(Hamiltonian, InnerDerivationOnTwoByTwo) {
  auto m2 = catalog_star_algebra("m2");
  auto delta = catalog_derivation(m2, "inner-z");
  EXPECT_TRUE(validate_derivation(m2, delta).ok());
  auto res = derivation_hamiltonian(m2, m2.defining_rep(), delta);
  EXPECT_LT(res.residual, 1e-10);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = -1.0;
  expected(1, 1) = 1.0;
  EXPECT_LT((res.H - expected).cwiseAbs().maxCoeff(), 1e-10);
  std::vector<double> times{0.0, 0.1, 1.0};
  auto ev = evolve_check(m2.defining_rep(), res.H, delta, times);
  EXPECT_EQ(ev.deviations[0], 0.0);
  EXPECT_LT(ev.max_deviation, 1e-9);
}

TEST(Hamiltonian, RandomInnerDerivationsRecoverTracelessGenerator) {
  auto m2 = catalog_star_algebra("m2");
  std::mt19937 rng(61);
  for (int t = 0; t < 20; ++t) {
    CMatrix h = random_hermitian(2, rng);
    auto res = derivation_hamiltonian(m2, m2.defining_rep(), inner_derivation(m2, h));
    CMatrix expected = -(h - 0.5 * h.trace() * CMatrix::Identity(2, 2));
    EXPECT_LT((res.H - expected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Hamiltonian, WorksInReducibleGnsRepresentation) {
  auto m2m1 = catalog_star_algebra("m2m1");
  auto f = catalog_state(m2m1, "trace");
  auto rep = gns_construct(m2m1, f);
  EXPECT_EQ(rep.carrier_dim, 5u);
  auto delta = catalog_derivation(m2m1, "inner-z");
  auto res = derivation_hamiltonian(m2m1, rep.ops, delta);
  EXPECT_LT(res.residual, 1e-10);
  EXPECT_LT((res.H - res.H.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  std::vector<double> times{0.1, 1.0};
  EXPECT_LT(evolve_check(rep.ops, res.H, delta, times).max_deviation, 1e-9);
}

TEST(Hamiltonian, ZeroDerivationGivesZero) {
  auto m2 = catalog_star_algebra("m2");
  auto res = derivation_hamiltonian(m2, m2.defining_rep(), catalog_derivation(m2, "zero"));
  EXPECT_LT(res.H.cwiseAbs().maxCoeff(), 1e-14);
  std::vector<double> times{0.5, 3.0};
  EXPECT_EQ(evolve_check(m2.defining_rep(), res.H, catalog_derivation(m2, "zero"), times).max_deviation, 0.0);
}

TEST(Hamiltonian, CommutativeAlgebraHasNoNonzeroDerivation) {
  auto c2 = catalog_star_algebra("c2");
  Derivation d{CMatrix::Zero(2, 2)};
  d.map(0, 1) = 1.0;
  EXPECT_FALSE(validate_derivation(c2, d).ok());
  EXPECT_THROW(derivation_hamiltonian(c2, c2.defining_rep(), d), ValidationError);
}

TEST(Hamiltonian, InconsistentRepresentationHasNoGenerator) {
  auto m2 = catalog_star_algebra("m2");
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  auto delta = inner_derivation(m2, x);
  auto rep = m2.defining_rep();
  rep[0].setZero();  // pi(e11) = 0 while pi(delta(e11)) is not
  EXPECT_THROW(derivation_hamiltonian(m2, rep, delta), PreconditionError);
}
