#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ssbkit/symmetry.hpp"

using namespace ssb;

namespace {

// Angles of k scaled to integers mod m.
std::vector<std::vector<int>> scaled_angles(const Multiplier& k, int m) {
  const std::size_t n = k.order();
  std::vector<std::vector<int>> out(n, std::vector<int>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      Rational s = k.angle(g, h) * m;
      EXPECT_EQ(boost::multiprecision::denominator(s), 1);
      out[g][h] = static_cast<int>(boost::multiprecision::numerator(s));
    }
  return out;
}

std::vector<Rational> random_cochain(const FiniteGroup& g, int den, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(0, den - 1);
  std::vector<Rational> b(g.order());
  for (std::size_t x = 0; x < g.order(); ++x) b[x] = x == g.identity() ? Rational(0) : Rational(num(rng), den);
  return b;
}

Multiplier add(const Multiplier& a, const Multiplier& b) {
  std::vector<Rational> angles;
  for (std::size_t g = 0; g < a.order(); ++g)
    for (std::size_t h = 0; h < a.order(); ++h) angles.push_back(a.angle(g, h) + b.angle(g, h));
  return Multiplier::exact(a.order(), angles);
}

bool associative(const CayleyTable& t) {
  const std::size_t n = t.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
  return true;
}

std::vector<CMatrix> hrep_trivial(std::size_t n) { return std::vector<CMatrix>(n, CMatrix::Identity(1, 1)); }

}  // namespace

TEST(Multiplier, ExactAnglesReduceAndCompare) {
  auto k = Multiplier::exact(2, {0, 0, 0, Rational(5, 2)});
  EXPECT_EQ(k.angle(1, 1), Rational(1, 2));
  EXPECT_EQ(k.value(1, 1), Complex(-1.0, 0.0));
  EXPECT_EQ(k.value_group_order(), 2);
  EXPECT_THROW(Multiplier::exact(2, {0, 0}), ValidationError);
  EXPECT_THROW(Multiplier::numeric(1, {Complex(2.0, 0)}), ValidationError);
}

TEST(Multiplier, NumericTablesConvertToRootsOfUnity) {
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  auto k = Multiplier::numeric(2, {1.0, 1.0, 1.0, w});
  EXPECT_FALSE(k.is_exact());
  EXPECT_THROW(k.value_group_order(), CapabilityError);
  auto e = k.to_exact();
  ASSERT_TRUE(e);
  EXPECT_EQ(e->angle(1, 1), Rational(1, 3));
  auto irrational = Multiplier::numeric(2, {1.0, 1.0, 1.0, std::polar(1.0, 1.0)});
  EXPECT_FALSE(irrational.to_exact());
  auto z2 = catalog_group("z2");
  EXPECT_THROW(coboundary_solve(z2, irrational), CapabilityError);
  EXPECT_THROW(central_extension(z2, irrational), CapabilityError);
  EXPECT_TRUE(verify_cocycle(z2, irrational).ok());
}

TEST(Cocycle, PauliMultiplierIsNontrivial) {
  auto v4 = catalog_group("z2xz2");
  auto k = catalog_multiplier(v4, "pauli");
  ASSERT_TRUE(k.is_exact());
  EXPECT_TRUE(verify_cocycle(v4, k).ok());
  EXPECT_EQ(k.value_group_order(), 2);
  EXPECT_FALSE(coboundary_solve(v4, k));

  // Exhaustive oracle over Z_2-valued cochains: all 16 fail.
  std::size_t visited = 0;
  EXPECT_FALSE(oracle::exhaustive_coboundary(v4.table(), scaled_angles(k, 2), 2, &visited));
  EXPECT_EQ(visited, 16u);
  // Over the full lattice (1/(N|G|))Z as well.
  EXPECT_FALSE(oracle::exhaustive_coboundary(v4.table(), scaled_angles(k, 8), 8));
  // Commutator phase k(g,h)/k(h,g) is a coboundary invariant on abelian groups.
  // Angles live in [0, 1), so the difference is +-1/2.
  EXPECT_EQ(abs(k.angle(1, 2) - k.angle(2, 1)), Rational(1, 2));
}

TEST(Cocycle, TrivialAndCoboundaryMultipliers) {
  auto s3 = catalog_group("s3");
  EXPECT_TRUE(verify_cocycle(s3, Multiplier::trivial(6)).ok());
  auto b = coboundary_solve(s3, Multiplier::trivial(6));
  ASSERT_TRUE(b);
  EXPECT_TRUE(coboundary_of(s3, *b) == Multiplier::trivial(6));
}

TEST(Cocycle, CoboundaryRoundTripOnSmallGroups) {
  std::mt19937 rng(99);
  std::vector<FiniteGroup> groups{catalog_group("z2"), catalog_group("z3"), catalog_group("z4"),
                                  catalog_group("z2xz2"), catalog_group("s3"), catalog_group("z8"),
                                  direct_product(cyclic_group(2), cyclic_group(4))};
  for (const auto& g : groups) {
    for (int t = 0; t < 10; ++t) {
      const int den = 2 + t % 5;
      auto k = coboundary_of(g, random_cochain(g, den, rng));
      EXPECT_TRUE(verify_cocycle(g, k).ok());
      auto b = coboundary_solve(g, k);
      ASSERT_TRUE(b) << g.name();
      EXPECT_TRUE(coboundary_of(g, *b) == k);
      if (g.order() <= 4) {
        const int m = static_cast<int>(k.value_group_order()) * static_cast<int>(g.order());
        EXPECT_TRUE(oracle::exhaustive_coboundary(g.table(), scaled_angles(k, m), m));
      }
    }
  }
}

TEST(Cocycle, TwistedPauliClassesStayNontrivial) {
  std::mt19937 rng(5);
  auto v4 = catalog_group("z2xz2");
  auto pauli = catalog_multiplier(v4, "pauli");
  for (int t = 0; t < 10; ++t) {
    auto k = add(pauli, coboundary_of(v4, random_cochain(v4, 2, rng)));
    EXPECT_TRUE(verify_cocycle(v4, k).ok());
    EXPECT_FALSE(coboundary_solve(v4, k));
    const int m = static_cast<int>(k.value_group_order()) * 4;
    EXPECT_FALSE(oracle::exhaustive_coboundary(v4.table(), scaled_angles(k, m), m));
  }
}

TEST(Cocycle, ViolationsAreListed) {
  auto z2 = catalog_group("z2");
  auto unnormalised = Multiplier::exact(2, {Rational(1, 2), 0, 0, 0});
  auto r = verify_cocycle(z2, unnormalised);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().rule, "normalization");
  EXPECT_THROW(coboundary_solve(z2, unnormalised), ValidationError);
  EXPECT_THROW(central_extension(z2, unnormalised), ValidationError);
  EXPECT_EQ(verify_cocycle(z2, Multiplier::trivial(3)).violations.front().rule, "shape");
  auto z3 = catalog_group("z3");
  auto broken = Multiplier::exact(3, {0, 0, 0, 0, Rational(1, 3), 0, 0, 0, 0});
  EXPECT_FALSE(verify_cocycle(z3, broken).ok());
}

TEST(Cocycle, AgreesWithExtensionAssociativity) {
  std::mt19937 rng(2718);
  std::vector<FiniteGroup> groups{catalog_group("z2xz2"), catalog_group("z3"), catalog_group("s3"),
                                  catalog_group("z4")};
  std::uniform_int_distribution<int> coin(0, 1);
  int valid = 0, invalid = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& g = groups[static_cast<std::size_t>(t) % groups.size()];
    const int den = 2 + t % 3;
    auto k = coboundary_of(g, random_cochain(g, den, rng));
    if (g.name() == "z2xz2" && coin(rng)) {
      k = add(k, catalog_multiplier(g, "pauli"));
    }
    if (coin(rng)) {
      // Perturb one entry away from the identity row and column.
      std::vector<Rational> angles;
      for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < g.order(); ++b) angles.push_back(k.angle(a, b));
      std::uniform_int_distribution<std::size_t> pick(1, g.order() - 1);
      const std::size_t a = pick(rng), b = pick(rng);
      angles[a * g.order() + b] += Rational(1, den);
      k = Multiplier::exact(g.order(), angles);
    }
    const bool cocycle = verify_cocycle(g, k).ok();
    EXPECT_EQ(cocycle, associative(extension_table(g, k))) << "trial " << t;
    (cocycle ? valid : invalid)++;
  }
  EXPECT_GT(valid, 50);
  EXPECT_GT(invalid, 50);
}

TEST(Extension, PauliGivesNonabelianOrderEight) {
  auto v4 = catalog_group("z2xz2");
  auto ext = central_extension(v4, catalog_multiplier(v4, "pauli"));
  EXPECT_EQ(ext.group.order(), 8u);
  EXPECT_EQ(ext.fiber_order, 2u);
  EXPECT_FALSE(ext.group.is_abelian());
  EXPECT_EQ(ext.group.center(), (std::vector<std::size_t>{0, 4}));
  // The fiber is central and the projection to the base is a homomorphism.
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) EXPECT_EQ(ext.group.mul(x, y) % 4, v4.mul(x % 4, y % 4));
  auto split = central_extension(v4, Multiplier::trivial(4));
  EXPECT_EQ(split.group.order(), 4u);
  EXPECT_TRUE(split.group.is_abelian());
}

TEST(Family, MultiplierFromPauliMatrices) {
  auto v4 = catalog_group("z2xz2");
  auto family = catalog_family(v4, "pauli");
  auto k = multiplier_from_family(v4, family);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h)
      EXPECT_LT((family[g] * family[h] - k.value(g, h) * family[v4.mul(g, h)]).cwiseAbs().maxCoeff(), 1e-14);
  auto bad = family;
  bad[1] = 2.0 * bad[1];
  EXPECT_THROW(multiplier_from_family(v4, bad), ValidationError);
  auto not_projective = family;
  not_projective[3] = family[1];
  EXPECT_THROW(multiplier_from_family(v4, not_projective), ValidationError);
  EXPECT_THROW(catalog_family(catalog_group("z4"), "pauli"), ValidationError);
}

TEST(Induced, S3FromTranspositionSubgroup) {
  auto s3 = catalog_group("s3");
  auto h = catalog_subgroup("s3");
  auto ind = induced_action(s3, h, canonical_section(s3, h), hrep_trivial(2));
  auto chi = class_character(s3, ind.matrices);
  ASSERT_EQ(chi.size(), 3u);
  EXPECT_NEAR(std::abs(chi[0] - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(chi[1] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(chi[2]), 0.0, 1e-12);
  auto frob = oracle::induced_character(s3.table(), h, [](std::size_t) { return Complex(1.0); });
  auto direct = character(ind.matrices);
  for (std::size_t g = 0; g < 6; ++g) EXPECT_NEAR(std::abs(direct[g] - frob[g]), 0.0, 1e-12);
}

TEST(Induced, Z4FromSignOfZ2) {
  auto z4 = catalog_group("z4");
  std::vector<std::size_t> h{0, 2};
  std::vector<CMatrix> sign{CMatrix::Identity(1, 1), -CMatrix::Identity(1, 1)};
  auto ind = induced_action(z4, h, canonical_section(z4, h), sign);
  auto chi = character(ind.matrices);
  const std::vector<Complex> expected{2.0, 0.0, -2.0, 0.0};
  for (std::size_t g = 0; g < 4; ++g) EXPECT_NEAR(std::abs(chi[g] - expected[g]), 0.0, 1e-12);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t k = 0; k < 4; ++k)
      EXPECT_EQ((ind.matrices[g] * ind.matrices[k] - ind.matrices[z4.mul(g, k)]).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Induced, HomomorphismAndFrobeniusOnRandomCases) {
  // One-dimensional characters of cyclic subgroups of S3 x Z2 and Z6.
  std::vector<FiniteGroup> groups{direct_product(symmetric_group_3(), cyclic_group(2)), cyclic_group(6)};
  for (const auto& g : groups) {
    for (std::size_t x = 0; x < g.order(); ++x) {
      std::vector<std::size_t> h{g.identity()};
      for (std::size_t y = x; y != g.identity(); y = g.mul(y, x)) h.push_back(y);
      const std::size_t m = h.size();
      // chi(x^j) = exp(2 pi i j / m), listed in subgroup order h[j] = x^j.
      std::vector<CMatrix> rep;
      for (std::size_t j = 0; j < m; ++j)
        rep.push_back(CMatrix::Constant(1, 1, std::polar(1.0, 2 * std::numbers::pi * double(j) / double(m))));
      auto ind = induced_action(g, h, canonical_section(g, h), rep);
      auto chi_of = [&](std::size_t y) {
        auto it = std::find(h.begin(), h.end(), y);
        return rep[static_cast<std::size_t>(it - h.begin())](0, 0);
      };
      auto frob = oracle::induced_character(g.table(), h, chi_of);
      auto direct = character(ind.matrices);
      for (std::size_t y = 0; y < g.order(); ++y) EXPECT_NEAR(std::abs(direct[y] - frob[y]), 0.0, 1e-10);
    }
  }
}

TEST(Induced, SectionChoiceGivesEquivalentRepresentations) {
  auto s3 = catalog_group("s3");
  auto h = catalog_subgroup("s3");
  std::vector<CMatrix> sign{CMatrix::Identity(1, 1), -CMatrix::Identity(1, 1)};
  auto a = induced_action(s3, h, canonical_section(s3, h), sign);
  auto b = induced_action(s3, h, SectionChoice{{0, 4, 5}}, sign);
  EXPECT_GT((a.matrices[2] - b.matrices[2]).cwiseAbs().maxCoeff(), 0.5);
  auto u = implementing_unitary(a.matrices, b.matrices);
  ASSERT_TRUE(u);
  for (std::size_t g = 0; g < 6; ++g) EXPECT_LT((*u * a.matrices[g] - b.matrices[g] * *u).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(induced_action(s3, h, SectionChoice{{0, 2, 4}}, sign), ValidationError);
  std::vector<CMatrix> not_hom{CMatrix::Identity(1, 1), 2.0 * CMatrix::Identity(1, 1)};
  EXPECT_THROW(induced_action(s3, h, canonical_section(s3, h), not_hom), ValidationError);
}

TEST(Intertwiner, IdenticalRepresentationsGiveIdentity) {
  auto m2 = catalog_star_algebra("m2");
  auto rep = gns_construct(m2, catalog_state(m2, "trace"));
  auto u = implementing_unitary(rep.ops, rep.ops);
  ASSERT_TRUE(u);
  EXPECT_LT((*u - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Intertwiner, InnerAutomorphismIsImplementedByItsUnitary) {
  auto m2 = catalog_star_algebra("m2");
  std::mt19937 rng(8);
  for (int t = 0; t < 10; ++t) {
    CMatrix v = oracle::random_unitary(2, rng);
    auto rho = automorphism_from_unitary(m2, v);
    std::vector<CMatrix> pi1 = m2.defining_rep(), pi2;
    for (std::size_t a = 0; a < 4; ++a) {
      CMatrix img = CMatrix::Zero(2, 2);
      for (std::size_t d = 0; d < 4; ++d) img += rho.map(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(a)) * pi1[d];
      pi2.push_back(img);
    }
    auto u = implementing_unitary(pi1, pi2);
    ASSERT_TRUE(u);
    EXPECT_NEAR(std::abs((u->adjoint() * v).trace()), 2.0, 1e-10);
  }
}

TEST(Intertwiner, CommutantMakesTheUnitaryNonUnique) {
  auto m2 = catalog_star_algebra("m2");
  auto rep = gns_construct(m2, catalog_state(m2, "trace"));
  auto comm = commutant_basis(rep.ops);
  EXPECT_EQ(comm.size(), 4u);  // two copies of the defining rep: commutant M_2
  std::mt19937 rng(12);
  CMatrix x = CMatrix::Zero(4, 4);
  std::normal_distribution<double> normal;
  for (const auto& c : comm) x += Complex(normal(rng), normal(rng)) * c;
  CMatrix w = unitary_part(x);
  auto rho = catalog_automorphism(m2, "conj-x");
  std::vector<CMatrix> rotated;
  for (std::size_t a = 0; a < 4; ++a) rotated.push_back(rep.image(rho.map.col(static_cast<Eigen::Index>(a))));
  auto u = implementing_unitary(rep.ops, rotated);
  ASSERT_TRUE(u);
  // Both U W and W' U implement rho when W, W' commute with pi resp. pi o rho.
  CMatrix uw = *u * w;
  for (std::size_t a = 0; a < 4; ++a) EXPECT_LT((uw * rep.ops[a] - rotated[a] * uw).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_GT((uw - *u).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Intertwiner, InequivalentRepresentationsGiveNone) {
  std::vector<CMatrix> pi1{CMatrix::Identity(1, 1), CMatrix::Zero(1, 1)};
  std::vector<CMatrix> pi2{CMatrix::Zero(1, 1), CMatrix::Identity(1, 1)};
  EXPECT_FALSE(implementing_unitary(pi1, pi2));
  std::vector<CMatrix> big{CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)};
  EXPECT_FALSE(implementing_unitary(pi1, big));
}

TEST(DetectSSB, EvaluationStateUnderSwapIsBroken) {
  auto c2 = catalog_star_algebra("c2");
  auto v = detect_ssb(c2, catalog_state(c2, "ev1"), catalog_automorphism(c2, "swap"));
  EXPECT_FALSE(v.implementable);
  EXPECT_EQ(v.carrier_dim, 1u);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->label, "p1");
  ASSERT_EQ(v.witness->spectrum.size(), 1u);
  EXPECT_NEAR(std::abs(v.witness->spectrum[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(v.witness->rotated_spectrum[0]), 0.0, 1e-12);
}

TEST(DetectSSB, StationaryStateUsesStationaryUnitary) {
  auto c2 = catalog_star_algebra("c2");
  State f{CVector::Constant(2, 0.5)};
  auto rho = catalog_automorphism(c2, "swap");
  auto v = detect_ssb(c2, f, rho);
  ASSERT_TRUE(v.implementable);
  ASSERT_TRUE(v.unitary);
  EXPECT_LT((*v.unitary - stationary_unitary(c2, f, rho)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_FALSE(v.witness);
}

TEST(DetectSSB, FaithfulStatesImplementInnerAutomorphisms) {
  auto m2 = catalog_star_algebra("m2");
  std::mt19937 rng(41);
  for (int t = 0; t < 10; ++t) {
    State f = state_from_density(m2, oracle::random_density(2, rng));
    auto rho = automorphism_from_unitary(m2, oracle::random_unitary(2, rng));
    auto v = detect_ssb(m2, f, rho);
    EXPECT_TRUE(v.implementable);
    EXPECT_GT(v.stationarity_defect, 1e-6);
    ASSERT_TRUE(v.unitary);
    auto rep = gns_construct(m2, f);
    for (std::size_t a = 0; a < 4; ++a) {
      CMatrix rotated = rep.image(rho.map.col(static_cast<Eigen::Index>(a)));
      EXPECT_LT((*v.unitary * rep.ops[a] - rotated * *v.unitary).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}
