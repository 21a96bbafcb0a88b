#include "ssbkit/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

#include "ssbkit/error.hpp"

namespace ssb {

namespace {

std::int64_t as_index(std::size_t i) { return static_cast<std::int64_t>(i); }
Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

Rational fractional_part(const Rational& a) {
  Integer num = boost::multiprecision::numerator(a), den = boost::multiprecision::denominator(a);
  Integer r = num % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

Complex unit_phase(const Rational& angle) {
  const Rational a = fractional_part(angle);
  if (a == 0) return 1.0;
  if (a == Rational(1, 2)) return -1.0;
  if (a == Rational(1, 4)) return Complex(0, 1);
  if (a == Rational(3, 4)) return Complex(0, -1);
  return std::polar(1.0, 2.0 * std::numbers::pi * to_double(a));
}

void require_order(const FiniteGroup& group, const Multiplier& k) {
  if (k.order() != group.order()) {
    throw ValidationError("multiplier table size differs from the group order",
                          {{"group_order", group.order()}, {"multiplier_order", k.order()}});
  }
}

Multiplier require_exact(const Multiplier& k, const char* what) {
  if (k.is_exact()) return k;
  if (auto exact = k.to_exact()) return *exact;
  throw CapabilityError(std::string(what) + " needs multiplier values in a finite cyclic subgroup of U(1)");
}

// Linear algebra over Z / q, q = p^e.
using i64 = std::int64_t;

i64 mulmod(i64 a, i64 b, i64 q) { return static_cast<i64>((static_cast<__int128>(a) * b) % q); }
i64 mod(i64 a, i64 q) { return ((a % q) + q) % q; }

i64 inverse_mod(i64 a, i64 q) {
  i64 r0 = q, r1 = mod(a, q), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i64 t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  return mod(s0, q);
}

int valuation(i64 x, i64 p) {
  int v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Solves A x = b over Z/q by reducing A to diagonal form P A Q = D with
// pivots p^v. Returns one solution or nullopt.
std::optional<std::vector<i64>> solve_prime_power(std::vector<std::vector<i64>> a, std::vector<i64> b, i64 p,
                                                  i64 q) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<std::vector<i64>> cols(n, std::vector<i64>(n, 0));  // Q
  for (std::size_t j = 0; j < n; ++j) cols[j][j] = 1;
  for (auto& row : a)
    for (auto& x : row) x = mod(x, q);
  for (auto& x : b) x = mod(x, q);

  std::vector<i64> pivots;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    int best = 1 << 30;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0) {
          const int v = valuation(a[i][j], p);
          if (v < best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
    if (best == (1 << 30)) break;
    std::swap(a[t], a[bi]);
    std::swap(b[t], b[bi]);
    if (bj != t) {
      for (auto& row : a) std::swap(row[t], row[bj]);
      for (auto& row : cols) std::swap(row[t], row[bj]);
    }
    i64 pv = 1;
    for (int k = 0; k < best; ++k) pv *= p;
    const i64 unit_inv = inverse_mod(a[t][t] / pv, q);
    for (auto& x : a[t]) x = mulmod(x, unit_inv, q);
    b[t] = mulmod(b[t], unit_inv, q);

    for (std::size_t i = 0; i < m; ++i) {
      if (i == t || a[i][t] == 0) continue;
      const i64 factor = a[i][t] / pv;
      for (std::size_t j = t; j < n; ++j) a[i][j] = mod(a[i][j] - mulmod(factor, a[t][j], q), q);
      b[i] = mod(b[i] - mulmod(factor, b[t], q), q);
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (a[t][j] == 0) continue;
      const i64 factor = a[t][j] / pv;
      a[t][j] = 0;
      for (std::size_t r = 0; r < n; ++r) cols[r][j] = mod(cols[r][j] - mulmod(factor, cols[r][t], q), q);
    }
    pivots.push_back(pv);
  }

  std::vector<i64> y(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < pivots.size()) {
      if (b[i] % pivots[i] != 0) return std::nullopt;
      y[i] = b[i] / pivots[i];
    } else if (b[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<i64> x(n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j) x[r] = mod(x[r] + mulmod(cols[r][j], y[j], q), q);
  return x;
}

std::vector<std::pair<i64, i64>> prime_powers(i64 m) {
  std::vector<std::pair<i64, i64>> out;
  for (i64 p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    i64 q = 1;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    out.emplace_back(p, q);
  }
  if (m > 1) out.emplace_back(m, m);
  return out;
}

std::vector<CMatrix> intertwiner_space(std::span<const CMatrix> pi1, std::span<const CMatrix> pi2, double tol) {
  const auto n = pi1.front().rows();
  const auto n2 = n * n;
  CMatrix system(n2 * ix(pi1.size()), n2);
  const CMatrix eye = CMatrix::Identity(n, n);
  for (std::size_t a = 0; a < pi1.size(); ++a) {
    // vec(U A) = (A^T (x) I) vec U and vec(B U) = (I (x) B) vec U
    CMatrix block = CMatrix::Zero(n2, n2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        block.block(i * n, j * n, n, n) += pi1[a](j, i) * eye;
        if (i == j) block.block(i * n, j * n, n, n) -= pi2[a];
      }
    system.middleRows(ix(a) * n2, n2) = block;
  }
  CMatrix basis = null_space(system, tol);
  std::vector<CMatrix> out;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back(unvec(basis.col(c), n, n));
  return out;
}

bool spectra_differ(const std::vector<Complex>& x, const std::vector<Complex>& y, double tol) {
  if (x.size() != y.size()) return true;
  std::vector<bool> used(y.size(), false);
  for (const auto& v : x) {
    bool matched = false;
    for (std::size_t j = 0; j < y.size() && !matched; ++j)
      if (!used[j] && std::abs(v - y[j]) < tol) used[j] = matched = true;
    if (!matched) return true;
  }
  return false;
}

}  // namespace

Multiplier Multiplier::exact(std::size_t order, std::vector<Rational> angles) {
  if (angles.size() != order * order) throw ValidationError("multiplier table must be order x order");
  Multiplier k;
  k.order_ = order;
  k.exact_ = true;
  for (auto& a : angles) {
    a = fractional_part(a);
    k.values_.push_back(unit_phase(a));
  }
  k.angles_ = std::move(angles);
  return k;
}

Multiplier Multiplier::numeric(std::size_t order, std::vector<Complex> values, double tol) {
  if (values.size() != order * order) throw ValidationError("multiplier table must be order x order");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(std::abs(values[i]) - 1.0) > tol) {
      throw ValidationError("multiplier entry is not of unit modulus",
                            {{"indices", {i / order, i % order}}, {"modulus", std::abs(values[i])}});
    }
  Multiplier k;
  k.order_ = order;
  k.values_ = std::move(values);
  return k;
}

Integer Multiplier::value_group_order() const {
  if (!exact_) throw CapabilityError("numeric multiplier has no exact value group");
  Integer n = 1;
  for (const auto& a : angles_) n = boost::multiprecision::lcm(n, boost::multiprecision::denominator(a));
  return n;
}

std::optional<Multiplier> Multiplier::to_exact(long max_denominator, double tol) const {
  if (exact_) return *this;
  std::vector<Rational> angles;
  for (const auto& v : values_) {
    double turn = std::arg(v) / (2.0 * std::numbers::pi);
    if (turn < 0) turn += 1.0;
    std::optional<Rational> found;
    for (long q = 1; q <= max_denominator && !found; ++q) {
      const long p = std::lround(turn * static_cast<double>(q));
      const Rational candidate(p, q);
      if (std::abs(unit_phase(candidate) - v) < tol) found = candidate;
    }
    if (!found) return std::nullopt;
    angles.push_back(*found);
  }
  return exact(order_, std::move(angles));
}

ValidationReport verify_cocycle(const FiniteGroup& group, const Multiplier& k, double tol) {
  ValidationReport report;
  const std::size_t n = group.order();
  if (k.order() != n) {
    report.add("shape", {as_index(k.order()), as_index(n)}, "multiplier table size differs from the group order");
    return report;
  }
  const std::size_t e = group.identity();
  for (std::size_t g = 0; g < n; ++g) {
    const bool ok = k.is_exact() ? k.angle(e, g) == 0 && k.angle(g, e) == 0
                                 : std::abs(k.value(e, g) - 1.0) <= tol && std::abs(k.value(g, e) - 1.0) <= tol;
    if (!ok) report.add("normalization", {as_index(g)});
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t ab = group.mul(a, b), bc = group.mul(b, c);
        bool ok;
        if (k.is_exact()) {
          ok = fractional_part(k.angle(a, bc) + k.angle(b, c) - k.angle(a, b) - k.angle(ab, c)) == 0;
        } else {
          ok = std::abs(k.value(a, bc) * k.value(b, c) - k.value(a, b) * k.value(ab, c)) <= tol;
        }
        if (!ok) report.add("cocycle", {as_index(a), as_index(b), as_index(c)});
      }
  return report;
}

Multiplier coboundary_of(const FiniteGroup& group, const std::vector<Rational>& b) {
  const std::size_t n = group.order();
  if (b.size() != n) throw ValidationError("cochain length differs from the group order");
  std::vector<Rational> angles(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) angles[g * n + h] = b[g] + b[h] - b[group.mul(g, h)];
  return Multiplier::exact(n, std::move(angles));
}

std::optional<std::vector<Rational>> coboundary_solve(const FiniteGroup& group, const Multiplier& k_in) {
  require_order(group, k_in);
  const Multiplier k = require_exact(k_in, "coboundary_solve");
  throw_if_invalid(verify_cocycle(group, k), "not a two-cocycle");
  const std::size_t n = group.order();

  // If k = db then N b is a character, so b takes values in (1/(N|G|)) Z / Z.
  const Integer big_m = k.value_group_order() * n;
  if (big_m > Integer(1) << 40) throw CapabilityError("value group too large for exact coboundary solving");
  const auto modulus = static_cast<i64>(big_m);

  std::vector<std::vector<i64>> a(n * n, std::vector<i64>(n, 0));
  std::vector<i64> rhs(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      auto& row = a[g * n + h];
      row[g] += 1;
      row[h] += 1;
      row[group.mul(g, h)] -= 1;
      const Rational scaled = k.angle(g, h) * Rational(big_m);
      rhs[g * n + h] = static_cast<i64>(boost::multiprecision::numerator(scaled));
    }

  std::vector<i64> x(n, 0);
  i64 combined = 1;
  for (auto [p, q] : prime_powers(modulus)) {
    auto part = solve_prime_power(a, rhs, p, q);
    if (!part) return std::nullopt;
    // CRT: x = x mod combined, part mod q, gcd(combined, q) = 1
    const i64 inv = inverse_mod(combined % q, q);
    for (std::size_t g = 0; g < n; ++g) {
      const i64 t = mulmod(mod((*part)[g] - x[g], q), inv, q);
      x[g] = x[g] + combined * t;
    }
    combined *= q;
  }

  std::vector<Rational> b(n);
  for (std::size_t g = 0; g < n; ++g) b[g] = fractional_part(Rational(x[g], modulus));
  if (!(coboundary_of(group, b) == k)) throw std::logic_error("coboundary_solve produced a wrong cochain");
  return b;
}

CayleyTable extension_table(const FiniteGroup& group, const Multiplier& k_in) {
  require_order(group, k_in);
  const Multiplier k = require_exact(k_in, "central_extension");
  const std::size_t n = group.order();
  const auto fiber = static_cast<std::size_t>(k.value_group_order());
  CayleyTable t(fiber * n, std::vector<std::size_t>(fiber * n));
  for (std::size_t z1 = 0; z1 < fiber; ++z1)
    for (std::size_t g1 = 0; g1 < n; ++g1)
      for (std::size_t z2 = 0; z2 < fiber; ++z2)
        for (std::size_t g2 = 0; g2 < n; ++g2) {
          const auto twist = static_cast<std::size_t>(boost::multiprecision::numerator(Rational(k.angle(g1, g2) * fiber)));
          t[z1 * n + g1][z2 * n + g2] = ((z1 + z2 + twist) % fiber) * n + group.mul(g1, g2);
        }
  return t;
}

CentralExtension central_extension(const FiniteGroup& group, const Multiplier& k_in) {
  require_order(group, k_in);
  const Multiplier k = require_exact(k_in, "central_extension");
  throw_if_invalid(verify_cocycle(group, k), "not a two-cocycle");
  const auto fiber = static_cast<std::size_t>(k.value_group_order());
  std::vector<std::string> labels;
  for (std::size_t z = 0; z < fiber; ++z)
    for (std::size_t g = 0; g < group.order(); ++g) labels.push_back("(" + std::to_string(z) + "," + group.labels()[g] + ")");
  FiniteGroup ext(extension_table(group, k), std::move(labels), group.name() + "~");
  return {std::move(ext), fiber};
}

Multiplier multiplier_from_family(const FiniteGroup& group, std::span<const CMatrix> family, double tol) {
  const std::size_t n = group.order();
  if (family.size() != n) throw ValidationError("need one matrix per group element");
  const auto d = family.front().rows();
  for (std::size_t g = 0; g < n; ++g) {
    if (family[g].rows() != d || family[g].cols() != d) throw ValidationError("family matrices must share one shape");
    if (max_abs(family[g].adjoint() * family[g] - CMatrix::Identity(d, d)) > tol) {
      throw ValidationError("family member is not unitary", {{"element", g}});
    }
  }
  std::vector<Complex> values(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const CMatrix& ugh = family[group.mul(g, h)];
      const CMatrix prod = family[g] * family[h];
      const Complex kv = (ugh.adjoint() * prod).trace() / static_cast<double>(d);
      if (max_abs(prod - kv * ugh) > tol) {
        throw ValidationError("family is not a projective representation", {{"indices", {g, h}}});
      }
      values[g * n + h] = kv / std::abs(kv);
    }
  Multiplier k = Multiplier::numeric(n, std::move(values), tol);
  if (auto exact = k.to_exact()) return *exact;
  return k;
}

std::vector<CMatrix> catalog_family(const FiniteGroup& group, std::string_view name) {
  if (name == "pauli") {
    if (group.table() != catalog_group("z2xz2").table()) throw ValidationError("pauli family needs the z2xz2 group");
    CMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    const CMatrix eye = CMatrix::Identity(2, 2);
    return {eye, x, z, x * z};
  }
  throw ValidationError("unknown catalog family '" + std::string(name) + "'", {{"known", {"pauli"}}});
}

Multiplier catalog_multiplier(const FiniteGroup& group, std::string_view name) {
  if (name == "trivial") return Multiplier::trivial(group.order());
  if (name == "pauli") return multiplier_from_family(group, catalog_family(group, name));
  throw ValidationError("unknown catalog multiplier '" + std::string(name) + "'",
                        {{"known", catalog_multiplier_names()}});
}

std::vector<std::string> catalog_multiplier_names() { return {"trivial", "pauli"}; }

InducedRepresentation induced_action(const FiniteGroup& group, const std::vector<std::size_t>& subgroup,
                                     const SectionChoice& section, std::span<const CMatrix> hrep, double tol) {
  throw_if_invalid(validate_section(group, subgroup, section), "invalid section");
  if (hrep.size() != subgroup.size()) throw ValidationError("need one matrix per subgroup element");
  const auto d = hrep.front().rows();
  std::vector<std::size_t> pos(group.order(), subgroup.size());
  for (std::size_t i = 0; i < subgroup.size(); ++i) pos[subgroup[i]] = i;

  ValidationReport report;
  for (std::size_t i = 0; i < hrep.size(); ++i)
    if (hrep[i].rows() != d || hrep[i].cols() != d) report.add("shape", {as_index(i)});
  throw_if_invalid(report, "subgroup representation");
  for (std::size_t i = 0; i < subgroup.size(); ++i)
    for (std::size_t j = 0; j < subgroup.size(); ++j) {
      const std::size_t ij = pos[group.mul(subgroup[i], subgroup[j])];
      if (max_abs(hrep[i] * hrep[j] - hrep[ij]) > tol) report.add("homomorphism", {as_index(i), as_index(j)});
    }
  throw_if_invalid(report, "subgroup representation is not a homomorphism");

  InducedRepresentation out;
  out.cosets = left_cosets(group, subgroup);
  out.section = section;
  out.block_dim = static_cast<std::size_t>(d);
  const std::size_t m = out.cosets.size();
  for (std::size_t g = 0; g < group.order(); ++g) {
    CMatrix mat = CMatrix::Zero(ix(m) * d, ix(m) * d);
    for (std::size_t sigma = 0; sigma < m; ++sigma) {
      const std::size_t moved = group.mul(g, section.reps[sigma]);
      const std::size_t tau = out.cosets.coset_of[moved];
      const std::size_t h = group.mul(group.inverse(section.reps[tau]), moved);
      if (pos[h] == subgroup.size()) throw std::logic_error("coset cocycle left the subgroup");
      mat.block(ix(tau) * d, ix(sigma) * d, d, d) = hrep[pos[h]];
    }
    out.matrices.push_back(std::move(mat));
  }
  for (std::size_t g = 0; g < group.order(); ++g)
    for (std::size_t h = 0; h < group.order(); ++h)
      if (max_abs(out.matrices[g] * out.matrices[h] - out.matrices[group.mul(g, h)]) > tol) {
        report.add("induced-homomorphism", {as_index(g), as_index(h)});
      }
  throw_if_invalid(report, "induced action is not a representation");
  return out;
}

std::vector<Complex> character(std::span<const CMatrix> rep) {
  std::vector<Complex> out;
  for (const auto& m : rep) out.push_back(m.trace());
  return out;
}

std::vector<Complex> class_character(const FiniteGroup& group, std::span<const CMatrix> rep) {
  if (rep.size() != group.order()) throw ValidationError("need one matrix per group element");
  std::vector<Complex> out;
  for (const auto& cls : group.conjugacy_classes()) out.push_back(rep[cls.front()].trace());
  return out;
}

std::vector<CMatrix> commutant_basis(std::span<const CMatrix> pi, double tol) {
  if (pi.empty()) throw ValidationError("empty representation");
  return intertwiner_space(pi, pi, tol);
}

std::optional<CMatrix> implementing_unitary(std::span<const CMatrix> pi1, std::span<const CMatrix> pi2, double tol) {
  if (pi1.empty() || pi1.size() != pi2.size()) return std::nullopt;
  const auto n = pi1.front().rows();
  for (std::size_t a = 0; a < pi1.size(); ++a) {
    if (pi1[a].rows() != n || pi1[a].cols() != n || pi2[a].rows() != n || pi2[a].cols() != n) return std::nullopt;
  }
  const auto space = intertwiner_space(pi1, pi2, tol);
  if (space.empty()) return std::nullopt;

  std::vector<CMatrix> candidates;
  CMatrix projected = CMatrix::Zero(n, n);
  for (const auto& b : space) projected += (b.adjoint() * CMatrix::Identity(n, n)).trace() * b;
  candidates.push_back(projected);
  candidates.insert(candidates.end(), space.begin(), space.end());
  std::mt19937 rng(12345);
  std::normal_distribution<double> normal;
  for (int r = 0; r < 16; ++r) {
    CMatrix mix = CMatrix::Zero(n, n);
    for (const auto& b : space) mix += Complex(normal(rng), normal(rng)) * b;
    candidates.push_back(std::move(mix));
  }

  for (const auto& x : candidates) {
    Eigen::JacobiSVD<CMatrix> svd(x);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) < 1e-8 * s(0)) continue;
    CMatrix u = unitary_part(x);
    double err = 0.0;
    for (std::size_t a = 0; a < pi1.size(); ++a) err = std::max(err, max_abs(u * pi1[a] - pi2[a] * u));
    if (err <= tol) return u;
  }
  return std::nullopt;
}

SSBVerdict detect_ssb(const StarAlgebra& algebra, const State& f, const Automorphism& rho, double tol) {
  throw_if_invalid(validate_automorphism(algebra, rho, tol), "invalid automorphism");
  GNSRep rep = gns_construct(algebra, f, tol);
  std::vector<CMatrix> rotated;
  for (std::size_t a = 0; a < algebra.dim(); ++a) rotated.push_back(rep.image(rho.map.col(ix(a))));

  SSBVerdict verdict;
  verdict.carrier_dim = rep.carrier_dim;
  verdict.stationarity_defect = stationarity_defect(algebra, f, rho).first;
  if (verdict.stationarity_defect < tol) {
    verdict.implementable = true;
    verdict.unitary = stationary_unitary(algebra, f, rho, tol);
    return verdict;
  }
  verdict.unitary = implementing_unitary(rep.ops, rotated, tol);
  verdict.implementable = verdict.unitary.has_value();
  if (verdict.implementable) return verdict;

  for (std::size_t a = 0; a < algebra.dim(); ++a) {
    auto s1 = spectrum(rep.ops[a]);
    auto s2 = spectrum(rotated[a]);
    if (spectra_differ(s1, s2, 1e-8)) {
      verdict.witness = SSBWitness{a, algebra.basis_labels()[a], std::move(s1), std::move(s2)};
      break;
    }
  }
  return verdict;
}

}  // namespace ssb
