#include "ssbkit/coset_series.hpp"

#include <algorithm>

namespace ssb {

std::vector<Rational> l_coefficients(int n_max) {
  std::vector<Rational> l;
  if (n_max <= 0) return l;
  // factorial[k] = k!
  std::vector<Integer> factorial(static_cast<std::size_t>(n_max) + 2, Integer(1));
  for (std::size_t k = 1; k < factorial.size(); ++k) factorial[k] = factorial[k - 1] * k;

  l.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    Rational rhs(Integer(n), factorial[static_cast<std::size_t>(n) + 1]);
    for (int i = 1; i < n; ++i) rhs -= l[static_cast<std::size_t>(i) - 1] / factorial[static_cast<std::size_t>(n + 1 - i)];
    l.push_back(rhs);  // the i = n term has 1/1! = 1
  }
  return l;
}

void RealizationConfig::validate() const {
  if (max_order < 1) throw ValidationError("max_order must be >= 1", {{"max_order", max_order}});
  if (!(tol > 0)) throw ValidationError("tol must be > 0", {{"tol", tol}});
}

namespace {

enum class Orders { all, odd, even };

template <class Scalar>
std::vector<Scalar> coefficient_table(int max_order);

template <>
std::vector<Rational> coefficient_table<Rational>(int max_order) {
  return l_coefficients(max_order);
}

template <>
std::vector<double> coefficient_table<double>(int max_order) {
  auto exact = l_coefficients(max_order);
  std::vector<double> out;
  out.reserve(exact.size());
  for (const auto& x : exact) out.push_back(to_double(x));
  return out;
}

template <class Scalar>
struct SeriesSum {
  BasicElement<Scalar> sum;
  int terms = 0;
  double last_norm = 0.0;
  bool converged = false;
};

/// sum over the selected n in [1, max_order] of scale * l_n * R^n(x), where
/// R(y) = [y, right].
template <class Scalar>
SeriesSum<Scalar> nested_series(const BasicElement<Scalar>& x, const BasicElement<Scalar>& right,
                                const std::vector<Scalar>& l, Orders orders, const Scalar& scale,
                                const RealizationConfig& cfg) {
  SeriesSum<Scalar> out{BasicElement<Scalar>::zero(x.algebra_ptr())};
  auto wanted = [orders](int n) {
    return orders == Orders::all || (orders == Orders::odd ? n % 2 == 1 : n % 2 == 0);
  };
  int last_nonzero = 0;
  auto nested = x;
  for (int n = 1; n <= cfg.max_order; ++n) {
    nested = bracket(nested, right);
    if (nested.is_zero()) {
      // every later nested bracket vanishes too
      out.converged = true;
      return out;
    }
    const Scalar& ln = l[static_cast<std::size_t>(n) - 1];
    if (!wanted(n) || ln == Scalar(0)) continue;
    last_nonzero = n;
    auto term = nested;
    term *= scale * ln;
    out.sum += term;
    ++out.terms;
    out.last_norm = term.norm();
    if (out.last_norm < cfg.tol) {
      out.converged = true;
      return out;
    }
  }
  // Exhausted max_order without a small term. Only the odd selection is known
  // to be finite: l_n = B_n / n! vanishes for odd n >= 3.
  out.converged = orders == Orders::odd && last_nonzero <= 1;
  return out;
}

template <class Scalar>
void require_support(const BasicElement<Scalar>& x, const std::vector<std::size_t>& allowed, const char* what) {
  if (x.leakage(allowed) != 0.0) {
    throw ValidationError(std::string(what) + " is not supported on the required subspace",
                          {{"leakage", x.leakage(allowed)}});
  }
}

template <class Scalar>
BasicElement<Scalar> enforce_support(const BasicElement<Scalar>& x, const std::vector<std::size_t>& allowed,
                                     double tol, const char* what) {
  double leak = x.leakage(allowed);
  if (leak > tol) {
    throw ValidationError(std::string(what) + " leaks outside its subspace; split is not reductive for this input",
                          {{"leakage", leak}});
  }
  return x.project(allowed);
}

template <class Scalar>
nlohmann::json partial_json(const RealizationOutput<Scalar>& out) {
  auto coeffs = [](const BasicElement<Scalar>& e) {
    std::vector<double> v;
    for (const auto& c : e.coeffs()) v.push_back(static_cast<double>(c));
    return v;
  };
  return {{"F_prime", coeffs(out.f_prime)},
          {"I_prime", coeffs(out.i_prime)},
          {"terms_used", out.terms_used},
          {"last_term_norm", out.last_term_norm},
          {"converged", out.converged}};
}

template <class Scalar>
void finish(RealizationOutput<Scalar>& out, std::initializer_list<const SeriesSum<Scalar>*> parts) {
  out.converged = true;
  for (const auto* p : parts) {
    out.terms_used += p->terms;
    out.last_term_norm = std::max(out.last_term_norm, p->last_norm);
    out.converged = out.converged && p->converged;
  }
}

template <class Scalar>
void throw_if_diverged(const RealizationOutput<Scalar>& out, const RealizationConfig& cfg) {
  if (out.converged) return;
  auto details = partial_json(out);
  details["max_order"] = cfg.max_order;
  details["tol"] = cfg.tol;
  throw NonConvergenceError("coset series did not converge within max_order", std::move(details));
}

void check_inputs(const LieAlgebra& alg, const ReductiveSplit& split, const RealizationConfig& cfg) {
  cfg.validate();
  throw_if_invalid(validate_split(alg, split), "invalid reductive split");
}

}  // namespace

template <class Scalar>
RealizationOutput<Scalar> realize_broken(const BasicElement<Scalar>& f_alpha, const BasicElement<Scalar>& F,
                                         const ReductiveSplit& split, const RealizationConfig& cfg) {
  require_same_algebra(f_alpha.algebra(), F.algebra());
  check_inputs(f_alpha.algebra(), split, cfg);
  require_support(f_alpha, split.f, "broken generator");
  require_support(F, split.f, "coset point F");

  const auto l = coefficient_table<Scalar>(cfg.max_order);
  const Scalar one(1);

  auto i_series = nested_series(f_alpha, F, l, Orders::odd, one, cfg);
  auto i_prime = enforce_support(i_series.sum, split.h, cfg.tol, "I'");

  auto even_series = nested_series(f_alpha, F, l, Orders::even, one, cfg);
  auto feedback = nested_series(F, i_prime, l, Orders::all, one, cfg);
  auto f_prime = enforce_support(f_alpha + even_series.sum - feedback.sum, split.f, cfg.tol, "F'");

  RealizationOutput<Scalar> out{std::move(f_prime), std::move(i_prime)};
  finish(out, {&i_series, &even_series, &feedback});
  throw_if_diverged(out, cfg);
  return out;
}

template <class Scalar>
RealizationOutput<Scalar> realize_unbroken(const BasicElement<Scalar>& i_a, const BasicElement<Scalar>& F,
                                           const ReductiveSplit& split, const RealizationConfig& cfg) {
  require_same_algebra(i_a.algebra(), F.algebra());
  check_inputs(i_a.algebra(), split, cfg);
  require_support(i_a, split.h, "unbroken generator");
  require_support(F, split.f, "coset point F");

  const auto l = coefficient_table<Scalar>(cfg.max_order);
  auto series = nested_series(i_a, F, l, Orders::odd, Scalar(2), cfg);
  auto f_prime = enforce_support(series.sum, split.f, cfg.tol, "F'");

  RealizationOutput<Scalar> out{std::move(f_prime), i_a};
  finish(out, {&series});
  throw_if_diverged(out, cfg);
  return out;
}

template <class Scalar>
RealizationOutput<Scalar> realize(const BasicElement<Scalar>& gen, const BasicElement<Scalar>& F,
                                  const ReductiveSplit& split, const RealizationConfig& cfg) {
  require_same_algebra(gen.algebra(), F.algebra());
  check_inputs(gen.algebra(), split, cfg);
  std::vector<std::size_t> all = split.h;
  all.insert(all.end(), split.f.begin(), split.f.end());
  require_support(gen, all, "generator");

  auto f_part = gen.project(split.f);
  auto h_part = gen.project(split.h);
  auto zero = BasicElement<Scalar>::zero(gen.algebra_ptr());
  RealizationOutput<Scalar> out{zero, zero, 0, 0.0, true};
  auto accumulate = [&](const RealizationOutput<Scalar>& part) {
    out.f_prime += part.f_prime;
    out.i_prime += part.i_prime;
    out.terms_used += part.terms_used;
    out.last_term_norm = std::max(out.last_term_norm, part.last_term_norm);
    out.converged = out.converged && part.converged;
  };
  if (!f_part.is_zero()) accumulate(realize_broken(f_part, F, split, cfg));
  if (!h_part.is_zero()) accumulate(realize_unbroken(h_part, F, split, cfg));
  if (f_part.is_zero() && h_part.is_zero()) require_support(F, split.f, "coset point F");
  return out;
}

template Realization realize_broken(const Element&, const Element&, const ReductiveSplit&, const RealizationConfig&);
template ExactRealization realize_broken(const ExactElement&, const ExactElement&, const ReductiveSplit&,
                                         const RealizationConfig&);
template Realization realize_unbroken(const Element&, const Element&, const ReductiveSplit&, const RealizationConfig&);
template ExactRealization realize_unbroken(const ExactElement&, const ExactElement&, const ReductiveSplit&,
                                           const RealizationConfig&);
template Realization realize(const Element&, const Element&, const ReductiveSplit&, const RealizationConfig&);
template ExactRealization realize(const ExactElement&, const ExactElement&, const ReductiveSplit&,
                                  const RealizationConfig&);

Eigen::MatrixXcd HRepresentation::image(const Element& i_element) const {
  const auto n = static_cast<Eigen::Index>(carrier_dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < h_indices.size(); ++k) m += i_element[h_indices[k]] * generators[k];
  return m;
}

ValidationReport validate_h_representation(const LieAlgebra& algebra, const HRepresentation& rep, double tol) {
  ValidationReport report;
  if (rep.h_indices.size() != rep.generators.size()) {
    report.add("shape", {}, "one generator matrix per h index required");
    return report;
  }
  const auto n = static_cast<Eigen::Index>(rep.carrier_dim());
  for (std::size_t k = 0; k < rep.generators.size(); ++k) {
    if (rep.h_indices[k] >= algebra.dim()) report.add("shape", {static_cast<std::int64_t>(k)}, "h index out of range");
    if (rep.generators[k].rows() != n || rep.generators[k].cols() != n) {
      report.add("shape", {static_cast<std::int64_t>(k)}, "generator matrices must share one square shape");
    }
  }
  if (!report.ok()) return report;

  auto slot = [&](std::size_t algebra_index) -> std::optional<std::size_t> {
    auto it = std::find(rep.h_indices.begin(), rep.h_indices.end(), algebra_index);
    if (it == rep.h_indices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - rep.h_indices.begin());
  };
  for (std::size_t i = 0; i < rep.h_indices.size(); ++i)
    for (std::size_t j = 0; j < rep.h_indices.size(); ++j) {
      const auto& A = rep.generators[i];
      const auto& B = rep.generators[j];
      Eigen::MatrixXcd lhs = A * B - B * A;
      Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& t : algebra.terms(rep.h_indices[i], rep.h_indices[j])) {
        auto s = slot(t.d);
        if (!s) {
          report.add("closure", {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)},
                     "bracket leaves the represented subalgebra");
          continue;
        }
        rhs += t.approx * rep.generators[*s];
      }
      if ((lhs - rhs).cwiseAbs().maxCoeff() > tol) {
        report.add("homomorphism", {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)},
                   "rho([I_a,I_b]) != [rho(I_a), rho(I_b)]");
      }
    }
  return report;
}

ProductAction realize_on_product(const Element& gen, const Element& F, const Eigen::VectorXcd& v,
                                 const HRepresentation& rep, const ReductiveSplit& split,
                                 const RealizationConfig& cfg) {
  auto sorted = [](std::vector<std::size_t> x) {
    std::sort(x.begin(), x.end());
    return x;
  };
  if (sorted(rep.h_indices) != sorted(split.h)) {
    throw ValidationError("representation must cover exactly the h generators of the split");
  }
  throw_if_invalid(validate_h_representation(gen.algebra(), rep), "invalid h representation");
  if (static_cast<std::size_t>(v.size()) != rep.carrier_dim()) {
    throw ValidationError("vector dimension " + std::to_string(v.size()) + " differs from representation dimension " +
                          std::to_string(rep.carrier_dim()));
  }
  auto r = realize(gen, F, split, cfg);
  Eigen::VectorXcd v_prime = rep.image(r.i_prime) * v;
  return {r.f_prime, std::move(v_prime), std::move(r)};
}

template <class Scalar>
RealizationOutput<Scalar> realize_even_super(const BasicElement<Scalar>& gen, const BasicElement<Scalar>& F,
                                             const ReductiveSplit& split, const RealizationConfig& cfg) {
  require_same_algebra(gen.algebra(), F.algebra());
  const auto& parent = gen.algebra_ptr();
  auto even = even_subalgebra(parent);
  for (std::size_t i = 0; i < parent->dim(); ++i) {
    if (parent->parity(i) == 1 && (gen[i] != Scalar(0) || F[i] != Scalar(0))) {
      throw ValidationError("odd component in even-part realization input",
                            {{"index", i}, {"label", parent->basis_labels()[i]}});
    }
  }
  throw_if_invalid(validate_split(*parent, split), "invalid even-part split");
  auto even_split = even.map_split(split);
  auto r = realize(even.restrict(gen), even.restrict(F), even_split, cfg);
  return {even.extend(r.f_prime, parent), even.extend(r.i_prime, parent), r.terms_used, r.last_term_norm,
          r.converged};
}

template Realization realize_even_super(const Element&, const Element&, const ReductiveSplit&,
                                        const RealizationConfig&);
template ExactRealization realize_even_super(const ExactElement&, const ExactElement&, const ReductiveSplit&,
                                             const RealizationConfig&);

}  // namespace ssb
