#include "ssbkit/lie_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace ssb {

namespace {

int sign_of(int pa, int pb) { return (pa * pb) % 2 == 0 ? 1 : -1; }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

ValidationReport check_lie_axioms(const StructureTensor& c, std::span<const int> grading) {
  ValidationReport report;
  const std::size_t n = c.dim();
  if (!grading.empty() && grading.size() != n) {
    report.add("grading-length", {static_cast<std::int64_t>(grading.size())}, "grading length differs from dim");
    return report;
  }
  for (int p : grading) {
    if (p != 0 && p != 1) {
      report.add("grading-value", {p}, "parities must be 0 or 1");
      return report;
    }
  }
  auto par = [&](std::size_t i) { return grading.empty() ? 0 : grading[i]; };
  auto idx = [](std::size_t a, std::size_t b, std::size_t d) {
    return std::vector<std::int64_t>{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                                     static_cast<std::int64_t>(d)};
  };

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) {
        const Rational& v = c(a, b, d);
        if (v + sign_of(par(a), par(b)) * c(b, a, d) != 0) {
          report.add("antisymmetry", idx(a, b, d), "c[a][b][d] != -(-1)^{|a||b|} c[b][a][d]");
        }
        if (v != 0 && (par(a) + par(b)) % 2 != par(d)) {
          report.add("grading", idx(a, b, d), "bracket does not respect parity");
        }
      }

  // (-1)^{|a||g|}[a,[b,g]] + (-1)^{|b||a|}[b,[g,a]] + (-1)^{|g||b|}[g,[a,b]] = 0
  Rational sum;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t d = 0; d < n; ++d) {
          sum = 0;
          for (std::size_t e = 0; e < n; ++e) {
            if (c(b, g, e) != 0 && c(a, e, d) != 0) sum += sign_of(par(a), par(g)) * c(b, g, e) * c(a, e, d);
            if (c(g, a, e) != 0 && c(b, e, d) != 0) sum += sign_of(par(b), par(a)) * c(g, a, e) * c(b, e, d);
            if (c(a, b, e) != 0 && c(g, e, d) != 0) sum += sign_of(par(g), par(b)) * c(a, b, e) * c(g, e, d);
          }
          if (sum != 0) {
            auto i = idx(a, b, g);
            i.push_back(static_cast<std::int64_t>(d));
            report.add("jacobi", std::move(i), "residual " + format_rational(sum));
          }
        }
  return report;
}

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> basis, StructureTensor c, std::vector<int> grading,
                       std::optional<ReductiveSplit> split)
    : name_(std::move(name)), basis_(std::move(basis)), c_(std::move(c)), grading_(std::move(grading)),
      split_(std::move(split)) {
  if (c_.dim() != basis_.size()) {
    throw ValidationError("structure tensor dimension " + std::to_string(c_.dim()) + " differs from basis size " +
                          std::to_string(basis_.size()));
  }
  std::set<std::string> seen;
  for (const auto& label : basis_) {
    if (!seen.insert(label).second) throw ValidationError("duplicate basis label '" + label + "'");
  }
  throw_if_invalid(check_lie_axioms(c_, grading_), "invalid Lie algebra '" + name_ + "'");

  const std::size_t n = dim();
  sparse_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d)
        if (c_(a, b, d) != 0) sparse_[a * n + b].push_back({d, c_(a, b, d), to_double(c_(a, b, d))});

  if (split_) throw_if_invalid(validate_split(*this, *split_), "invalid split for '" + name_ + "'");
}

std::optional<std::size_t> LieAlgebra::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i] == label) return i;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (iequals(basis_[i], label)) return i;
  return std::nullopt;
}

template <class Scalar>
BasicElement<Scalar>::BasicElement(AlgebraPtr algebra, std::vector<Scalar> coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw ValidationError("element without an algebra");
  if (coeffs_.size() != algebra_->dim()) {
    throw ValidationError("element has " + std::to_string(coeffs_.size()) + " coefficients, algebra '" +
                          algebra_->name() + "' has dim " + std::to_string(algebra_->dim()));
  }
}

template <class Scalar>
BasicElement<Scalar> BasicElement<Scalar>::zero(AlgebraPtr algebra) {
  const auto n = algebra->dim();
  return BasicElement(std::move(algebra), std::vector<Scalar>(n, Scalar(0)));
}

template <class Scalar>
BasicElement<Scalar> BasicElement<Scalar>::basis(AlgebraPtr algebra, std::size_t i, Scalar scale) {
  auto e = zero(std::move(algebra));
  e.coeffs_.at(i) = scale;
  return e;
}

template <class Scalar>
bool BasicElement<Scalar>::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Scalar& x) { return x == Scalar(0); });
}

namespace {
double magnitude(double x) { return std::abs(x); }
double magnitude(const Rational& x) { return std::abs(to_double(x)); }
}  // namespace

template <class Scalar>
double BasicElement<Scalar>::norm() const {
  double m = 0;
  for (const auto& x : coeffs_) m = std::max(m, magnitude(x));
  return m;
}

template <class Scalar>
BasicElement<Scalar> BasicElement<Scalar>::project(std::span<const std::size_t> indices) const {
  auto out = zero(algebra_);
  for (auto i : indices) out.coeffs_.at(i) = coeffs_.at(i);
  return out;
}

template <class Scalar>
double BasicElement<Scalar>::leakage(std::span<const std::size_t> indices) const {
  std::vector<bool> keep(coeffs_.size(), false);
  for (auto i : indices) keep.at(i) = true;
  double m = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!keep[i]) m = std::max(m, magnitude(coeffs_[i]));
  return m;
}

template <class Scalar>
BasicElement<Scalar>& BasicElement<Scalar>::operator+=(const BasicElement& other) {
  require_same_algebra(*algebra_, *other.algebra_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

template <class Scalar>
BasicElement<Scalar>& BasicElement<Scalar>::operator-=(const BasicElement& other) {
  require_same_algebra(*algebra_, *other.algebra_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

template <class Scalar>
BasicElement<Scalar>& BasicElement<Scalar>::operator*=(const Scalar& s) {
  for (auto& x : coeffs_) x *= s;
  return *this;
}

template class BasicElement<double>;
template class BasicElement<Rational>;

Element to_float(const ExactElement& x) {
  std::vector<double> c;
  c.reserve(x.dim());
  for (const auto& v : x.coeffs()) c.push_back(to_double(v));
  return Element(x.algebra_ptr(), std::move(c));
}

void require_same_algebra(const LieAlgebra& x, const LieAlgebra& y) {
  if (&x != &y && !(x == y)) {
    throw ValidationError("algebra mismatch: '" + x.name() + "' vs '" + y.name() + "'");
  }
}

namespace {
inline double coef(const LieAlgebra::Term& t, double) { return t.approx; }
inline const Rational& coef(const LieAlgebra::Term& t, const Rational&) { return t.value; }
}  // namespace

template <class Scalar>
BasicElement<Scalar> bracket(const BasicElement<Scalar>& x, const BasicElement<Scalar>& y) {
  require_same_algebra(x.algebra(), y.algebra());
  const auto& alg = x.algebra();
  const std::size_t n = alg.dim();
  std::vector<Scalar> out(n, Scalar(0));
  const Scalar tag{};
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] == Scalar(0)) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (y[b] == Scalar(0)) continue;
      auto terms = alg.terms(a, b);
      if (terms.empty()) continue;
      Scalar xy = x[a] * y[b];
      for (const auto& t : terms) out[t.d] += xy * coef(t, tag);
    }
  }
  return BasicElement<Scalar>(x.algebra_ptr(), std::move(out));
}

template Element bracket(const Element&, const Element&);
template ExactElement bracket(const ExactElement&, const ExactElement&);

Eigen::MatrixXd adjoint_matrix(const Element& x) {
  const auto n = x.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t d = 0; d < n; ++d) {
    auto col = bracket(x, Element::basis(x.algebra_ptr(), d));
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = col[i];
  }
  return m;
}

RationalMatrix adjoint_matrix(const ExactElement& x) {
  const auto n = x.dim();
  RationalMatrix m(n, n);
  for (std::size_t d = 0; d < n; ++d) {
    auto col = bracket(x, ExactElement::basis(x.algebra_ptr(), d));
    for (std::size_t i = 0; i < n; ++i) m(i, d) = col[i];
  }
  return m;
}

ValidationReport validate_split(const LieAlgebra& algebra, const ReductiveSplit& split) {
  ValidationReport report;
  const std::size_t n = algebra.dim();
  enum Part { none, in_h, in_f };
  std::vector<Part> part(n, none);
  auto mark = [&](const std::vector<std::size_t>& idx, Part p) {
    for (auto i : idx) {
      if (i >= n) {
        report.add("partition", {static_cast<std::int64_t>(i)}, "index out of range");
        continue;
      }
      if (part[i] != none) report.add("partition", {static_cast<std::int64_t>(i)}, "index listed twice");
      if (algebra.parity(i) != 0) report.add("partition", {static_cast<std::int64_t>(i)}, "odd generator in split");
      part[i] = p;
    }
  };
  mark(split.h, in_h);
  mark(split.f, in_f);
  for (std::size_t i = 0; i < n; ++i) {
    if (part[i] == none && algebra.parity(i) == 0) {
      report.add("partition", {static_cast<std::int64_t>(i)}, "even generator not covered");
    }
  }
  if (!report.ok()) return report;

  auto check = [&](Part pa, Part pb, Part target, const char* rule) {
    for (std::size_t a = 0; a < n; ++a) {
      if (part[a] != pa) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (part[b] != pb) continue;
        for (const auto& t : algebra.terms(a, b)) {
          if (part[t.d] != target) {
            report.add(rule,
                       {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b), static_cast<std::int64_t>(t.d)},
                       "[" + algebra.basis_labels()[a] + "," + algebra.basis_labels()[b] + "] has " +
                           format_rational(t.value) + "*" + algebra.basis_labels()[t.d]);
          }
        }
      }
    }
  };
  check(in_h, in_h, in_h, "[h,h] in h");
  check(in_f, in_f, in_h, "[f,f] in h");
  check(in_f, in_h, in_f, "[f,h] in f");
  return report;
}

ReductiveSplit EvenPart::map_split(const ReductiveSplit& parent_split) const {
  ReductiveSplit out;
  auto to_even = [&](std::size_t parent) -> std::optional<std::size_t> {
    auto it = std::find(index_map.begin(), index_map.end(), parent);
    if (it == index_map.end()) return std::nullopt;
    return static_cast<std::size_t>(it - index_map.begin());
  };
  for (auto i : parent_split.h)
    if (auto j = to_even(i)) out.h.push_back(*j);
  for (auto i : parent_split.f)
    if (auto j = to_even(i)) out.f.push_back(*j);
  return out;
}

template <class Scalar>
BasicElement<Scalar> EvenPart::restrict(const BasicElement<Scalar>& parent_element) const {
  std::vector<Scalar> c;
  c.reserve(index_map.size());
  for (auto i : index_map) c.push_back(parent_element[i]);
  return BasicElement<Scalar>(algebra, std::move(c));
}

template <class Scalar>
BasicElement<Scalar> EvenPart::extend(const BasicElement<Scalar>& even_element, const AlgebraPtr& parent) const {
  auto out = BasicElement<Scalar>::zero(parent);
  for (std::size_t i = 0; i < index_map.size(); ++i) out[index_map[i]] = even_element[i];
  return out;
}

template Element EvenPart::restrict(const Element&) const;
template ExactElement EvenPart::restrict(const ExactElement&) const;
template Element EvenPart::extend(const Element&, const AlgebraPtr&) const;
template ExactElement EvenPart::extend(const ExactElement&, const AlgebraPtr&) const;

EvenPart even_subalgebra(const AlgebraPtr& algebra) {
  if (!algebra->is_graded()) {
    throw ValidationError("even_subalgebra needs a graded algebra; '" + algebra->name() + "' is ungraded");
  }
  EvenPart out;
  for (std::size_t i = 0; i < algebra->dim(); ++i)
    if (algebra->parity(i) == 0) out.index_map.push_back(i);

  const std::size_t m = out.index_map.size();
  StructureTensor c(m);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < m; ++a) {
    labels.push_back(algebra->basis_labels()[out.index_map[a]]);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t d = 0; d < m; ++d) c(a, b, d) = algebra->constants()(out.index_map[a], out.index_map[b], out.index_map[d]);
  }
  std::optional<ReductiveSplit> split;
  if (algebra->canonical_split()) split = out.map_split(*algebra->canonical_split());
  out.algebra = std::make_shared<const LieAlgebra>(algebra->name() + "_even", std::move(labels), std::move(c),
                                                   std::vector<int>{}, std::move(split));
  return out;
}

namespace {

struct Entry {
  std::size_t a, b, d;
  Rational v;
};

AlgebraPtr build(std::string name, std::vector<std::string> basis, const std::vector<Entry>& entries,
                 std::vector<int> grading, ReductiveSplit split) {
  StructureTensor c(basis.size());
  for (const auto& e : entries) {
    int s = (!grading.empty() && grading[e.a] == 1 && grading[e.b] == 1) ? 1 : -1;
    c(e.a, e.b, e.d) = e.v;
    c(e.b, e.a, e.d) = s * e.v;
  }
  return std::make_shared<const LieAlgebra>(std::move(name), std::move(basis), std::move(c), std::move(grading),
                                            std::move(split));
}

}  // namespace

AlgebraPtr catalog_algebra(std::string_view name) {
  if (name == "heisenberg3") {
    // [X, Y] = Z, Z central
    return build("heisenberg3", {"X", "Y", "Z"}, {{0, 1, 2, 1}}, {}, {{2}, {0, 1}});
  }
  if (name == "so3") {
    // [F1, F2] = I3, [F2, I3] = F1, [I3, F1] = F2
    return build("so3", {"F1", "F2", "I3"}, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}, {}, {{2}, {0, 1}});
  }
  if (name == "su2") {
    // basis J_k = -i sigma_k / 2
    return build("su2", {"J1", "J2", "J3"}, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}, {}, {{2}, {0, 1}});
  }
  if (name == "sl2r") {
    return build("sl2r", {"H", "E", "F"}, {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}}, {}, {{0}, {1, 2}});
  }
  if (name == "superheis") {
    // Heisenberg even part plus odd Q1, Q2 with {Q1, Q1} = Z and [X, Q1] = Q2.
    return build("superheis", {"X", "Y", "Z", "Q1", "Q2"}, {{0, 1, 2, 1}, {3, 3, 2, 1}, {0, 3, 4, 1}},
                 {0, 0, 0, 1, 1}, {{2}, {0, 1}});
  }
  throw ValidationError("unknown catalog algebra '" + std::string(name) + "'",
                        {{"known", catalog_algebra_names()}});
}

std::vector<std::string> catalog_algebra_names() { return {"heisenberg3", "so3", "su2", "sl2r", "superheis"}; }

}  // namespace ssb
