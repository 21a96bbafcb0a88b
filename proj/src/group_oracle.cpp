#include "ssbkit/group_oracle.hpp"

#include <cmath>

namespace ssb {

ValidationReport check_closure(const LieAlgebra& algebra, const std::vector<CMatrix>& mats, double tol) {
  ValidationReport report;
  if (mats.size() != algebra.dim()) {
    report.add("shape", {static_cast<std::int64_t>(mats.size())}, "one matrix per basis generator required");
    return report;
  }
  const auto n = mats.empty() ? 0 : mats.front().rows();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != n || mats[i].cols() != n) {
      report.add("shape", {static_cast<std::int64_t>(i)}, "matrices must share one square shape");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t a = 0; a < mats.size(); ++a)
    for (std::size_t b = 0; b < mats.size(); ++b) {
      CMatrix lhs = mats[a] * mats[b] - mats[b] * mats[a];
      for (const auto& t : algebra.terms(a, b)) lhs -= t.approx * mats[t.d];
      if (max_abs(lhs) > tol) {
        report.add("closure", {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)},
                   "[M_a, M_b] != sum_d c(a,b,d) M_d");
      }
    }
  return report;
}

MatrixRepresentation::MatrixRepresentation(AlgebraPtr algebra, std::vector<CMatrix> mats, double tol)
    : algebra_(std::move(algebra)), mats_(std::move(mats)) {
  if (mats_.empty()) throw ValidationError("matrix representation needs at least one generator");
  throw_if_invalid(check_closure(*algebra_, mats_, tol), "matrix representation of '" + algebra_->name() + "'");
}

CMatrix MatrixRepresentation::image(const Element& x) const {
  require_same_algebra(*algebra_, x.algebra());
  const auto n = static_cast<Eigen::Index>(rep_dim());
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < mats_.size(); ++i)
    if (x[i] != 0.0) m += x[i] * mats_[i];
  return m;
}

Element MatrixRepresentation::coordinates(const CMatrix& m) const {
  Eigen::VectorXd x = real_coordinates(mats_, m);
  return Element(algebra_, std::vector<double>(x.data(), x.data() + x.size()));
}

namespace {

CMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

MatrixRepresentation catalog_representation(std::string_view name) {
  auto alg = catalog_algebra(name);
  if (name == "heisenberg3") {
    return {alg,
            {real_matrix({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}), real_matrix({{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}),
             real_matrix({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})}};
  }
  if (name == "so3") {
    return {alg,
            {real_matrix({{0, 0, 0}, {0, 0, -1}, {0, 1, 0}}), real_matrix({{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}}),
             real_matrix({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}})}};
  }
  if (name == "su2") {
    const Complex i(0, 1);
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -i, i, 0;
    s3 << 1, 0, 0, -1;
    return {alg, {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3}};
  }
  if (name == "sl2r") {
    return {alg, {real_matrix({{1, 0}, {0, -1}}), real_matrix({{0, 1}, {0, 0}}), real_matrix({{0, 0}, {1, 0}})}};
  }
  throw ValidationError("no catalog matrix representation for '" + std::string(name) + "'");
}

CMatrix exp_element(const Element& x, const MatrixRepresentation& rep) { return expm(rep.image(x)); }

namespace {

struct Parameterisation {
  const ReductiveSplit& split;
  const MatrixRepresentation& rep;

  Eigen::Index size() const { return static_cast<Eigen::Index>(split.f.size() + split.h.size()); }

  Eigen::VectorXd pack(const Element& F, const Element& I) const {
    Eigen::VectorXd x(size());
    Eigen::Index k = 0;
    for (auto i : split.f) x(k++) = F[i];
    for (auto i : split.h) x(k++) = I[i];
    return x;
  }

  std::pair<Element, Element> unpack(const Eigen::VectorXd& x) const {
    auto F = Element::zero(rep.algebra_ptr());
    auto I = Element::zero(rep.algebra_ptr());
    Eigen::Index k = 0;
    for (auto i : split.f) F[i] = x(k++);
    for (auto i : split.h) I[i] = x(k++);
    return {std::move(F), std::move(I)};
  }

  CMatrix compose(const Eigen::VectorXd& x) const {
    auto [F, I] = unpack(x);
    return exp_element(F, rep) * exp_element(I, rep);
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x, const CMatrix& g) const {
    CVector d = vec(compose(x) - g);
    Eigen::VectorXd r(2 * d.size());
    r << d.real(), d.imag();
    return r;
  }
};

struct NewtonRun {
  Eigen::VectorXd x;
  double residual;
  int iterations;
};

NewtonRun gauss_newton(const Parameterisation& p, const CMatrix& g, Eigen::VectorXd x, int max_iterations) {
  Eigen::VectorXd r = p.residual(x, g);
  double rn = r.norm();
  int it = 0;
  for (; it < max_iterations && rn > 0.0; ++it) {
    Eigen::MatrixXd J(r.size(), p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      J.col(k) = (p.residual(xp, g) - p.residual(xm, g)) / (2 * h);
    }
    Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);

    bool accepted = false;
    double scale = 1.0;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      Eigen::VectorXd candidate = x + scale * step;
      Eigen::VectorXd rc = p.residual(candidate, g);
      if (rc.norm() < rn) {
        x = std::move(candidate);
        r = std::move(rc);
        rn = r.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (scale * step.norm() <= 1e-16 * (1.0 + x.norm())) break;
  }
  return {x, operator_norm(p.compose(x) - g), it};
}

}  // namespace

FactorizationResult coset_factorize(const CMatrix& g, const ReductiveSplit& split, const MatrixRepresentation& rep,
                                    const FactorizeOptions& opts, const std::optional<std::pair<Element, Element>>& seed) {
  throw_if_invalid(validate_split(rep.algebra(), split), "invalid reductive split");
  const auto n = static_cast<Eigen::Index>(rep.rep_dim());
  if (g.rows() != n || g.cols() != n) {
    throw ValidationError("group element shape does not match representation dimension " + std::to_string(n));
  }
  Parameterisation p{split, rep};

  Eigen::VectorXd x0;
  if (seed) {
    x0 = p.pack(seed->first, seed->second);
  } else {
    auto log_coords = rep.coordinates(logm(g));
    x0 = p.pack(log_coords.project(split.f), log_coords.project(split.h));
  }

  auto run = gauss_newton(p, g, x0, opts.max_iterations);
  if (run.residual >= opts.tol) {
    auto retry = gauss_newton(p, g, 0.5 * x0, opts.max_iterations);
    if (retry.residual < run.residual) run = std::move(retry);
  }
  auto [F, I] = p.unpack(run.x);
  if (run.residual >= opts.tol) {
    std::vector<double> best(run.x.data(), run.x.data() + run.x.size());
    throw NonConvergenceError("coset factorization stalled above tolerance",
                              {{"residual", run.residual}, {"tol", opts.tol}, {"best_iterate", best},
                               {"iterations", run.iterations}});
  }
  return {std::move(F), std::move(I), run.residual, run.iterations};
}

std::pair<Element, Element> factorization_velocity(const Element& gen, const Element& F, const ReductiveSplit& split,
                                                   const MatrixRepresentation& rep, double eps,
                                                   const FactorizeOptions& opts) {
  if (!(eps > 0)) throw ValidationError("eps must be > 0", {{"eps", eps}});
  require_same_algebra(gen.algebra(), rep.algebra());
  const CMatrix base = exp_element(F, rep);
  const auto seed = std::make_optional(std::make_pair(F.project(split.f), Element::zero(rep.algebra_ptr())));
  auto plus = coset_factorize(expm(eps * rep.image(gen)) * base, split, rep, opts, seed);
  auto minus = coset_factorize(expm(-eps * rep.image(gen)) * base, split, rep, opts, seed);
  auto dF = plus.F - minus.F;
  auto dI = plus.I - minus.I;
  dF *= 1.0 / (2 * eps);
  dI *= 1.0 / (2 * eps);
  return {std::move(dF), std::move(dI)};
}

VelocityReport velocity_check(const Element& gen, const Element& F, const ReductiveSplit& split,
                              const MatrixRepresentation& rep, double eps, const RealizationConfig& cfg,
                              const FactorizeOptions& opts) {
  auto [dF, dI] = factorization_velocity(gen, F, split, rep, eps, opts);
  auto series = realize(gen, F, split, cfg);
  auto gap_F = series.f_prime - dF;
  auto gap_I = series.i_prime - dI;
  const double gF = gap_F.norm();
  const double gI = gap_I.norm();
  return {std::move(dF), std::move(dI), std::move(series), std::move(gap_F), std::move(gap_I), gF, gI};
}

}  // namespace ssb
