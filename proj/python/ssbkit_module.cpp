#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssbkit/cli.hpp"
#include "ssbkit/coset_series.hpp"
#include "ssbkit/gns.hpp"
#include "ssbkit/group_oracle.hpp"
#include "ssbkit/io.hpp"
#include "ssbkit/symmetry.hpp"

namespace py = pybind11;
using namespace ssb;

namespace {

// Error, then one subclass per ErrorKind in enum order. The module holds
// the references.
PyObject* exception_types[6] = {};

// nlohmann json -> Python objects through the json module.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ReductiveSplit split_of(const LieAlgebra& algebra, const std::string& h) {
  if (!h.empty()) {
    ReductiveSplit s{io::parse_basis_indices(algebra, h), {}};
    for (std::size_t i = 0; i < algebra.dim(); ++i)
      if (algebra.parity(i) == 0 && std::find(s.h.begin(), s.h.end(), i) == s.h.end()) s.f.push_back(i);
    return s;
  }
  if (!algebra.canonical_split()) throw ValidationError("algebra '" + algebra.name() + "' has no default split");
  return *algebra.canonical_split();
}

py::dict realization_dict(const Realization& r) {
  py::dict d;
  d["F_prime"] = std::vector<double>(r.f_prime.coeffs().begin(), r.f_prime.coeffs().end());
  d["I_prime"] = std::vector<double>(r.i_prime.coeffs().begin(), r.i_prime.coeffs().end());
  d["terms_used"] = r.terms_used;
  d["last_term_norm"] = r.last_term_norm;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(ssbkit, m) {
  m.doc() = "Coset realizations, GNS constructions and finite-group symmetry analysis";
  m.attr("__version__") = cli::kVersion;

  exception_types[0] = py::exception<Error>(m, "Error").ptr();
  exception_types[1] = py::exception<ValidationError>(m, "ValidationError", exception_types[0]).ptr();
  exception_types[2] = py::exception<PreconditionError>(m, "PreconditionError", exception_types[0]).ptr();
  exception_types[3] = py::exception<DomainError>(m, "DomainError", exception_types[0]).ptr();
  exception_types[4] = py::exception<NonConvergenceError>(m, "NonConvergenceError", exception_types[0]).ptr();
  exception_types[5] = py::exception<CapabilityError>(m, "CapabilityError", exception_types[0]).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exception_types[1 + static_cast<int>(e.kind())], e.what());
    }
  });

  m.def(
      "l_coefficients",
      [](int n) {
        std::vector<std::string> out;
        for (const auto& x : l_coefficients(n)) out.push_back(format_rational(x));
        return out;
      },
      py::arg("n"), "l_1..l_n as exact rational strings");

  m.def(
      "realize",
      [](const std::string& algebra, const std::string& gen, const std::string& F, const std::string& split_h,
         int max_order, double tol) {
        auto loaded = io::load_algebra(algebra);
        const auto split = split_of(*loaded.algebra, split_h);
        const Element g = to_float(io::parse_element(loaded.algebra, gen));
        const Element x = to_float(io::parse_element(loaded.algebra, F));
        const RealizationConfig cfg{max_order, tol};
        return realization_dict(loaded.algebra->is_graded() ? realize_even_super(g, x, split, cfg)
                                                            : realize(g, x, split, cfg));
      },
      py::arg("algebra"), py::arg("gen"), py::arg("F") = "0", py::arg("split_h") = "", py::arg("max_order") = 20,
      py::arg("tol") = 1e-12);

  m.def(
      "velocity_gap",
      [](const std::string& algebra, const std::string& gen, const std::string& F, double eps) {
        auto loaded = io::load_algebra(algebra);
        if (!loaded.rep) throw CapabilityError("algebra '" + loaded.algebra->name() + "' has no matrix representation");
        const auto split = split_of(*loaded.algebra, "");
        auto v = velocity_check(to_float(io::parse_element(loaded.algebra, gen)),
                                to_float(io::parse_element(loaded.algebra, F)), split, *loaded.rep, eps);
        return v.gap_norm();
      },
      py::arg("algebra"), py::arg("gen"), py::arg("F"), py::arg("eps") = 1e-5,
      "Max-norm gap between the series and the finite-difference velocity");

  m.def(
      "gns",
      [](const std::string& algebra, const std::string& state, double tol) {
        const auto a = io::load_star_algebra(algebra);
        const State f = io::load_state(a, state);
        auto rep = gns_construct(a, f, tol);
        py::dict d;
        d["carrier_dim"] = rep.carrier_dim;
        d["ops"] = rep.ops;
        d["theta"] = CMatrix(rep.theta);
        d["checks"] = to_py(check_gns(a, f, rep, tol).to_json());
        return d;
      },
      py::arg("algebra"), py::arg("state"), py::arg("tol") = 1e-10);

  m.def(
      "detect_ssb",
      [](const std::string& algebra, const std::string& state, const std::string& automorphism, double tol) {
        const auto a = io::load_star_algebra(algebra);
        auto v = detect_ssb(a, io::load_state(a, state), io::load_automorphism(a, automorphism), tol);
        py::dict d;
        d["verdict"] = v.implementable ? "implementable" : "broken";
        d["carrier_dim"] = v.carrier_dim;
        d["stationarity_defect"] = v.stationarity_defect;
        if (v.unitary) d["unitary"] = *v.unitary;
        if (v.witness) d["witness"] = v.witness->label;
        return d;
      },
      py::arg("algebra"), py::arg("state"), py::arg("automorphism"), py::arg("tol") = 1e-10);

  m.def(
      "cocycle",
      [](const std::string& group, const std::string& multiplier) {
        auto g = io::load_group(group);
        const auto k = io::load_multiplier(g.group, multiplier);
        py::dict d;
        const bool ok = verify_cocycle(g.group, k).ok();
        d["is_cocycle"] = ok;
        d["is_coboundary"] = ok ? py::cast(coboundary_solve(g.group, k).has_value()) : py::none();
        if (ok) {
          auto ext = central_extension(g.group, k);
          d["extension_order"] = ext.group.order();
          d["extension_abelian"] = ext.group.is_abelian();
        }
        return d;
      },
      py::arg("group"), py::arg("multiplier"));

  m.def(
      "induced_character",
      [](const std::string& group, const std::string& subgroup, const std::string& hrep) {
        auto g = io::load_group(group);
        const auto h = subgroup.empty() ? g.subgroup : io::parse_group_elements(g.group, subgroup);
        auto ind = induced_action(g.group, h, canonical_section(g.group, h), io::load_subgroup_rep(g.group, h, hrep));
        return character(ind.matrices);
      },
      py::arg("group"), py::arg("subgroup") = "", py::arg("hrep") = "trivial",
      "Character of the induced representation, one value per group element");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one CLI invocation in process; returns (exit code, stdout, stderr)");
}
