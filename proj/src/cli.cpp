#include "ssbkit/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ssbkit/coset_series.hpp"
#include "ssbkit/error.hpp"
#include "ssbkit/gns.hpp"
#include "ssbkit/group_oracle.hpp"
#include "ssbkit/io.hpp"
#include "ssbkit/symmetry.hpp"

namespace ssb::cli {

namespace {

using nlohmann::json;

struct Common {
  bool json_out = false;
  std::string output;
};

struct Report {
  std::string command;
  json inputs = json::object();
  json tolerances = json::object();

  void input(const std::string& role, const std::string& spec) {
    inputs[role] = {{"spec", spec}, {"sha256", io::input_digest(spec)}};
  }

  json header() const {
    return {{"tool", "ssbkit"}, {"version", kVersion}, {"command", command}, {"inputs", inputs}, {"tolerances", tolerances}};
  }
};

std::vector<std::string> labels_of(const FiniteGroup& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(g.labels()[i]);
  return out;
}

ReductiveSplit resolve_split(const LieAlgebra& algebra, const std::string& split_h) {
  if (split_h.empty()) {
    if (!algebra.canonical_split()) throw ValidationError("algebra '" + algebra.name() + "' has no split; pass --split-h");
    return *algebra.canonical_split();
  }
  ReductiveSplit split;
  split.h = io::parse_basis_indices(algebra, split_h);
  for (std::size_t i = 0; i < algebra.dim(); ++i)
    if (algebra.parity(i) == 0 && std::find(split.h.begin(), split.h.end(), i) == split.h.end()) split.f.push_back(i);
  return split;
}

template <class Scalar>
json realization_json(const RealizationOutput<Scalar>& r) {
  return {{"F_prime", io::to_json(r.f_prime)},
          {"I_prime", io::to_json(r.i_prime)},
          {"terms_used", r.terms_used},
          {"last_term_norm", r.last_term_norm},
          {"converged", r.converged}};
}

json matrices_json(std::span<const CMatrix> ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(io::to_json(m));
  return out;
}

json verdict_json(const StarAlgebra& algebra, const SSBVerdict& v) {
  json out = {{"verdict", v.implementable ? "implementable" : "broken"},
              {"carrier_dim", v.carrier_dim},
              {"stationarity_defect", io::clean(v.stationarity_defect)},
              {"unitary", v.unitary ? io::to_json(*v.unitary) : json(nullptr)},
              {"witness", nullptr}};
  if (v.witness) {
    out["witness"] = {{"basis_index", v.witness->basis_index},
                      {"label", algebra.basis_labels()[v.witness->basis_index]},
                      {"spectrum", io::to_json(v.witness->spectrum)},
                      {"rotated_spectrum", io::to_json(v.witness->rotated_spectrum)}};
  }
  return out;
}

std::string summary(const json& report) {
  std::ostringstream s;
  s << "ssbkit " << report["command"].get<std::string>() << " (version " << report["version"].get<std::string>()
    << ")\n";
  for (const auto& [key, value] : report.items()) {
    if (key == "tool" || key == "version" || key == "command" || key == "inputs" || key == "tolerances") continue;
    std::string text = value.dump();
    if (text.size() > 160) text = text.substr(0, 157) + "...";
    s << "  " << key << ": " << text << "\n";
  }
  return s.str();
}

void emit(const json& report, const Common& common, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!common.output.empty()) {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write output file '" + common.output + "'", {{"file", common.output}});
    file << text;
  }
  if (common.json_out) {
    out << text;
  } else if (!report.contains("error")) {
    out << summary(report);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ssbkit: coset realizations, GNS constructions and finite-group symmetry analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  Report report;
  std::function<json()> action;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", common.json_out, "Print the JSON report to stdout");
    sub->add_option("--output", common.output, "Also write the JSON report to this file");
  };

  // coeffs
  int n_coeffs = 8;
  auto* coeffs = app.add_subcommand("coeffs", "Series coefficients l_1..l_n");
  coeffs->add_option("--n", n_coeffs, "Number of coefficients")->check(CLI::Range(1, 400));
  add_common(coeffs);
  coeffs->callback([&] {
    report.command = "coeffs";
    action = [&] {
      auto l = l_coefficients(n_coeffs);
      json arr = json::array();
      for (const auto& x : l) arr.push_back(format_rational(x));
      return json{{"n", n_coeffs}, {"l", arr}};
    };
  });

  // realize
  std::string algebra_spec, gen_text, f_text = "0", i_text = "0", split_h;
  int max_order = 20;
  double tol = 1e-12, eps = 1e-5;
  bool exact = false;
  auto* realize_cmd = app.add_subcommand("realize", "Coset realization series at a point F");
  realize_cmd->add_option("--algebra", algebra_spec, "Algebra file or catalog name")->required();
  realize_cmd->add_option("--gen", gen_text, "Generator, e.g. X or X=1/2,Y=1")->required();
  realize_cmd->add_option("--F", f_text, "Point F in f");
  realize_cmd->add_option("--split-h", split_h, "Labels spanning h (default: the algebra's split)");
  realize_cmd->add_option("--max-order", max_order, "Highest series order")->check(CLI::Range(1, 400));
  realize_cmd->add_option("--tol", tol, "Series truncation tolerance")->check(CLI::PositiveNumber);
  realize_cmd->add_flag("--exact", exact, "Rational arithmetic");
  add_common(realize_cmd);
  realize_cmd->callback([&] {
    report.command = "realize";
    report.input("algebra", algebra_spec);
    report.tolerances = {{"tol", tol}, {"max_order", max_order}};
    action = [&] {
      auto loaded = io::load_algebra(algebra_spec);
      const auto& algebra = *loaded.algebra;
      const ReductiveSplit split = resolve_split(algebra, split_h);
      const ExactElement gen = io::parse_element(loaded.algebra, gen_text);
      const ExactElement F = io::parse_element(loaded.algebra, f_text);
      const RealizationConfig cfg{max_order, tol};
      json result = {{"algebra", algebra.name()},
                     {"basis", algebra.basis_labels()},
                     {"split", {{"h", split.h}, {"f", split.f}}},
                     {"gen", io::to_json(gen)},
                     {"F", io::to_json(F)},
                     {"arithmetic", exact ? "exact" : "float"}};
      json body;
      if (exact) {
        body = realization_json(algebra.is_graded() ? realize_even_super(gen, F, split, cfg) : realize(gen, F, split, cfg));
      } else {
        const Element g = to_float(gen), x = to_float(F);
        body = realization_json(algebra.is_graded() ? realize_even_super(g, x, split, cfg) : realize(g, x, split, cfg));
      }
      result.update(body);
      return result;
    };
  });

  // oracle
  std::string op = "velocity";
  double factor_tol = 1e-12;
  auto* oracle = app.add_subcommand("oracle", "Matrix-group factorization and velocity oracle");
  oracle->add_option("--algebra", algebra_spec, "Algebra file with a rep, or catalog name")->required();
  oracle->add_option("--op", op, "velocity or factorize")->check(CLI::IsMember({"velocity", "factorize"}));
  oracle->add_option("--gen", gen_text, "Generator (velocity)");
  oracle->add_option("--F", f_text, "Point F in f");
  oracle->add_option("--I", i_text, "I in h (factorize input exp(F)exp(I))");
  oracle->add_option("--split-h", split_h, "Labels spanning h");
  oracle->add_option("--eps", eps, "Finite-difference step")->check(CLI::PositiveNumber);
  oracle->add_option("--tol", factor_tol, "Factorization residual tolerance")->check(CLI::PositiveNumber);
  oracle->add_option("--max-order", max_order, "Highest series order")->check(CLI::Range(1, 400));
  add_common(oracle);
  oracle->callback([&] {
    report.command = "oracle";
    report.input("algebra", algebra_spec);
    report.tolerances = {{"eps", eps}, {"tol", factor_tol}, {"series_tol", tol}, {"max_order", max_order}};
    action = [&] {
      auto loaded = io::load_algebra(algebra_spec);
      if (!loaded.rep) throw CapabilityError("algebra '" + loaded.algebra->name() + "' has no matrix representation");
      const ReductiveSplit split = resolve_split(*loaded.algebra, split_h);
      const Element F = to_float(io::parse_element(loaded.algebra, f_text));
      const FactorizeOptions fopts{factor_tol, 60};
      json result = {{"algebra", loaded.algebra->name()}, {"basis", loaded.algebra->basis_labels()}, {"op", op}};
      if (op == "factorize") {
        const Element I = to_float(io::parse_element(loaded.algebra, i_text));
        const CMatrix g = exp_element(F, *loaded.rep) * exp_element(I, *loaded.rep);
        auto fr = coset_factorize(g, split, *loaded.rep, fopts);
        result.update({{"F", io::to_json(fr.F)},
                       {"I", io::to_json(fr.I)},
                       {"residual", fr.residual},
                       {"iterations", fr.iterations},
                       {"error_F", (fr.F - F).norm()},
                       {"error_I", (fr.I - I).norm()}});
        return result;
      }
      if (gen_text.empty()) throw ValidationError("--gen is required for the velocity oracle");
      const Element gen = to_float(io::parse_element(loaded.algebra, gen_text));
      auto v = velocity_check(gen, F, split, *loaded.rep, eps, RealizationConfig{max_order, tol}, fopts);
      result.update({{"dF", io::to_json(v.dF)},
                     {"dI", io::to_json(v.dI)},
                     {"series_F", io::to_json(v.series.f_prime)},
                     {"series_I", io::to_json(v.series.i_prime)},
                     {"gap_norms", {{"F", v.gap_F_norm}, {"I", v.gap_I_norm}, {"max", v.gap_norm()}}}});
      return result;
    };
  });

  // gns and ssb
  std::string state_spec, auto_spec, deriv_spec, times_text = "0.1,1.0", gns_op = "gns", rep_kind;
  double gns_tol = 1e-10;
  auto add_star_inputs = [&](CLI::App* sub, bool auto_required) {
    sub->add_option("--algebra", algebra_spec, "*-algebra file or catalog name")->required();
    sub->add_option("--state", state_spec, "State file or catalog state")->required(auto_required);
    auto* a = sub->add_option("--auto", auto_spec, "Automorphism file or catalog name");
    if (auto_required) a->required();
    sub->add_option("--tol", gns_tol, "Tolerance")->check(CLI::PositiveNumber);
    add_common(sub);
  };
  auto star_inputs = [&] {
    report.input("algebra", algebra_spec);
    if (!state_spec.empty()) report.input("state", state_spec);
    if (!auto_spec.empty()) report.input("automorphism", auto_spec);
    if (!deriv_spec.empty()) report.input("derivation", deriv_spec);
    report.tolerances = {{"tol", gns_tol}, {"null_rel", 1e-12}};
  };

  auto* gns = app.add_subcommand("gns", "GNS construction and state/automorphism/derivation analysis");
  add_star_inputs(gns, false);
  gns->add_option("--op", gns_op, "gns, pullback, stationary, ssb, hamiltonian or evolve")
      ->check(CLI::IsMember({"gns", "pullback", "stationary", "ssb", "hamiltonian", "evolve"}));
  gns->add_option("--derivation", deriv_spec, "Derivation file or catalog name");
  gns->add_option("--times", times_text, "Comma-separated times for evolve");
  gns->add_option("--rep", rep_kind, "Representation for hamiltonian/evolve: gns or defining")
      ->check(CLI::IsMember({"gns", "defining"}));
  gns->callback([&] {
    report.command = "gns";
    star_inputs();
    action = [&]() -> json {
      const StarAlgebra algebra = io::load_star_algebra(algebra_spec);
      json result = {{"algebra", algebra.name()}, {"basis", algebra.basis_labels()}, {"op", gns_op}};
      auto need = [](const std::string& spec, const char* flag) {
        if (spec.empty()) throw ValidationError(std::string(flag) + " is required for this --op");
      };
      if (gns_op == "hamiltonian" || gns_op == "evolve") {
        need(deriv_spec, "--derivation");
        const Derivation delta = io::load_derivation(algebra, deriv_spec);
        std::vector<CMatrix> rep;
        const std::string kind = rep_kind.empty() ? (state_spec.empty() ? "defining" : "gns") : rep_kind;
        if (kind == "gns") {
          need(state_spec, "--state");
          rep = gns_construct(algebra, io::load_state(algebra, state_spec), gns_tol).ops;
        } else {
          if (!algebra.has_defining_rep()) throw ValidationError("algebra has no defining representation");
          rep = algebra.defining_rep();
        }
        auto h = derivation_hamiltonian(algebra, rep, delta, gns_tol);
        result.update({{"rep", kind}, {"H", io::to_json(h.H)}, {"residual", h.residual}});
        if (gns_op == "evolve") {
          const auto times = io::parse_doubles(times_text);
          auto ev = evolve_check(rep, h.H, delta, times);
          result.update({{"times", ev.times}, {"deviations", ev.deviations}, {"max_deviation", ev.max_deviation}});
        }
        return result;
      }
      need(state_spec, "--state");
      const State f = io::load_state(algebra, state_spec);
      result["state"] = io::to_json(f.values);
      if (gns_op == "gns") {
        auto rep = gns_construct(algebra, f, gns_tol);
        result.update({{"carrier_dim", rep.carrier_dim},
                       {"theta", io::to_json(rep.theta)},
                       {"ops", matrices_json(rep.ops)},
                       {"checks", check_gns(algebra, f, rep, gns_tol).to_json()}});
        return result;
      }
      need(auto_spec, "--auto");
      const Automorphism rho = io::load_automorphism(algebra, auto_spec);
      if (gns_op == "pullback") {
        const State g = pullback_state(algebra, f, rho);
        result.update({{"pullback", io::to_json(g.values)},
                       {"carrier_dim", gns_construct(algebra, f, gns_tol).carrier_dim},
                       {"pullback_carrier_dim", gns_construct(algebra, g, gns_tol).carrier_dim}});
      } else if (gns_op == "stationary") {
        const CMatrix u = stationary_unitary(algebra, f, rho, gns_tol);
        auto rep = gns_construct(algebra, f, gns_tol);
        double intertwine = 0.0;
        for (std::size_t a = 0; a < algebra.dim(); ++a) {
          const CMatrix target = rep.image(rho.map.col(static_cast<Eigen::Index>(a)));
          intertwine = std::max(intertwine, max_abs(u * rep.ops[a] * u.adjoint() - target));
        }
        const auto k = static_cast<Eigen::Index>(rep.carrier_dim);
        result.update({{"U", io::to_json(u)},
                       {"intertwining_error", intertwine},
                       {"theta_error", (u * rep.theta - rep.theta).cwiseAbs().maxCoeff()},
                       {"unitarity_error", max_abs(u.adjoint() * u - CMatrix::Identity(k, k))}});
      } else {
        result.update(verdict_json(algebra, detect_ssb(algebra, f, rho, gns_tol)));
      }
      return result;
    };
  });

  auto* ssb_cmd = app.add_subcommand("ssb", "Symmetry-breaking verdict for a state and automorphism");
  add_star_inputs(ssb_cmd, true);
  ssb_cmd->callback([&] {
    report.command = "ssb";
    star_inputs();
    action = [&] {
      const StarAlgebra algebra = io::load_star_algebra(algebra_spec);
      const State f = io::load_state(algebra, state_spec);
      const Automorphism rho = io::load_automorphism(algebra, auto_spec);
      json result = {{"algebra", algebra.name()}, {"basis", algebra.basis_labels()}};
      result.update(verdict_json(algebra, detect_ssb(algebra, f, rho, gns_tol)));
      return result;
    };
  });

  // finite groups
  std::string group_spec, mult_spec, subgroup_text, hrep_spec = "trivial", section_text;
  auto add_group_inputs = [&](CLI::App* sub, bool with_multiplier) {
    sub->add_option("--group", group_spec, "Group file or catalog name")->required();
    if (with_multiplier) sub->add_option("--multiplier", mult_spec, "Multiplier file or catalog name")->required();
    add_common(sub);
  };
  auto group_inputs = [&] {
    report.input("group", group_spec);
    if (!mult_spec.empty()) report.input("multiplier", mult_spec);
  };

  auto* cocycle = app.add_subcommand("cocycle", "Check a two-cocycle and solve for a coboundary");
  add_group_inputs(cocycle, true);
  cocycle->add_option("--tol", gns_tol, "Tolerance for numeric multipliers")->check(CLI::PositiveNumber);
  cocycle->callback([&] {
    report.command = "cocycle";
    group_inputs();
    report.tolerances = {{"tol", gns_tol}};
    action = [&] {
      auto g = io::load_group(group_spec);
      const Multiplier k = io::load_multiplier(g.group, mult_spec);
      auto check = verify_cocycle(g.group, k, gns_tol);
      throw_if_invalid(check, "multiplier is not a two-cocycle");
      json result = {{"group", g.group.name()}, {"order", g.group.order()}, {"cocycle", check.to_json()}};
      auto b = coboundary_solve(g.group, k);
      const auto exact_k = k.is_exact() ? k : *k.to_exact();
      result["value_group_order"] = exact_k.value_group_order().str();
      result["is_coboundary"] = b.has_value();
      if (b) {
        json angles = json::array();
        for (const auto& x : *b) angles.push_back(format_rational(x));
        result["b"] = angles;
      } else {
        result["b"] = nullptr;
      }
      return result;
    };
  });

  auto* extend = app.add_subcommand("extend", "Central extension by a cocycle");
  add_group_inputs(extend, true);
  extend->callback([&] {
    report.command = "extend";
    group_inputs();
    action = [&] {
      auto g = io::load_group(group_spec);
      const Multiplier k = io::load_multiplier(g.group, mult_spec);
      auto ext = central_extension(g.group, k);
      return json{{"base_order", g.group.order()},
                  {"fiber_order", ext.fiber_order},
                  {"order", ext.group.order()},
                  {"abelian", ext.group.is_abelian()},
                  {"center", labels_of(ext.group, ext.group.center())},
                  {"labels", ext.group.labels()},
                  {"cayley", ext.group.table()}};
    };
  });

  auto* induce = app.add_subcommand("induce", "Induced representation from a subgroup");
  add_group_inputs(induce, false);
  induce->add_option("--subgroup", subgroup_text, "Subgroup elements (default: from the group input)");
  induce->add_option("--hrep", hrep_spec, "trivial, sign, or a matrices file");
  induce->add_option("--section", section_text, "Coset representatives (default: canonical)");
  induce->callback([&] {
    report.command = "induce";
    group_inputs();
    if (io::is_file(hrep_spec)) report.input("hrep", hrep_spec);
    report.tolerances = {{"tol", 1e-12}};
    action = [&] {
      auto g = io::load_group(group_spec);
      const auto subgroup = subgroup_text.empty() ? g.subgroup : io::parse_group_elements(g.group, subgroup_text);
      const SectionChoice section = section_text.empty()
                                        ? canonical_section(g.group, subgroup)
                                        : SectionChoice{io::parse_group_elements(g.group, section_text)};
      const auto hrep = io::load_subgroup_rep(g.group, subgroup, hrep_spec);
      auto ind = induced_action(g.group, subgroup, section, hrep);
      json classes = json::array();
      for (const auto& c : g.group.conjugacy_classes()) classes.push_back(labels_of(g.group, c));
      json cosets = json::array();
      for (const auto& c : ind.cosets.cosets) cosets.push_back(labels_of(g.group, c));
      return json{{"group", g.group.name()},
                  {"subgroup", labels_of(g.group, subgroup)},
                  {"section", labels_of(g.group, section.reps)},
                  {"cosets", cosets},
                  {"dimension", ind.matrices.front().rows()},
                  {"homomorphism", true},
                  {"character", io::to_json(character(ind.matrices))},
                  {"classes", classes},
                  {"class_character", io::to_json(class_character(g.group, ind.matrices))},
                  {"matrices", matrices_json(ind.matrices)}};
    };
  });

  auto* validate = app.add_subcommand("validate", "Structural validation of inputs");
  validate->add_option("--algebra", algebra_spec, "Lie algebra or *-algebra file or catalog name");
  validate->add_option("--state", state_spec, "State for the *-algebra");
  validate->add_option("--split-h", split_h, "Labels spanning h, checked against the algebra");
  validate->add_option("--group", group_spec, "Group file or catalog name");
  validate->add_option("--multiplier", mult_spec, "Multiplier for the group");
  validate->add_option("--tol", gns_tol, "Tolerance for numeric checks")->check(CLI::PositiveNumber);
  add_common(validate);
  validate->callback([&] {
    report.command = "validate";
    if (!algebra_spec.empty()) report.input("algebra", algebra_spec);
    if (!state_spec.empty()) report.input("state", state_spec);
    if (!group_spec.empty()) report.input("group", group_spec);
    if (!mult_spec.empty()) report.input("multiplier", mult_spec);
    report.tolerances = {{"tol", gns_tol}};
    action = [&] {
      if (algebra_spec.empty() && group_spec.empty()) throw ValidationError("nothing to validate: pass --algebra or --group");
      json checks = json::object();
      bool all_ok = true;
      auto record = [&](const std::string& what, const std::function<json()>& fn) {
        try {
          checks[what] = fn();
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::validation && e.kind() != ErrorKind::precondition) throw;
          checks[what] = {{"valid", false}, {"message", e.what()}, {"details", e.details()}};
        }
        if (!checks[what].value("valid", false)) all_ok = false;
      };
      if (!algebra_spec.empty()) {
        bool star = false;
        if (io::is_file(algebra_spec)) {
          star = io::read_json_file(algebra_spec).contains("m");
        } else {
          auto names = catalog_star_algebra_names();
          star = std::find(names.begin(), names.end(), algebra_spec) != names.end();
        }
        if (star) {
          std::optional<StarAlgebra> algebra;
          record("algebra", [&] {
            algebra.emplace(io::load_star_algebra(algebra_spec));
            return json{{"valid", true}, {"kind", "star"}, {"dim", algebra->dim()}};
          });
          if (algebra && !state_spec.empty()) {
            record("state", [&] { return validate_state(*algebra, io::load_state(*algebra, state_spec), gns_tol).to_json(); });
          }
        } else {
          std::optional<io::LoadedAlgebra> algebra;
          record("algebra", [&] {
            algebra.emplace(io::load_algebra(algebra_spec));
            return json{{"valid", true}, {"kind", "lie"}, {"dim", algebra->algebra->dim()},
                        {"graded", algebra->algebra->is_graded()}};
          });
          if (algebra && (algebra->algebra->canonical_split() || !split_h.empty())) {
            record("split", [&] { return validate_split(*algebra->algebra, resolve_split(*algebra->algebra, split_h)).to_json(); });
          }
        }
      }
      if (!group_spec.empty()) {
        std::optional<io::LoadedGroup> g;
        record("group", [&] {
          g.emplace(io::load_group(group_spec));
          return json{{"valid", true}, {"order", g->group.order()}};
        });
        if (g) record("subgroup", [&] { return check_subgroup(g->group, g->subgroup).to_json(); });
        if (g && !mult_spec.empty()) {
          record("multiplier", [&] { return verify_cocycle(g->group, io::load_multiplier(g->group, mult_spec), gns_tol).to_json(); });
        }
      }
      if (!all_ok) throw ValidationError("validation failed", {{"checks", checks}});
      return json{{"checks", checks}, {"valid", true}};
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    json r = report.header();
    if (report.command.empty()) r["command"] = nullptr;
    r["error"] = {{"kind", "validation"}, {"message", e.what()}, {"details", {{"cli", e.get_name()}}}};
    if (common.json_out) {
      out << r.dump(2) << "\n";
    } else {
      err << "error (validation): " << e.what() << "\n";
    }
    return exit_code(ErrorKind::validation);
  }

  try {
    json r = report.header();
    r.update(action());
    emit(r, common, out);
    return 0;
  } catch (const Error& e) {
    json r = report.header();
    r["error"] = e.to_json();
    try {
      emit(r, common, out);
    } catch (const Error&) {
    }
    if (!common.json_out) err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    json r = report.header();
    r["error"] = {{"kind", "internal"}, {"message", e.what()}, {"details", json::object()}};
    if (common.json_out) out << r.dump(2) << "\n";
    err << "error (internal): " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ssb::cli
