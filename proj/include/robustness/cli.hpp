#pragma once

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "robustness/bounds.hpp"
#include "robustness/families.hpp"
#include "robustness/io.hpp"
#include "robustness/pure.hpp"
#include "robustness/solver.hpp"
#include "robustness/volume.hpp"

namespace robustness::cli {

using io::json;

enum class MixedMethod { bounds, solve, automatic };

struct PureCmd {
  std::string state_path;
};
struct MixedCmd {
  std::string state_path;
  MixedMethod method = MixedMethod::automatic;
};
struct PseudomixtureCmd {
  std::string state_path;
  std::string out_path;
};
struct RandomRobustnessCmd {
  std::string state_path;
};
struct VolumeCmd {
  std::vector<int> dims{2, 2};
  long samples = 100000;
  std::optional<std::uint64_t> seed;  // falls back to the global --seed
  int workers = 1;
};
struct CheckSeparableCmd {
  std::string state_path;
};

using Subcommand =
    std::variant<PureCmd, MixedCmd, PseudomixtureCmd, RandomRobustnessCmd, VolumeCmd, CheckSeparableCmd>;

enum class Format { json, csv };

struct Command {
  Subcommand sub;
  Format format = Format::json;
  std::uint64_t seed = 1;
  bool tolerance_report = false;
  SolverConfig solver;  // seed is taken from `seed`
};

enum ExitCode : int { ok = 0, validation_error = 2, not_converged = 3 };

inline MixedMethod parse_method(const std::string& s) {
  if (s == "bounds") return MixedMethod::bounds;
  if (s == "solve") return MixedMethod::solve;
  if (s == "auto") return MixedMethod::automatic;
  throw Error(ErrorKind::parse_error, "method must be bounds, solve or auto");
}

inline const char* to_string(MixedMethod m) {
  switch (m) {
    case MixedMethod::bounds: return "bounds";
    case MixedMethod::solve: return "solve";
    case MixedMethod::automatic: return "auto";
  }
  return "?";
}

/// "2,3" -> {2, 3}.
inline std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || d < 1) {
      throw Error(ErrorKind::parse_error, "dims must be comma-separated positive integers: " + text);
    }
    dims.push_back(d);
  }
  if (dims.empty() || text.back() == ',') throw Error(ErrorKind::parse_error, "bad dims: " + text);
  return dims;
}

namespace detail {

inline json schmidt_json(const SchmidtDecomposition& s) {
  json a = json::array();
  for (double c : s.coefficients) a.push_back(c);
  return a;
}

inline json pure_report(const PureState& psi) {
  require_bipartite(psi.structure(), "pure");
  const SchmidtDecomposition s = schmidt_decompose(psi);
  return {{"schmidt_coefficients", schmidt_json(s)},
          {"entropy", entropy_of_entanglement(s)},
          {"robustness", pure_robustness(s)},
          {"random_robustness", pure_random_robustness(s, psi.structure())}};
}

inline SolverConfig solver_config(const Command& cmd) {
  SolverConfig cfg = cmd.solver;
  cfg.seed = cmd.seed;
  return cfg;
}

struct Outcome {
  json report;
  int code = ExitCode::ok;
};

inline Outcome solve_report(const DensityMatrix& rho, const Command& cmd) {
  const SolverResult r = absolute_robustness(rho, solver_config(cmd));
  json j = {{"method", "solve"},
            {"value", r.value},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"restart_spread", r.restart_spread}};
  return {std::move(j), r.converged ? ExitCode::ok : ExitCode::not_converged};
}

inline json bounds_report(const DensityMatrix& rho) {
  const RobustnessInterval r = combined_interval(rho);
  json j = io::to_json(r);
  j["method"] = "bounds";
  return j;
}

inline Outcome run_mixed(const MixedCmd& m, const Command& cmd) {
  const DensityMatrix rho = io::as_density(io::load_state(m.state_path));
  switch (m.method) {
    case MixedMethod::bounds: return {bounds_report(rho)};
    case MixedMethod::solve: return solve_report(rho, cmd);
    case MixedMethod::automatic: break;
  }
  if (const auto fam = recognize_family(rho)) {
    json j = {{"method", "closed_form"}, {"family", to_string(fam->kind)}, {"value", fam->robustness}};
    if (fam->kind == FamilyKind::werner) {
      j["fidelity"] = fam->werner.fidelity;
    } else {
      const auto& d = fam->diagonal;
      j["params"] = {{"p", d.p}, {"q1", d.q1}, {"q2", d.q2}, {"q3", d.q3}, {"theta", d.theta}};
    }
    return {std::move(j)};
  }
  if (ppt_small_dimension(rho.structure())) return solve_report(rho, cmd);
  return {bounds_report(rho)};
}

inline Outcome run_pseudomixture(const PseudomixtureCmd& p, const Command& cmd) {
  const io::AnyState state = io::load_state(p.state_path);
  json summary;
  json out;
  int code = ExitCode::ok;
  if (const auto* psi = std::get_if<PureState>(&state)) {
    const auto [pm, ensemble] = build_optimal_pseudomixture_pure(*psi);
    out = io::to_json(pm);
    json alphas = json::array();
    for (auto a : ensemble.alphas) alphas.push_back(a);
    out["phase_exponents"] = alphas;
    summary = {{"construction", "analytic"}, {"t", pm.weight}};
  } else {
    const SolverResult r = absolute_robustness(std::get<DensityMatrix>(state), solver_config(cmd));
    out = io::to_json(r.pseudomixture);
    out["converged"] = r.converged;
    summary = {{"construction", "solver"}, {"t", r.pseudomixture.weight}, {"converged", r.converged}};
    if (!r.converged) code = ExitCode::not_converged;
  }
  io::write_json(p.out_path, out);
  summary["out"] = p.out_path;
  return {std::move(summary), code};
}

inline json run_random(const RandomRobustnessCmd& r) {
  const io::AnyState state = io::load_state(r.state_path);
  if (const auto* psi = std::get_if<PureState>(&state)) {
    require_bipartite(psi->structure(), "random robustness");
    const SchmidtDecomposition s = schmidt_decompose(*psi);
    return {{"value", pure_random_robustness(s, psi->structure())}, {"source", "exact"}};
  }
  const DensityMatrix& rho = std::get<DensityMatrix>(state);
  require_bipartite(rho.structure(), "random robustness");
  if (ppt_small_dimension(rho.structure())) {
    return {{"value", random_robustness_numeric(rho)}, {"source", "exact"}};
  }
  const RobustnessInterval b = random_robustness_bounds(rho);
  json j = io::to_json(b);
  j["source"] = "bounds";
  return j;
}

inline json run_check(const CheckSeparableCmd& c) {
  const DensityMatrix rho = io::as_density(io::load_state(c.state_path));
  const SeparabilityVerdict v = is_separable_small(rho);
  json cert = {{"min_eigenvalue_partial_transpose", v.min_eigenvalue}, {"tolerance", v.tolerance}};
  if (v.determinant) cert["determinant_partial_transpose"] = *v.determinant;
  return {{"separable", v.separable}, {"certificate", std::move(cert)}};
}

inline void flatten_csv(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten_csv(j[k], prefix + "." + std::to_string(k), out);
  } else if (j.is_string()) {
    out << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

}  // namespace detail

/// Executes one command. Reports go to `out`, one-line diagnostics to `err`.
inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    detail::Outcome res;
    std::vector<std::uint8_t> flags;
    std::visit(
        [&](const auto& sub) {
          using T = std::decay_t<decltype(sub)>;
          if constexpr (std::is_same_v<T, PureCmd>) {
            const io::AnyState st = io::load_state(sub.state_path);
            const auto* psi = std::get_if<PureState>(&st);
            if (!psi) throw Error(ErrorKind::invalid_state, "pure expects a state vector file");
            res.report = detail::pure_report(*psi);
          } else if constexpr (std::is_same_v<T, MixedCmd>) {
            res = detail::run_mixed(sub, cmd);
          } else if constexpr (std::is_same_v<T, PseudomixtureCmd>) {
            res = detail::run_pseudomixture(sub, cmd);
          } else if constexpr (std::is_same_v<T, RandomRobustnessCmd>) {
            res.report = detail::run_random(sub);
          } else if constexpr (std::is_same_v<T, VolumeCmd>) {
            VolumeConfig cfg;
            cfg.structure = PartyStructure(sub.dims);
            cfg.samples = sub.samples;
            cfg.seed = sub.seed.value_or(cmd.seed);
            cfg.workers = sub.workers;
            cfg.record_flags = cmd.format == Format::csv;
            VolumeReport r = estimate_separable_fraction(cfg);
            flags = std::move(r.flags);
            res.report = io::to_json(r);
            res.report["seed"] = cfg.seed;
            res.report["workers"] = cfg.workers;
          } else {
            res.report = detail::run_check(sub);
          }
        },
        cmd.sub);

    res.report["tolerances"] = io::tolerance_table();
    if (cmd.format == Format::json) {
      out << res.report.dump(2) << '\n';
    } else if (std::holds_alternative<VolumeCmd>(cmd.sub)) {
      out << "sample_index,separable_flag\n";
      for (std::size_t i = 0; i < flags.size(); ++i) out << i << ',' << int(flags[i]) << '\n';
    } else {
      out << "key,value\n";
      detail::flatten_csv(res.report, "", out);
    }
    if (cmd.tolerance_report) {
      for (auto it = res.report["tolerances"].begin(); it != res.report["tolerances"].end(); ++it) {
        err << "tolerance " << it.key() << " = " << it.value().dump() << '\n';
      }
    }
    if (res.code == ExitCode::not_converged) err << "error: not_converged: restarts disagree\n";
    return res.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::not_converged ? ExitCode::not_converged : ExitCode::validation_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::validation_error;
  }
}

}  // namespace robustness::cli
