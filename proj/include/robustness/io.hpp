#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "robustness/bounds.hpp"
#include "robustness/pure.hpp"
#include "robustness/solver.hpp"
#include "robustness/state.hpp"
#include "robustness/volume.hpp"

namespace robustness::io {

using json = nlohmann::json;
using AnyState = std::variant<DensityMatrix, PureState>;

namespace detail {

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::parse_error, "complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline PartyStructure dims_from_json(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw Error(ErrorKind::parse_error, "missing \"dims\" array");
  }
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw Error(ErrorKind::parse_error, "dims must be integers");
    dims.push_back(d.get<int>());
  }
  return PartyStructure(dims);
}

}  // namespace detail

inline json to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (int r = 0; r < rho.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < rho.dim(); ++c) row.push_back(detail::complex_to_json(rho.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dims", rho.structure().dims()}, {"matrix", std::move(rows)}};
}

inline json to_json(const PureState& psi) {
  json v = json::array();
  for (Eigen::Index k = 0; k < psi.vector().size(); ++k) v.push_back(detail::complex_to_json(psi.vector()(k)));
  return {{"dims", psi.structure().dims()}, {"vector", std::move(v)}};
}

inline DensityMatrix density_from_json(const json& j) {
  const PartyStructure s = detail::dims_from_json(j);
  const json& rows = j.at("matrix");
  const int n = s.total();
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw Error(ErrorKind::parse_error, "\"matrix\" must have " + std::to_string(n) + " rows");
  }
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw Error(ErrorKind::parse_error, "row " + std::to_string(r) + " has wrong length");
    }
    for (int c = 0; c < n; ++c) m(r, c) = detail::complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return DensityMatrix(s, std::move(m));
}

inline PureState pure_from_json(const json& j) {
  const PartyStructure s = detail::dims_from_json(j);
  const json& v = j.at("vector");
  if (!v.is_array() || static_cast<int>(v.size()) != s.total()) {
    throw Error(ErrorKind::parse_error, "\"vector\" must have " + std::to_string(s.total()) + " entries");
  }
  ComplexVector vec(s.total());
  for (int k = 0; k < s.total(); ++k) vec(k) = detail::complex_from_json(v[static_cast<std::size_t>(k)]);
  return PureState(s, std::move(vec));
}

inline AnyState state_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse_error, "state must be a JSON object");
  if (j.contains("matrix")) return density_from_json(j);
  if (j.contains("vector")) return pure_from_json(j);
  throw Error(ErrorKind::parse_error, "state needs \"matrix\" or \"vector\"");
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
}

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return state_from_json(parse_text(buf.str()));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
}

inline DensityMatrix as_density(const AnyState& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return psi->density();
  return std::get<DensityMatrix>(s);
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::parse_error, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline json to_json(const Pseudomixture& pm) {
  return {{"t", pm.weight}, {"plus", to_json(pm.plus)}, {"minus", to_json(pm.minus)}};
}

inline Pseudomixture pseudomixture_from_json(const json& j) {
  return {density_from_json(j.at("plus")), density_from_json(j.at("minus")), j.at("t").get<double>()};
}

inline json to_json(const RobustnessInterval& r) {
  return {{"lower", r.lower},
          {"upper", r.upper},
          {"lower_source", to_string(r.lower_source)},
          {"upper_source", to_string(r.upper_source)}};
}

inline json to_json(const SolverResult& r) {
  return {{"value", r.value},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"restart_spread", r.restart_spread},
          {"pseudomixture", to_json(r.pseudomixture)}};
}

inline json to_json(const VolumeReport& r) {
  return {{"fraction_estimate", r.fraction_estimate},
          {"wilson_interval_95", {r.wilson_interval_95.lo, r.wilson_interval_95.hi}},
          {"lower_bound", r.lower_bound},
          {"samples_used", r.samples_used},
          {"separable_count", r.separable_count},
          {"verdict_kind", to_string(r.verdict_kind)}};
}

inline json tolerance_table() {
  return {{"hermitian", tol::hermitian},       {"psd", tol::psd},
          {"trace", tol::trace},               {"pure_norm", tol::pure_norm},
          {"determinant", tol::determinant},   {"rank_cutoff", tol::rank_cutoff},
          {"schmidt_zero", tol::schmidt_zero}, {"degenerate", tol::degenerate},
          {"family_match", tol::family_match}};
}

}  // namespace robustness::io
