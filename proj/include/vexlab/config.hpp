#ifndef VEXLAB_CONFIG_HPP
#define VEXLAB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vexlab/core.hpp"
#include "vexlab/domain.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/mesh.hpp"
#include "vexlab/mesh_io.hpp"
#include "vexlab/solvers.hpp"

namespace vexlab {

using json = nlohmann::json;

enum class Scenario { SpacesCheck, Solve, Cascade, Pohozaev, Verdict, Sweep };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::SpacesCheck: return "spaces-check";
    case Scenario::Solve: return "solve";
    case Scenario::Cascade: return "cascade";
    case Scenario::Pohozaev: return "pohozaev";
    case Scenario::Verdict: return "verdict";
    case Scenario::Sweep: return "sweep";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s) {
  for (Scenario c : {Scenario::SpacesCheck, Scenario::Solve, Scenario::Cascade, Scenario::Pohozaev, Scenario::Verdict,
                     Scenario::Sweep})
    if (s == to_string(c)) return c;
  throw Error(ErrorCode::ConfigError, "unknown scenario '" + s + "'");
}

/// A parsed experiment. The raw JSON is kept so sweeps can patch it.
struct ExperimentConfig {
  json raw;
  std::filesystem::path base_dir;  // relative paths resolve here
  Scenario scenario = Scenario::Verdict;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) config_error(where + ": missing '" + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(where + ": wrong type");
  }
}

template <typename T>
T value_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_as<T>(j.at(key), where + "." + key);
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path out(p);
  if (out.is_relative()) out = base / out;
  if (!std::filesystem::exists(out)) config_error("referenced file does not exist: " + out.string());
  return out;
}

/// Object discriminator: "kind", with "type" accepted as an alias.
inline std::string kind_of(const json& j, const std::string& where) {
  if (j.is_object() && j.contains("kind")) return get_as<std::string>(j.at("kind"), where + ".kind");
  if (j.is_object() && j.contains("type")) return get_as<std::string>(j.at("type"), where + ".type");
  config_error(where + ": missing 'kind'");
}

inline Point to_point(const std::vector<double>& v, const std::string& where) {
  if (v.empty() || v.size() > 2) config_error(where + ": expected 1 or 2 coordinates");
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

}  // namespace detail

inline Domain parse_domain(const json& j) {
  const std::string where = "domain";
  const auto type = detail::kind_of(j, where);
  try {
    if (type == "interval")
      return Domain::interval(detail::value_or(j, "a", 0.0, where), detail::value_or(j, "b", 1.0, where));
    if (type == "polygon") {
      std::vector<Point> vs;
      for (const auto& v : detail::require(j, "vertices", where))
        vs.push_back(detail::to_point(detail::get_as<std::vector<double>>(v, where), where + ".vertices"));
      return Domain::polygon(std::move(vs));
    }
    if (type == "disk")
      return Domain::disk(
          detail::to_point(detail::value_or(j, "center", std::vector<double>{0.0, 0.0}, where), where + ".center"),
          detail::value_or(j, "radius", 1.0, where));
    if (type == "ball_analytic" || type == "ball") {
      const int dim = detail::value_or(j, "N", 3, where);
      auto c = detail::value_or(j, "center", std::vector<double>(static_cast<std::size_t>(std::max(dim, 1)), 0.0), where);
      return Domain::ball(std::move(c), detail::value_or(j, "radius", 1.0, where));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    detail::config_error(std::string("domain: ") + e.what());
  }
  detail::config_error("domain: unknown type '" + type + "'");
}

/// Mesh from {"h": ...} (generated) or {"file": ...} (text format).
inline std::shared_ptr<const Mesh> parse_mesh(const json& cfg, const Domain& omega, const std::filesystem::path& base) {
  const json m = cfg.contains("mesh") ? cfg.at("mesh") : json::object();
  if (m.contains("file")) {
    const auto path = detail::resolve(base, detail::get_as<std::string>(m.at("file"), "mesh.file"));
    return std::make_shared<const Mesh>(read_mesh_file(path.string()));
  }
  if (!omega.meshable()) detail::config_error("mesh: this domain type cannot be meshed");
  const double h = detail::value_or(m, "h", 0.05, "mesh");
  if (!(h > 0.0)) detail::config_error("mesh.h must be positive");
  return std::make_shared<const Mesh>(build_mesh(omega, h));
}

/// Exponent from a JSON spec. Tabulated exponents read "values <n>" tables,
/// optionally on their own mesh file.
inline ExponentField parse_exponent(const json& j, const std::string& where, const std::filesystem::path& base,
                                    std::shared_ptr<const Mesh> mesh) {
  if (j.is_number()) return ExponentField::constant(j.get<double>());
  const auto type = detail::kind_of(j, where);
  if (type == "constant") return ExponentField::constant(detail::get_as<double>(detail::require(j, "value", where), where));
  if (type == "affine")
    return ExponentField::affine(detail::value_or(j, "a", 0.0, where),
                                 detail::get_as<std::vector<double>>(detail::require(j, "b", where), where));
  if (type == "radial")
    return ExponentField::radial(detail::get_as<double>(detail::require(j, "base", where), where),
                                 detail::value_or(j, "amp", 0.0, where),
                                 detail::value_or(j, "center", std::vector<double>{0.0, 0.0}, where));
  if (type == "tabulated") {
    const auto values_path = detail::resolve(base, detail::get_as<std::string>(detail::require(j, "file", where), where));
    if (j.contains("mesh"))
      mesh = std::make_shared<const Mesh>(
          read_mesh_file(detail::resolve(base, detail::get_as<std::string>(j.at("mesh"), where)).string()));
    if (!mesh) detail::config_error(where + ": tabulated exponent needs a mesh");
    std::ifstream in(values_path);
    return ExponentField::tabulated(mesh, read_nodal_values(in, mesh->num_nodes()));
  }
  detail::config_error(where + ": unknown exponent type '" + type + "'");
}

inline SolveConfig parse_solver(const json& cfg) {
  const json s = cfg.contains("solver") ? cfg.at("solver") : json::object();
  const std::string w = "solver";
  SolveConfig c;
  c.epsilon = detail::value_or(s, "epsilon", c.epsilon, w);
  c.max_iters = detail::value_or(s, "max_iters", c.max_iters, w);
  c.grad_tol = detail::value_or(s, "grad_tol", c.grad_tol, w);
  c.epsilon0 = detail::value_or(s, "epsilon0", c.epsilon0, w);
  c.eps_factor = detail::value_or(s, "eps_factor", c.eps_factor, w);
  c.eps_min = detail::value_or(s, "eps_min", c.eps_min, w);
  c.n_schedule = detail::value_or(s, "n_schedule", c.n_schedule, w);
  c.quadrature_points = detail::value_or(s, "quadrature_points", c.quadrature_points, w);
  c.collapse_tol = detail::value_or(s, "collapse_tol", c.collapse_tol, w);
  const auto method = detail::value_or(s, "method", std::string("newton"), w);
  if (method == "newton")
    c.method = DescentMethod::Newton;
  else if (method == "gradient")
    c.method = DescentMethod::Gradient;
  else
    detail::config_error("solver.method must be 'newton' or 'gradient'");
  if (s.contains("armijo")) {
    const auto& a = s.at("armijo");
    c.line_search.c1 = detail::value_or(a, "c1", c.line_search.c1, w + ".armijo");
    c.line_search.shrink = detail::value_or(a, "shrink", c.line_search.shrink, w + ".armijo");
    c.line_search.max_backtracks = detail::value_or(a, "max_backtracks", c.line_search.max_backtracks, w + ".armijo");
  }
  c.validate();
  return c;
}

/// Validates scenario-specific fields and file references up front.
inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) detail::config_error("config must be a JSON object");
  ExperimentConfig c;
  c.raw = j;
  c.base_dir = base_dir;
  c.scenario = parse_scenario(detail::get_as<std::string>(detail::require(j, "scenario", "config"), "scenario"));
  c.seed = detail::value_or<std::uint64_t>(j, "seed", 42, "config");
  if (j.contains("output")) c.out_dir = detail::value_or(j.at("output"), "dir", std::string("out"), "output");
  (void)parse_solver(j);

  if (c.scenario == Scenario::Sweep) {
    const auto& sw = detail::require(j, "sweep", "config");
    const auto base = detail::get_as<std::string>(detail::require(sw, "scenario", "sweep"), "sweep.scenario");
    if (parse_scenario(base) == Scenario::Sweep) detail::config_error("sweep.scenario cannot be 'sweep'");
    const auto& axes = detail::require(sw, "axes", "sweep");
    if (!axes.is_object() || axes.empty()) detail::config_error("sweep.axes must be a non-empty object");
    for (const auto& [ptr, vals] : axes.items()) {
      if (!vals.is_array() || vals.empty()) detail::config_error("sweep axis '" + ptr + "' needs a non-empty array");
      try {
        (void)json::json_pointer(ptr);
      } catch (const json::exception&) {
        detail::config_error("sweep axis '" + ptr + "' is not a JSON pointer");
      }
    }
    if (detail::value_or(sw, "workers", 1, "sweep") < 1) detail::config_error("sweep.workers must be >= 1");
    return c;
  }

  const Domain omega = parse_domain(detail::require(j, "domain", "config"));
  if (c.scenario != Scenario::Verdict) {
    (void)detail::require(j, "p", "config");
    if (!omega.meshable() && !(j.contains("mesh") && j.at("mesh").contains("file")))
      detail::config_error("scenario '" + std::string(to_string(c.scenario)) + "' needs a meshable domain");
  } else {
    (void)detail::require(j, "p", "config");
    (void)detail::require(j, "q", "config");
  }
  if (c.scenario == Scenario::Solve || c.scenario == Scenario::Cascade || c.scenario == Scenario::Pohozaev)
    (void)detail::require(j, "q", "config");
  // Catch bad file references before any work starts.
  for (const char* key : {"p", "q"})
    if (j.contains(key) && j.at(key).is_object() && detail::kind_of(j.at(key), key) == "tabulated") {
      (void)detail::resolve(base_dir, detail::get_as<std::string>(detail::require(j.at(key), "file", key), key));
      if (j.at(key).contains("mesh")) (void)detail::resolve(base_dir, j.at(key).at("mesh").get<std::string>());
    }
  if (j.contains("mesh") && j.at("mesh").contains("file"))
    (void)detail::resolve(base_dir, detail::get_as<std::string>(j.at("mesh").at("file"), "mesh.file"));
  for (const char* key : {"field", "source"})
    if (j.contains(key) && j.at(key).contains("file"))
      (void)detail::resolve(base_dir, detail::get_as<std::string>(j.at(key).at("file"), key));
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::config_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    detail::config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace vexlab

#endif  // VEXLAB_CONFIG_HPP
