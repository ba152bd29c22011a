#ifndef VEXLAB_EXPERIMENTS_HPP
#define VEXLAB_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "vexlab/cascade.hpp"
#include "vexlab/config.hpp"
#include "vexlab/modular.hpp"
#include "vexlab/nehari.hpp"
#include "vexlab/pohozaev.hpp"
#include "vexlab/solvers.hpp"

namespace vexlab {

inline constexpr const char* kReportSchema = "1";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNonConvergence = 3 };

/// Result of one scenario, before anything touches the disk.
struct ScenarioOutcome {
  json results = json::object();
  std::map<std::string, json> summary;  // flat scalars, one sweep row
  bool converged = true;
  std::map<std::string, std::string> files;  // artifact name -> contents
};

/// Per-run seed for sweep entry `index`: one splitmix64 step from the master.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Exit code for an error escaping a scenario: bad input is a config error,
/// anything raised by the numerics counts as non-convergence.
inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDomain:
    case ErrorCode::NonElliptic:
    case ErrorCode::ExponentTooLarge:
    case ErrorCode::UnsupportedRegime:
      return kExitConfig;
    default:
      return kExitNonConvergence;
  }
}

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline std::vector<double> default_origin(const Domain& omega) {
  if (omega.kind() == DomainKind::Polygon) return find_star_center(omega).first;
  if (!omega.center().empty()) return omega.center();
  const auto [lo, hi] = omega.bounding_box();
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

inline std::vector<double> origin_of(const json& cfg, const Domain& omega) {
  if (!cfg.contains("origin")) return default_origin(omega);
  auto o = get_as<std::vector<double>>(cfg.at("origin"), "origin");
  if (static_cast<int>(o.size()) != omega.dim()) config_error("origin needs one coordinate per dimension");
  return o;
}

/// Scenario inputs shared by the mesh-based scenarios.
struct Setup {
  Domain omega;
  std::shared_ptr<const Mesh> mesh;
  ExponentField p, q;
  SolveConfig solver;
};

inline Setup make_setup(const ExperimentConfig& c, bool need_q) {
  const Domain omega = parse_domain(c.raw.at("domain"));
  auto mesh = parse_mesh(c.raw, omega, c.base_dir);
  ExponentField p = parse_exponent(c.raw.at("p"), "p", c.base_dir, mesh);
  if (need_q && !c.raw.contains("q")) config_error("missing 'q'");
  ExponentField q = c.raw.contains("q") ? parse_exponent(c.raw.at("q"), "q", c.base_dir, mesh) : p;
  SolveConfig s = parse_solver(c.raw);
  s.seed = c.seed;
  return {omega, std::move(mesh), std::move(p), std::move(q), std::move(s)};
}

/// Field from {"kind": "sine" | "distance" | "random" | "constant" | "nehari" | "file"}.
/// sine is the product of sin over the bounding box, scaled by "amplitude".
inline DiscreteField make_field(const json& spec, const Setup& s, const ExperimentConfig& c, std::uint64_t seed,
                                const std::string& where, std::optional<SolveResult>* candidate = nullptr) {
  const auto type = spec.contains("kind") || spec.contains("type") ? kind_of(spec, where) : std::string("sine");
  const double amp = value_or(spec, "amplitude", 1.0, where);
  const auto& mesh = s.mesh;
  if (type == "sine") {
    const auto [lo, hi] = s.omega.bounding_box();
    return DiscreteField::interpolate(
        mesh,
        [&](const Point& x) {
          double v = amp;
          for (int i = 0; i < mesh->dim(); ++i) v *= std::sin(std::numbers::pi * (x[i] - lo[i]) / (hi[i] - lo[i]));
          return v;
        },
        true);
  }
  if (type == "distance") {
    std::vector<double> v(mesh->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * mesh->boundary_distance(i);
    return DiscreteField(mesh, std::move(v), true);
  }
  if (type == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-amp, amp);
    std::vector<double> v(mesh->num_nodes());
    for (auto& x : v) x = d(rng);
    return DiscreteField(mesh, std::move(v), true);
  }
  if (type == "constant") {
    return DiscreteField(mesh, std::vector<double>(mesh->num_nodes(), value_or(spec, "value", 1.0, where)),
                         value_or(spec, "zero_trace", false, where));
  }
  if (type == "nehari") {
    SolveResult r = nehari_candidate(s.p, s.q, mesh, s.solver, value_or(spec, "polish_switch", 1e-3, where));
    DiscreteField f = r.field;
    if (candidate != nullptr) candidate->emplace(std::move(r));
    return f;
  }
  if (type == "file") {
    const auto path = resolve(c.base_dir, get_as<std::string>(require(spec, "file", where), where + ".file"));
    std::ifstream in(path);
    return DiscreteField(mesh, read_nodal_values(in, mesh->num_nodes()), value_or(spec, "zero_trace", true, where));
  }
  config_error(where + ": unknown field type '" + type + "'");
}

inline json field_spec(const json& cfg, const char* key, const char* fallback) {
  if (cfg.contains(key)) return cfg.at(key);
  return json{{"kind", fallback}};
}

inline std::string nodal_table(const DiscreteField& f) {
  std::ostringstream s;
  write_nodal_values(s, f.values());
  return s.str();
}

inline json solve_json(const SolveResult& r) {
  return {{"energy", r.energy},       {"el_residual", r.el_residual}, {"iterations", r.iterations},
          {"converged", r.converged}, {"diagnostics", r.diagnostics}, {"n", r.n}};
}

inline json pohozaev_json(const PohozaevReport& r) {
  return {{"T1", r.T1},
          {"T2", r.T2},
          {"T3", r.T3},
          {"T4", r.T4},
          {"R_proxy", r.R_proxy},
          {"total", r.total},
          {"classE", r.classE},
          {"classP", r.classP},
          {"identity_gap", r.identity_gap},
          {"p_dagger", r.p_dagger},
          {"p_minus", r.p_minus},
          {"p_plus", r.p_plus},
          {"E_integral", r.E_integral},
          {"E_integral_alt", r.E_integral_alt},
          {"classP_modulars", r.classP_modulars},
          {"dim", r.dim}};
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// n, epsilon, grad_modular, q_modular, boundary_term per cascade level.
inline std::string convergence_csv(const CascadeResult& cas, const RemainderReport& rem) {
  std::ostringstream s;
  s << "n,epsilon,grad_modular,q_modular,boundary_term\n";
  for (std::size_t i = 0; i < cas.runs.size(); ++i)
    for (std::size_t k = 0; k < cas.runs[i].levels.size(); ++k) {
      const auto& l = cas.runs[i].levels[k];
      s << cas.runs[i].n << ',' << fmt(l.epsilon) << ',' << fmt(l.grad_modular) << ',' << fmt(l.q_modular) << ','
        << fmt(rem.table[i][k]) << '\n';
    }
  return s.str();
}

}  // namespace detail

inline ScenarioOutcome run_spaces_check(const ExperimentConfig& c) {
  const auto s = detail::make_setup(c, false);
  ScenarioOutcome o;
  const DiscreteField u = detail::make_field(detail::field_spec(c.raw, "field", "sine"), s, c, c.seed, "field");
  const DiscreteField v =
      detail::make_field(detail::field_spec(c.raw, "holder_partner", "random"), s, c, derive_seed(c.seed, 0),
                         "holder_partner");
  const auto [p_minus, p_plus] = bounds(s.p, s.omega);
  const auto rel = verify_modular_relations(u, s.p);
  const auto hol = holder_check(u, v, s.p);
  const auto lh = log_holder_estimate(s.p, s.omega, 2000, c.seed);
  const double rho = modular(u, s.p).value;
  const double norm = luxemburg_norm(u, s.p);
  auto& r = o.results;
  r["p_bounds"] = {{"p_minus", p_minus}, {"p_plus", p_plus}};
  r["modular"] = rho;
  r["luxemburg_norm"] = norm;
  r["gradient_modular"] = gradient_modular(u, s.p).value;
  r["gradient_luxemburg_norm"] = gradient_luxemburg_norm(u, s.p);
  r["relations"] = {{"norm", rel.norm},
                    {"rho", rel.rho},
                    {"p_minus", rel.p_minus},
                    {"p_plus", rel.p_plus},
                    {"trichotomy", rel.trichotomy},
                    {"sandwich_applicable", rel.sandwich_applicable},
                    {"lower_slack", rel.lower_slack},
                    {"upper_slack", rel.upper_slack},
                    {"unit_residual", rel.unit_residual},
                    {"pass", rel.pass}};
  r["holder"] = {{"lhs", hol.lhs}, {"rhs", hol.rhs}, {"constant", hol.constant}, {"slack", hol.slack},
                 {"pass", hol.pass}};
  r["log_holder"] = {{"c_hat", lh.c_hat}, {"ball_max", lh.ball_max}, {"pairs", lh.pairs}, {"balls", lh.balls}};
  bool pass = rel.pass && hol.pass;
  if (s.p.is_constant()) {
    // Constant exponent: the Luxemburg norm is the L^p norm.
    const double closed = std::pow(rho, 1.0 / s.p.constant_value());
    const double err = std::abs(norm - closed) / std::max(1.0, closed);
    r["constant_exponent_check"] = {{"closed_form", closed}, {"relative_error", err}, {"pass", err <= 1e-8}};
    pass = pass && err <= 1e-8;
  }
  if (c.raw.contains("q") && p_plus < s.omega.dim())
    r["embedding_gap"] = embedding_gap(s.p, s.q, s.omega, s.omega.dim());
  r["pass"] = pass;
  o.summary = {{"pass", pass},         {"norm", norm},           {"rho", rho},
               {"unit_residual", rel.unit_residual}, {"holder_slack", hol.slack}, {"p_minus", p_minus},
               {"p_plus", p_plus}};
  return o;
}

inline ScenarioOutcome run_solve(const ExperimentConfig& c) {
  const auto s = detail::make_setup(c, true);
  ScenarioOutcome o;
  const DiscreteField v = detail::make_field(detail::field_spec(c.raw, "source", "sine"), s, c, c.seed, "source");
  const SolveResult r = solve_regularized(v, s.p, s.q, s.solver);
  o.results["solve"] = detail::solve_json(r);
  o.results["epsilon"] = s.solver.epsilon;
  o.results["energy_history"] = r.energy_history;
  o.results["sup_norm"] = r.field.sup_norm();
  o.converged = r.converged;
  o.files["solution_values.txt"] = detail::nodal_table(r.field);
  o.summary = {{"energy", r.energy}, {"el_residual", r.el_residual}, {"iterations", r.iterations},
               {"converged", r.converged}};
  return o;
}

namespace detail {

struct CascadeRun {
  CascadeResult cascade;
  RemainderReport remainder;
};

inline CascadeRun cascade_with_remainder(const DiscreteField& u, const Setup& s, std::span<const double> origin) {
  CascadeRun out{cascade(u, s.p, s.q, s.solver), {}};
  out.remainder = remainder_R(out.cascade.runs, s.p, origin);
  return out;
}

inline json cascade_json(const CascadeRun& cr) {
  json runs = json::array();
  for (std::size_t i = 0; i < cr.cascade.runs.size(); ++i) {
    json r = solve_json(cr.cascade.runs[i]);
    r["grad_gap"] = cr.cascade.grad_gap[i];
    r["q_gap"] = cr.cascade.q_gap[i];
    r["remainder_inner"] = cr.remainder.inner[i];
    runs.push_back(std::move(r));
  }
  return {{"runs", runs},
          {"u_grad_modular", cr.cascade.u_grad_modular},
          {"u_q_modular", cr.cascade.u_q_modular},
          {"converged", cr.cascade.converged},
          {"remainder",
           {{"value", cr.remainder.value},
            {"p_dagger", cr.remainder.p_dagger},
            {"p_plus", cr.remainder.p_plus},
            {"outer", cr.remainder.outer}}}};
}

}  // namespace detail

inline ScenarioOutcome run_cascade(const ExperimentConfig& c) {
  const auto s = detail::make_setup(c, true);
  ScenarioOutcome o;
  std::optional<SolveResult> cand;
  const DiscreteField u = detail::make_field(detail::field_spec(c.raw, "field", "nehari"), s, c, c.seed, "field", &cand);
  const auto origin = detail::origin_of(c.raw, s.omega);
  const auto cr = detail::cascade_with_remainder(u, s, origin);
  o.results["cascade"] = detail::cascade_json(cr);
  o.results["origin"] = origin;
  if (cand) o.results["candidate"] = detail::solve_json(*cand);
  o.converged = cr.cascade.converged && (!cand || cand->converged);
  o.files["convergence.csv"] = detail::convergence_csv(cr.cascade, cr.remainder);
  o.summary = {{"grad_gap", cr.cascade.grad_gap.back()},
               {"q_gap", cr.cascade.q_gap.back()},
               {"remainder", cr.remainder.value},
               {"converged", o.converged}};
  return o;
}

inline ScenarioOutcome run_pohozaev(const ExperimentConfig& c) {
  const auto s = detail::make_setup(c, true);
  ScenarioOutcome o;
  std::optional<SolveResult> cand;
  const DiscreteField u = detail::make_field(detail::field_spec(c.raw, "field", "nehari"), s, c, c.seed, "field", &cand);
  const auto origin = detail::origin_of(c.raw, s.omega);
  PohozaevReport rep = pohozaev_terms(u, s.p, s.q, origin, detail::value_or(c.raw, "tol", 1e-10, "config"));
  o.converged = !cand || cand->converged;
  if (detail::value_or(c.raw, "remainder", true, "config")) {
    const auto cr = detail::cascade_with_remainder(u, s, origin);
    rep.set_remainder(cr.remainder.value);
    o.results["cascade"] = detail::cascade_json(cr);
    o.files["convergence.csv"] = detail::convergence_csv(cr.cascade, cr.remainder);
    o.converged = o.converged && cr.cascade.converged;
  }
  const auto radial = rhs_radial_identity_check(u, s.q, origin);
  o.results["terms"] = detail::pohozaev_json(rep);
  o.results["radial_identity"] = {{"lhs", radial.lhs}, {"rhs", radial.rhs}, {"gap", radial.gap}};
  o.results["origin"] = origin;
  if (cand) o.results["candidate"] = detail::solve_json(*cand);
  o.summary = {{"T1", rep.T1},         {"T2", rep.T2},         {"T3", rep.T3},   {"T4", rep.T4},
               {"R_proxy", rep.R_proxy}, {"total", rep.total}, {"classE", rep.classE}, {"classP", rep.classP},
               {"converged", o.converged}};
  return o;
}

inline ScenarioOutcome run_verdict(const ExperimentConfig& c) {
  const Domain omega = parse_domain(c.raw.at("domain"));
  std::shared_ptr<const Mesh> mesh;
  if (c.raw.contains("mesh") && c.raw.at("mesh").contains("file")) mesh = parse_mesh(c.raw, omega, c.base_dir);
  const ExponentField p = parse_exponent(c.raw.at("p"), "p", c.base_dir, mesh);
  const ExponentField q = parse_exponent(c.raw.at("q"), "q", c.base_dir, mesh);
  const int N = detail::value_or(c.raw, "N", omega.dim(), "config");
  std::optional<std::vector<double>> origin;
  if (c.raw.contains("origin")) origin = detail::origin_of(c.raw, omega);
  const Verdict v = verdict(omega, p, q, N, origin, detail::value_or(c.raw, "tol", kVerdictTol, "config"),
                            SamplingPlan{detail::value_or(c.raw, "sampling", 64, "config")});
  ScenarioOutcome o;
  o.results = {{"applies", v.applies}, {"case", to_string(v.which)}, {"reason", v.reason}, {"details", v.details}};
  o.summary = {{"applies", v.applies}, {"case", to_string(v.which)}};
  for (const char* k : {"q_minus", "critical_exponent", "p_plus"})
    if (v.details.count(k) != 0) o.summary[k] = v.details.at(k);
  return o;
}

inline ScenarioOutcome run_single(const ExperimentConfig& c) {
  switch (c.scenario) {
    case Scenario::SpacesCheck: return run_spaces_check(c);
    case Scenario::Solve: return run_solve(c);
    case Scenario::Cascade: return run_cascade(c);
    case Scenario::Pohozaev: return run_pohozaev(c);
    case Scenario::Verdict: return run_verdict(c);
    case Scenario::Sweep: break;
  }
  throw Error(ErrorCode::ConfigError, "sweeps cannot nest");
}

struct SweepRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  json axes = json::object();  // pointer -> value
  int status = kExitOk;
  std::string error;
  ScenarioOutcome outcome;
};

/// Cartesian product of the sweep axes (pointers in lexicographic order, the
/// last axis varying fastest).
inline std::vector<json> sweep_points(const json& axes) {
  std::vector<json> out{json::object()};
  for (const auto& [ptr, vals] : axes.items()) {
    std::vector<json> next;
    for (const auto& partial : out)
      for (const auto& v : vals) {
        json j = partial;
        j[ptr] = v;
        next.push_back(std::move(j));
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<SweepRow> run_sweep_rows(const ExperimentConfig& c) {
  const json& sw = c.raw.at("sweep");
  json base = c.raw;
  base.erase("sweep");
  base["scenario"] = sw.at("scenario");
  const auto points = sweep_points(sw.at("axes"));
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.index = i;
      row.seed = derive_seed(c.seed, i);
      row.axes = points[i];
      try {
        json patched = base;
        for (const auto& [ptr, v] : points[i].items()) patched[json::json_pointer(ptr)] = v;
        patched["seed"] = row.seed;
        const ExperimentConfig sub = parse_config(patched, c.base_dir);
        row.outcome = run_single(sub);
        if (!row.outcome.converged) row.status = kExitNonConvergence;
      } catch (const Error& e) {
        row.status = exit_code_for(e.code());
        row.error = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const json::exception& e) {
        row.status = kExitConfig;
        row.error = e.what();
      }
    }
  };
  const int workers = std::min<int>(detail::value_or(sw, "workers", 1, "sweep"), static_cast<int>(rows.size()));
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

namespace detail {

inline std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

}  // namespace detail

inline std::string sweep_csv(const std::vector<SweepRow>& rows, const json& axes) {
  std::vector<std::string> keys;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.outcome.summary)
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::ostringstream s;
  s << "run,seed";
  for (const auto& [ptr, vals] : axes.items()) s << ',' << ptr;
  s << ",status";
  for (const auto& k : keys) s << ',' << k;
  s << '\n';
  for (const auto& r : rows) {
    s << r.index << ',' << r.seed;
    for (const auto& [ptr, vals] : axes.items()) s << ',' << detail::csv_cell(r.axes.at(ptr));
    s << ',' << r.status;
    for (const auto& k : keys) {
      s << ',';
      const auto it = r.outcome.summary.find(k);
      if (it != r.outcome.summary.end()) s << detail::csv_cell(it->second);
    }
    s << '\n';
  }
  return s.str();
}

/// Everything run() would write, keyed by file name, plus the exit code.
struct RunArtifacts {
  int exit_code = kExitOk;
  std::map<std::string, std::string> files;
  json report;
};

inline RunArtifacts execute(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = detail::utc_now();
  RunArtifacts a;
  json& rep = a.report;
  rep["schema"] = kReportSchema;
  rep["scenario"] = to_string(c.scenario);
  rep["seed"] = c.seed;
  rep["config"] = c.raw;
  if (c.scenario == Scenario::Sweep) {
    const auto rows = run_sweep_rows(c);
    json jr = json::array();
    bool converged = true;
    for (const auto& r : rows) {
      jr.push_back({{"run", r.index},
                    {"seed", r.seed},
                    {"axes", r.axes},
                    {"status", r.status},
                    {"error", r.error},
                    {"converged", r.status == kExitOk && r.outcome.converged},
                    {"results", r.outcome.results}});
      converged = converged && r.status == kExitOk;
      if (r.status == kExitConfig) a.exit_code = kExitConfig;
      if (r.status == kExitNonConvergence && a.exit_code == kExitOk) a.exit_code = kExitNonConvergence;
    }
    rep["runs"] = std::move(jr);
    rep["converged"] = converged;
    a.files["sweep.csv"] = sweep_csv(rows, c.raw.at("sweep").at("axes"));
  } else {
    try {
      ScenarioOutcome o = run_single(c);
      rep["results"] = std::move(o.results);
      rep["converged"] = o.converged;
      a.files = std::move(o.files);
      if (!o.converged) a.exit_code = kExitNonConvergence;
    } catch (const Error& e) {
      a.exit_code = exit_code_for(e.code());
      if (a.exit_code == kExitConfig) throw;
      rep["converged"] = false;
      rep["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    }
  }
  rep["metadata"] = {{"started_utc", started},
                     {"finished_utc", detail::utc_now()},
                     {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  a.files["report.json"] = rep.dump(2) + "\n";
  return a;
}

/// Runs the scenario and writes its artifacts under out_dir. Returns the exit
/// code: 0 success, 2 config error, 3 non-convergence.
inline int run(const ExperimentConfig& c, std::ostream* log = nullptr) {
  RunArtifacts a;
  try {
    a = execute(c);
  } catch (const Error& e) {
    if (exit_code_for(e.code()) != kExitConfig) throw;
    if (log != nullptr) *log << "config error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitConfig;
  }
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + c.out_dir.string());
  for (const auto& [name, body] : a.files) {
    std::ofstream out(c.out_dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (c.out_dir / name).string());
    out << body;
  }
  return a.exit_code;
}

}  // namespace vexlab

#endif  // VEXLAB_EXPERIMENTS_HPP
