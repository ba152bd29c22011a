#ifndef VEXLAB_POHOZAEV_HPP
#define VEXLAB_POHOZAEV_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/domain.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/modular.hpp"
#include "vexlab/quadrature.hpp"
#include "vexlab/solvers.hpp"

namespace vexlab {

/// Values of t below this are treated as 0 in t (log t - 1).
inline constexpr double kLogGuard = 1e-300;

/// t (log t - 1), continuously extended by 0 at t = 0.
inline double log_energy(double t) { return t < kLogGuard ? 0.0 : t * (std::log(t) - 1.0); }

inline Point shifted(const Point& x, std::span<const double> origin) {
  return {x[0] - (origin.size() > 0 ? origin[0] : 0.0), x[1] - (origin.size() > 1 ? origin[1] : 0.0)};
}

struct PohozaevReport {
  double T1 = 0.0;  // -integral N/q |u|^q
  double T2 = 0.0;  // integral (N - p)/p |grad u|^p
  double T3 = 0.0;  // integral (x.grad p)/p^2 |grad u|^p (log|grad u|^p - 1)
  double T4 = 0.0;  // integral (x.grad q)/q^2 |u|^q (log|u|^q - 1)
  double R_proxy = 0.0;
  double total = 0.0;  // T1 + T2 + T3 - T4 + R_proxy
  bool classE = true;
  bool classP = true;
  double identity_gap = 0.0;  // |integral |u|^q - integral |grad u|^p|
  double p_dagger = 0.0;      // min(2, p-)
  double p_minus = 0.0;
  double p_plus = 0.0;
  double E_integral = 0.0;      // T3 - T4
  double E_integral_alt = 0.0;  // same quantity from the log-quotient form
  std::vector<double> classP_modulars;  // per coordinate
  int dim = 0;

  void set_remainder(double r) {
    R_proxy = r;
    total = T1 + T2 + T3 - T4 + R_proxy;
  }
};

/// Exponent range over mesh nodes and quadrature points.
inline std::pair<double, double> mesh_exponent_range(const Mesh& m, const ExponentField& p,
                                                     int points = kDefaultQuadraturePoints) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x : m.nodes()) {
    const double v = p.value_at(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const CellQuadrature quad(m, make_quadrature(m.dim(), points));
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double v = p.value_at(quad.x(k));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

/// Volume terms of the Pohozaev-type inequality for u, with x measured from
/// origin. R_proxy is left at 0; see remainder_R.
inline PohozaevReport pohozaev_terms(const DiscreteField& u, const ExponentField& p, const ExponentField& q,
                                     std::span<const double> origin, double tol = 1e-10,
                                     int points = kDefaultQuadraturePoints) {
  const Mesh& m = u.mesh();
  const int N = m.dim();
  const ExponentField pc = conjugate(p);
  PohozaevReport r;
  r.dim = N;
  r.classP_modulars.assign(static_cast<std::size_t>(N), 0.0);
  double grad_mod = 0.0, q_mod = 0.0;
  const CellQuadrature quad(m, make_quadrature(N, points));
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t c = quad.cell_of(k);
    const Point& x = quad.x(k);
    const Point xs = shifted(x, origin);
    const double w = quad.weight(k);
    const double pp = p.value_at(x), qq = q.value_at(x);
    const Point g = u.cell_gradient(c);
    const double gn = norm(g);
    const double un = u.at(c, quad.bary(k));
    const double au = std::abs(un);
    const double gp = gn > 0.0 ? std::pow(gn, pp) : 0.0;  // |grad u|^p
    const double uq = au > 0.0 ? std::pow(au, qq) : 0.0;  // |u|^q
    const double xdp = dot(xs, p.gradient_at(x));
    const double xdq = dot(xs, q.gradient_at(x));
    const double t1 = -N / qq * uq;
    const double t2 = (N - pp) / pp * gp;
    const double t3 = xdp == 0.0 ? 0.0 : xdp / (pp * pp) * log_energy(gp);
    const double t4 = xdq == 0.0 ? 0.0 : xdq / (qq * qq) * log_energy(uq);
    // log-quotient form: (x.grad p)/p |grad u|^p (log|grad u| - 1/p), same for q.
    const double e3 = xdp == 0.0 || gp < kLogGuard ? 0.0 : xdp / pp * gp * (std::log(gn) - 1.0 / pp);
    const double e4 = xdq == 0.0 || uq < kLogGuard ? 0.0 : xdq / qq * uq * (std::log(au) - 1.0 / qq);
    for (double v : {t1, t2, t3, t4, e3, e4})
      if (!std::isfinite(v)) detail::non_finite(x, v);
    r.T1 += w * t1;
    r.T2 += w * t2;
    r.T3 += w * t3;
    r.T4 += w * t4;
    r.E_integral_alt += w * (e3 - e4);
    grad_mod += w * gp;
    q_mod += w * uq;
    // x_i |u|^(q-2) u in L^p'(x)
    const double ppc = pc.value_at(x);
    const double base = au > 0.0 ? std::pow(au, qq - 1.0) : 0.0;
    for (int i = 0; i < N; ++i) {
      const double f = std::abs(xs[i]) * base;
      if (f > 0.0) r.classP_modulars[i] += w * std::pow(f, ppc);
    }
  }
  r.E_integral = r.T3 - r.T4;
  r.classE = r.E_integral >= -tol;
  r.classP = std::all_of(r.classP_modulars.begin(), r.classP_modulars.end(), [](double v) { return std::isfinite(v); });
  r.identity_gap = std::abs(q_mod - grad_mod);
  std::tie(r.p_minus, r.p_plus) = mesh_exponent_range(m, p, points);
  r.p_dagger = std::min(2.0, r.p_minus);
  r.set_remainder(0.0);
  return r;
}

/// integral over the boundary of (|grad w|^2 + eps)^(p/2) (x.nu), with grad w
/// taken from the cell adjacent to each facet.
inline double boundary_term(const DiscreteField& w, const ExponentField& p, double eps, std::span<const double> origin,
                            int points = 2) {
  const Mesh& m = w.mesh();
  return boundary_integral(
      m,
      [&](const Point& x, const Point& nu, std::size_t fi) {
        const Point g = w.cell_gradient(m.boundary_facets()[fi].cell);
        return std::pow(dot(g, g) + eps, 0.5 * p.value_at(x)) * dot(shifted(x, origin), nu);
      },
      points);
}

struct RemainderReport {
  double value = 0.0;  // ((p_dagger - 1)/p+) * outer
  double p_dagger = 0.0;
  double p_plus = 0.0;
  double outer = 0.0;               // max over trailing n of the inner proxies
  std::vector<double> inner;        // per run: max over trailing epsilon levels
  std::vector<std::vector<double>> table;  // boundary term per (run, level)
};

/// Proxy for the boundary remainder: limsup in eps, then in n, replaced by
/// maxima over the trailing half of each schedule.
inline RemainderReport remainder_R(const std::vector<SolveResult>& runs, const ExponentField& p,
                                   std::span<const double> origin) {
  if (runs.size() < 2) throw Error(ErrorCode::InsufficientRuns, "need at least 2 cutoff levels");
  for (const auto& r : runs)
    if (r.levels.size() < 2) throw Error(ErrorCode::InsufficientRuns, "need at least 2 epsilon levels per run");
  RemainderReport out;
  const Mesh& m = runs.front().field.mesh();
  const auto [p_minus, p_plus] = mesh_exponent_range(m, p);
  out.p_plus = p_plus;
  out.p_dagger = std::min(2.0, p_minus);
  for (const auto& run : runs) {
    std::vector<double> row;
    for (const auto& lvl : run.levels) row.push_back(boundary_term(*lvl.field, p, lvl.epsilon, origin));
    const std::size_t start = row.size() / 2;
    out.inner.push_back(*std::max_element(row.begin() + static_cast<std::ptrdiff_t>(start), row.end()));
    out.table.push_back(std::move(row));
  }
  const std::size_t start = out.inner.size() / 2;
  out.outer = *std::max_element(out.inner.begin() + static_cast<std::ptrdiff_t>(start), out.inner.end());
  out.value = (out.p_dagger - 1.0) / out.p_plus * out.outer;
  return out;
}

enum class VerdictCase { None, I, II };

inline const char* to_string(VerdictCase c) {
  switch (c) {
    case VerdictCase::I: return "i";
    case VerdictCase::II: return "ii";
    case VerdictCase::None: break;
  }
  return "none";
}

struct Verdict {
  bool applies = false;
  VerdictCase which = VerdictCase::None;
  std::map<std::string, double> details;
  std::string reason;
};

inline constexpr double kVerdictTol = 1e-9;

/// Nonexistence verdict. Case i: star-shaped and q- > (p+)*. Case ii:
/// strictly star-shaped and q- = (p+)* (solutions of one sign). Without an
/// origin, polygons search for a star center; other shapes use their center.
inline Verdict verdict(const Domain& omega, const ExponentField& p, const ExponentField& q, int N,
                       std::optional<std::vector<double>> origin = {}, double tol = kVerdictTol,
                       SamplingPlan sampling = {}) {
  if (N != omega.dim()) throw Error(ErrorCode::InvalidArgument, "N must equal the domain dimension");
  const auto [p_minus, p_plus] = bounds(p, omega, sampling);
  const auto [q_minus, q_plus] = bounds(q, omega, sampling);
  if (!(p_plus < N)) throw Error(ErrorCode::ExponentTooLarge, "p+ >= N, critical exponent is infinite");
  const double critical = N * p_plus / (N - p_plus);
  Verdict v;
  v.details["p_minus"] = p_minus;
  v.details["p_plus"] = p_plus;
  v.details["q_minus"] = q_minus;
  v.details["q_plus"] = q_plus;
  v.details["critical_exponent"] = critical;
  v.details["coefficient"] = (N - p_plus) / p_plus - N / q_minus;
  StarShapeReport star;
  if (origin) {
    star = star_shape_report(omega, *origin);
  } else if (omega.kind() == DomainKind::Polygon) {
    try {
      star = find_star_center(omega).second;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotStarShaped) throw;
      v.reason = "domain is not star-shaped about any tested origin";
      v.details["is_star"] = 0.0;
      return v;
    }
  } else {
    star = star_shape_report(omega, omega.center());
  }
  v.details["min_xdotnu"] = star.min_xdotnu;
  v.details["strict_rho"] = star.strict_rho;
  v.details["is_star"] = star.is_star ? 1.0 : 0.0;
  for (std::size_t i = 0; i < star.origin.size(); ++i) v.details["origin_" + std::to_string(i)] = star.origin[i];
  if (star.is_star && q_minus > critical + tol) {
    v.applies = true;
    v.which = VerdictCase::I;
    v.reason = "star-shaped and supercritical";
  } else if (star.strict_rho > kTolGeom && std::abs(q_minus - critical) <= tol) {
    v.applies = true;
    v.which = VerdictCase::II;
    v.reason = "strictly star-shaped and critical; solutions of definite sign";
  } else {
    v.reason = star.is_star ? "exponent is subcritical" : "domain is not star-shaped about the origin";
  }
  return v;
}

struct PucciSerrinCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // |lhs - rhs| / (1 + |lhs|)
  std::map<std::string, double> terms;
};

/// Both sides of the Pucci-Serrin identity for the regularized energy density
/// |u|^q/q + (|s|^2 + eps)^(p/2)/p - v u, with h = x - origin and constant a.
inline PucciSerrinCheck verify_pucci_serrin(const DiscreteField& w, const ExponentField& p, const ExponentField& q,
                                            const DiscreteField& v, double eps, double a,
                                            std::span<const double> origin, int points = kDefaultQuadraturePoints) {
  if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  if (&w.mesh() != &v.mesh()) throw Error(ErrorCode::InvalidArgument, "w and v need one mesh");
  const Mesh& m = w.mesh();
  const int N = m.dim();
  PucciSerrinCheck out;

  const double surf1 = boundary_integral(m, [&](const Point& x, const Point& nu, std::size_t fi) {
    const Point g = w.cell_gradient(m.boundary_facets()[fi].cell);
    const double pp = p.value_at(x);
    return std::pow(dot(g, g) + eps, 0.5 * pp) / pp * dot(shifted(x, origin), nu);
  });
  const double surf2 = boundary_integral(m, [&](const Point& x, const Point& nu, std::size_t fi) {
    const Point g = w.cell_gradient(m.boundary_facets()[fi].cell);
    const double g2 = dot(g, g), s = g2 + eps;
    const double pp = p.value_at(x);
    return (s > 0.0 ? std::pow(s, 0.5 * pp - 1.0) * g2 : 0.0) * dot(shifted(x, origin), nu);
  });
  out.lhs = surf1 - surf2;

  double vol_density = 0.0, vol_q = 0.0, vol_p = 0.0, vol_v = 0.0, vol_flux = 0.0;
  const CellQuadrature quad(m, make_quadrature(N, points));
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t c = quad.cell_of(k);
    const Point& x = quad.x(k);
    const Point xs = shifted(x, origin);
    const double wt = quad.weight(k);
    const double pp = p.value_at(x), qq = q.value_at(x);
    const Point g = w.cell_gradient(c);
    const double g2 = dot(g, g), s = g2 + eps;
    const double sp = s > 0.0 ? std::pow(s, 0.5 * pp) : 0.0;  // s^(p/2)
    const double flux = s > 0.0 ? std::pow(s, 0.5 * pp - 1.0) * g2 : 0.0;
    const double wv = w.at(c, quad.bary(k));
    const double uq = std::abs(wv) > 0.0 ? std::pow(std::abs(wv), qq) : 0.0;
    const double vv = v.at(c, quad.bary(k));
    const Point gv = v.cell_gradient(c);
    const double xdq = dot(xs, q.gradient_at(x)), xdp = dot(xs, p.gradient_at(x));
    const double d0 = N * (uq / qq + sp / pp - vv * wv);
    const double d1 = xdq == 0.0 ? 0.0 : xdq / (qq * qq) * log_energy(uq);
    const double d2 = xdp == 0.0 ? 0.0 : xdp / (pp * pp) * log_energy(sp);
    const double d3 = wv * dot(xs, gv);
    for (double d : {d0, d1, d2, d3, flux})
      if (!std::isfinite(d)) detail::non_finite(x, d);
    vol_density += wt * d0;
    vol_q += wt * d1;
    vol_p += wt * d2;
    vol_v += wt * d3;
    vol_flux += wt * flux;
  }
  // a integral w A_eps w, by parts with zero trace: a integral s^((p-2)/2) |grad w|^2.
  const double a_operator = a * vol_flux;
  const double a_gradient = a * vol_flux;
  out.rhs = vol_density + vol_q + vol_p - vol_v - vol_flux + a_operator - a_gradient;
  out.gap = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
  out.terms = {{"surface_energy", surf1},   {"surface_flux", surf2},   {"density", vol_density},
               {"q_gradient", vol_q},       {"p_gradient", vol_p},     {"source_gradient", vol_v},
               {"flux", vol_flux},          {"a_operator", a_operator}, {"a_gradient", a_gradient}};
  return out;
}

inline PucciSerrinCheck verify_pucci_serrin(const SolveResult& w, const ExponentField& p, const ExponentField& q,
                                            const DiscreteField& v, double eps, double a,
                                            std::span<const double> origin, int points = kDefaultQuadraturePoints) {
  return verify_pucci_serrin(w.field, p, q, v, eps, a, origin, points);
}

struct RadialIdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // |lhs - rhs|
};

/// integral |u|^(q-2) u (x.grad u) against
/// -N integral |u|^q/q + integral (x.grad q) |u|^q/q^2 (1 - log|u|^q).
inline RadialIdentityCheck rhs_radial_identity_check(const DiscreteField& u, const ExponentField& q,
                                                     std::span<const double> origin,
                                                     int points = kDefaultQuadraturePoints) {
  const Mesh& m = u.mesh();
  const int N = m.dim();
  RadialIdentityCheck out;
  const CellQuadrature quad(m, make_quadrature(N, points));
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t c = quad.cell_of(k);
    const Point& x = quad.x(k);
    const Point xs = shifted(x, origin);
    const double qq = q.value_at(x);
    const double un = u.at(c, quad.bary(k));
    const double au = std::abs(un);
    const double uq = au > 0.0 ? std::pow(au, qq) : 0.0;
    const double l = au > 0.0 ? std::pow(au, qq - 2.0) * un * dot(xs, u.cell_gradient(c)) : 0.0;
    const double xdq = dot(xs, q.gradient_at(x));
    const double r = -N * uq / qq + (xdq == 0.0 ? 0.0 : -xdq / (qq * qq) * log_energy(uq));
    out.lhs += quad.weight(k) * l;
    out.rhs += quad.weight(k) * r;
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace vexlab

#endif  // VEXLAB_POHOZAEV_HPP
