#ifndef VEXLAB_MODULAR_HPP
#define VEXLAB_MODULAR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/quadrature.hpp"

namespace vexlab {

struct ModularResult {
  double value = 0.0;
  int quadrature_order = 0;  // polynomial exactness of the rule used
};

inline constexpr double kLuxemburgTol = 1e-10;

/// |f|^p and the exponent sampled at the quadrature points of a mesh; the
/// modular of f/mu is then sum w |f/mu|^p.
struct ModularSamples {
  std::vector<double> weight;
  std::vector<double> magnitude;
  std::vector<double> exponent;
  int order = 0;

  double sup() const {
    double m = 0.0;
    for (double a : magnitude) m = std::max(m, a);
    return m;
  }

  double modular(double mu = 1.0) const {
    double s = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k)
      if (magnitude[k] > 0.0) s += weight[k] * std::pow(magnitude[k] / mu, exponent[k]);
    return s;
  }

  double min_exponent() const { return *std::min_element(exponent.begin(), exponent.end()); }
  double max_exponent() const { return *std::max_element(exponent.begin(), exponent.end()); }
};

/// Samples |u| (or |grad u| when use_gradient) at quadrature points.
inline ModularSamples sample_modular(const DiscreteField& u, const ExponentField& p, bool use_gradient,
                                     int points = kDefaultQuadraturePoints) {
  const Mesh& m = u.mesh();
  const CellQuadrature quad(m, make_quadrature(m.dim(), points));
  ModularSamples s;
  s.order = quad.rule().degree;
  s.weight.resize(quad.size());
  s.magnitude.resize(quad.size());
  s.exponent.resize(quad.size());
  Point g{0.0, 0.0};
  std::size_t last_cell = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t c = quad.cell_of(k);
    if (use_gradient && c != last_cell) {
      g = u.cell_gradient(c);
      last_cell = c;
    }
    s.weight[k] = quad.weight(k);
    s.magnitude[k] = use_gradient ? norm(g) : std::abs(u.at(c, quad.bary(k)));
    s.exponent[k] = p.value_at(quad.x(k));
  }
  return s;
}

/// rho_p(u) = integral of |u|^p(x).
inline ModularResult modular(const DiscreteField& u, const ExponentField& p, int points = kDefaultQuadraturePoints) {
  const auto s = sample_modular(u, p, false, points);
  return {s.modular(), s.order};
}

/// integral of |grad u|^p(x) with per-cell P1 gradients.
inline ModularResult gradient_modular(const DiscreteField& u, const ExponentField& p,
                                      int points = kDefaultQuadraturePoints) {
  const auto s = sample_modular(u, p, true, points);
  return {s.modular(), s.order};
}

/// inf{mu > 0 : rho(f/mu) <= 1} by bisection; |rho(f/mu) - 1| <= tol at the
/// returned mu unless the bracket collapses to adjacent doubles first.
inline double luxemburg_from_samples(const ModularSamples& s, double tol = kLuxemburgTol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double sup = s.sup();
  if (sup == 0.0) return 0.0;
  double volume = 0.0;
  for (double w : s.weight) volume += w;
  double lo = sup * 1e-6, hi = sup * (1.0 + volume);
  constexpr int kMaxExpand = 2000;
  int guard = 0;
  while (s.modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > kMaxExpand || !std::isfinite(hi)) throw Error(ErrorCode::BracketFailure, "no upper bracket for the Luxemburg norm");
  }
  guard = 0;
  while (s.modular(lo) < 1.0) {
    lo *= 0.5;
    if (++guard > kMaxExpand || !(lo > 0.0)) throw Error(ErrorCode::BracketFailure, "no lower bracket for the Luxemburg norm");
  }
  // rho(f/mu) decreases strictly in mu: rho(f/lo) >= 1 >= rho(f/hi).
  double best = hi, best_res = std::abs(s.modular(hi) - 1.0);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = s.modular(mid);
    if (std::abs(r - 1.0) < best_res) {
      best = mid;
      best_res = std::abs(r - 1.0);
    }
    if (best_res <= tol) break;
    (r > 1.0 ? lo : hi) = mid;
  }
  return best;
}

inline double luxemburg_norm(const DiscreteField& u, const ExponentField& p, double tol = kLuxemburgTol,
                             int points = kDefaultQuadraturePoints) {
  return luxemburg_from_samples(sample_modular(u, p, false, points), tol);
}

/// Luxemburg norm of |grad u|, the norm of W_0^{1,p(x)}.
inline double gradient_luxemburg_norm(const DiscreteField& u, const ExponentField& p, double tol = kLuxemburgTol,
                                      int points = kDefaultQuadraturePoints) {
  return luxemburg_from_samples(sample_modular(u, p, true, points), tol);
}

struct ModularRelationsReport {
  double norm = 0.0;
  double rho = 0.0;
  double p_minus = 0.0;  // over quadrature points
  double p_plus = 0.0;
  bool trichotomy = true;  // ||u|| <1, =1, >1 matches rho <1, =1, >1
  bool sandwich_applicable = false;
  double lower_slack = 0.0;  // rho - lower bound
  double upper_slack = 0.0;  // upper bound - rho
  double unit_residual = 0.0;  // |rho(u/||u||) - 1|
  bool pass = true;
};

/// Checks the norm/modular relations: the unit-ball trichotomy and, away from
/// the unit sphere, ||u||^p+ <= rho <= ||u||^p- (norm < 1) or
/// ||u||^p- <= rho <= ||u||^p+ (norm > 1).
inline ModularRelationsReport verify_modular_relations(const DiscreteField& u, const ExponentField& p,
                                                       double tol = 1e-8, int points = kDefaultQuadraturePoints) {
  ModularRelationsReport r;
  const auto s = sample_modular(u, p, false, points);
  r.p_minus = s.min_exponent();
  r.p_plus = s.max_exponent();
  r.rho = s.modular();
  r.norm = luxemburg_from_samples(s);
  if (r.norm == 0.0) return r;
  r.unit_residual = std::abs(s.modular(r.norm) - 1.0);
  auto sgn = [](double x) { return (x > 0.0) - (x < 0.0); };
  r.trichotomy = sgn(r.norm - 1.0) == sgn(r.rho - 1.0) || std::abs(r.rho - 1.0) <= tol;
  if (r.norm != 1.0) {
    r.sandwich_applicable = true;
    const double a = std::pow(r.norm, r.p_minus), b = std::pow(r.norm, r.p_plus);
    const double lower = std::min(a, b), upper = std::max(a, b);
    r.lower_slack = r.rho - lower;
    r.upper_slack = upper - r.rho;
  }
  const double scale = tol * std::max(1.0, r.rho);
  r.pass = r.trichotomy && r.unit_residual <= tol && r.lower_slack >= -scale && r.upper_slack >= -scale;
  return r;
}

struct HolderCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;  // 1/p- + 1/p'-
  double slack = 0.0;     // rhs - lhs
  bool pass = true;
};

/// |integral u v| against (1/p- + 1/p'-) ||u||_p ||v||_p'.
inline HolderCheck holder_check(const DiscreteField& u, const DiscreteField& v, const ExponentField& p,
                                double tol = 1e-12, int points = kDefaultQuadraturePoints) {
  if (&u.mesh() != &v.mesh()) throw Error(ErrorCode::InvalidArgument, "Hoelder check needs fields on one mesh");
  const Mesh& m = u.mesh();
  const CellQuadrature quad(m, make_quadrature(m.dim(), points));
  double integral = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t c = quad.cell_of(k);
    integral += quad.weight(k) * u.at(c, quad.bary(k)) * v.at(c, quad.bary(k));
  }
  const auto su = sample_modular(u, p, false, points);
  const ExponentField pc = conjugate(p);
  const auto sv = sample_modular(v, pc, false, points);
  HolderCheck h;
  h.lhs = std::abs(integral);
  h.constant = 1.0 / su.min_exponent() + 1.0 / sv.min_exponent();
  h.rhs = h.constant * luxemburg_from_samples(su) * luxemburg_from_samples(sv);
  h.slack = h.rhs - h.lhs;
  h.pass = h.lhs <= h.rhs + tol;
  return h;
}

}  // namespace vexlab

#endif  // VEXLAB_MODULAR_HPP
