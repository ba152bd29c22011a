#ifndef VEXLAB_NEHARI_HPP
#define VEXLAB_NEHARI_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/functional.hpp"
#include "vexlab/modular.hpp"
#include "vexlab/solvers.hpp"

namespace vexlab {

/// Positive scale t with integral |grad(t u)|^p = integral |t u|^q.
inline double nehari_scaling(const QuadCache& c, const DiscreteField& u) {
  std::vector<double> gw, gp, vw, vq;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Point g = u.cell_gradient(c.cell[k]);
    const double g2 = dot(g, g);
    const double az = std::abs(u.at(c.cell[k], c.bary[k]));
    if (g2 > 0.0) {
      gw.push_back(c.weight[k] * std::pow(g2, 0.5 * c.p[k]));
      gp.push_back(c.p[k]);
    }
    if (az > 0.0) {
      vw.push_back(c.weight[k] * std::pow(az, c.q[k]));
      vq.push_back(c.q[k]);
    }
  }
  if (gw.empty() || vw.empty()) throw Error(ErrorCode::CollapseToZero, "field vanishes, no scaling to project");
  // With t = e^s, G(t) / t^p+ is strictly decreasing, so G has one sign change.
  auto G = [&](double s) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < gw.size(); ++k) a += gw[k] * std::exp(gp[k] * s);
    for (std::size_t k = 0; k < vw.size(); ++k) b += vw[k] * std::exp(vq[k] * s);
    return a - b;
  };
  double lo = 0.0, hi = 0.0;
  int guard = 0;
  while (G(lo) <= 0.0) {
    lo -= 1.0;
    if (++guard > 700) throw Error(ErrorCode::NoScalingRoot, "no scale with positive Nehari defect");
  }
  guard = 0;
  while (G(hi) >= 0.0) {
    hi += 1.0;
    if (++guard > 700) throw Error(ErrorCode::NoScalingRoot, "no scale with negative Nehari defect");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (G(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

/// Critical-point candidate of J(u) = integral |grad u|^p/p - |u|^q/q on the
/// Nehari set integral |grad u|^p = integral |u|^q. Projected descent with an
/// H_0^1 preconditioner, then a Newton polish on J' = 0 and a last projection.
/// Only defined for q- > p+.
inline SolveResult nehari_candidate(const ExponentField& p, const ExponentField& q, std::shared_ptr<const Mesh> mesh,
                                    const SolveConfig& cfg, double polish_switch = 1e-3) {
  cfg.validate();
  const QuadCache cache(mesh, p, q, cfg.quadrature_points);
  double p_plus = *std::max_element(cache.p.begin(), cache.p.end());
  double q_minus = *std::min_element(cache.q.begin(), cache.q.end());
  for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
    p_plus = std::max(p_plus, p.value_at(mesh->node(i)));
    q_minus = std::min(q_minus, q.value_at(mesh->node(i)));
  }
  if (!(q_minus > p_plus))
    throw Error(ErrorCode::UnsupportedRegime, "Nehari projection needs q- > p+ on the mesh");

  const DofMap dofs(*mesh);
  if (dofs.size() == 0) throw Error(ErrorCode::MeshFailure, "mesh has no interior nodes");
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> riesz(stiffness_matrix(*mesh, dofs));
  if (riesz.info() != Eigen::Success) throw Error(ErrorCode::MeshFailure, "stiffness matrix is singular");
  const Functional J(cache, 0.0, -1.0, nullptr);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<double> init(mesh->num_nodes());
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = mesh->boundary_distance(i) * (1.0 + 0.25 * noise(rng));

  auto project = [&](const DiscreteField& f) {
    const double t = nehari_scaling(cache, f);
    return t * f;
  };
  auto check_collapse = [&](const DiscreteField& f) {
    if (gradient_luxemburg_norm(f, p) < cfg.collapse_tol)
      throw Error(ErrorCode::CollapseToZero, "candidate collapsed to zero");
  };

  DiscreteField u = project(DiscreteField(mesh, std::move(init), true));
  check_collapse(u);
  FunctionalValue ju = J.value(u);
  std::vector<double> r = J.gradient(u);
  double res = el_residual_norm(*mesh, r);
  SolveResult out(u);
  out.energy_history.push_back(ju.value);
  int descent = 0;
  double t = 1.0;
  while (res > std::max(polish_switch, cfg.grad_tol) && descent < cfg.max_iters) {
    const Eigen::VectorXd rr = dofs.restrict(r);
    const Eigen::VectorXd d = -riesz.solve(rr);
    const double slope = d.dot(rr);
    if (!(slope < 0.0)) break;
    const std::vector<double> dn = dofs.extend(d, mesh->num_nodes());
    t = std::min(1.0, 2.0 * t);
    bool accepted = false;
    for (int bt = 0; bt <= cfg.line_search.max_backtracks; ++bt) {
      std::vector<double> trial(u.size());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = u[i] + t * dn[i];
      DiscreteField cand = project(u.with_values(std::move(trial)));
      const FunctionalValue jc = J.value(cand);
      if (jc.value <= ju.value + cfg.line_search.c1 * t * slope) {
        u = std::move(cand);
        ju = jc;
        accepted = true;
        break;
      }
      t *= cfg.line_search.shrink;
    }
    if (!accepted) break;
    check_collapse(u);
    r = J.gradient(u);
    res = el_residual_norm(*mesh, r);
    out.energy_history.push_back(ju.value);
    ++descent;
  }

  // Newton on J' = 0. J'' is indefinite at a mountain-pass point, so use LU
  // and accept a (damped) step only when it lowers the residual.
  int polish = 0;
  for (; polish < 50 && res > cfg.grad_tol; ++polish) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> h = J.hessian(u, dofs);
    h.makeCompressed();
    lu.compute(h);
    if (lu.info() != Eigen::Success) break;
    const Eigen::VectorXd d = -lu.solve(dofs.restrict(r));
    if (lu.info() != Eigen::Success || !d.allFinite()) break;
    const std::vector<double> dn = dofs.extend(d, mesh->num_nodes());
    bool improved = false;
    for (double s = 1.0; s > 1e-4; s *= 0.5) {
      std::vector<double> trial(u.size());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = u[i] + s * dn[i];
      const DiscreteField cand = u.with_values(std::move(trial));
      const std::vector<double> rc = J.gradient(cand);
      const double rescand = el_residual_norm(*mesh, rc);
      if (rescand < res) {
        u = cand;
        r = rc;
        res = rescand;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  u = project(u);
  check_collapse(u);
  r = J.gradient(u);
  res = el_residual_norm(*mesh, r);
  ju = J.value(u);

  const FieldModulars mods = field_modulars(cache, u, 0.0);
  out.field = u;
  out.energy = ju.value;
  out.el_residual = res;
  out.iterations = descent + polish;
  out.converged = res <= cfg.grad_tol;
  out.diagnostics["identity_gap"] = std::abs(mods.value - mods.grad);
  out.diagnostics["grad_modular"] = mods.grad;
  out.diagnostics["q_modular"] = mods.value;
  out.diagnostics["descent_iterations"] = descent;
  out.diagnostics["newton_iterations"] = polish;
  out.diagnostics["sup_norm"] = u.sup_norm();
  out.diagnostics["gradient_luxemburg_norm"] = gradient_luxemburg_norm(u, p);
  return out;
}

}  // namespace vexlab

#endif  // VEXLAB_NEHARI_HPP
