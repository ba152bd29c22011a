#ifndef VEXLAB_CASCADE_HPP
#define VEXLAB_CASCADE_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/functional.hpp"
#include "vexlab/solvers.hpp"

namespace vexlab {

/// Diameter of the meshed region (max distance between boundary nodes).
inline double mesh_diameter(const Mesh& m) {
  std::vector<std::size_t> b;
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (m.is_boundary_node(i)) b.push_back(i);
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) d = std::max(d, norm(m.node(b[i]) - m.node(b[j])));
  return d;
}

/// Mollifier radius tied to the regularization level: sqrt(eps) diam / 4.
inline double mollifier_radius(double eps, double diameter) { return std::sqrt(eps) * diameter / 4.0; }

/// Nodal source 2 |u|^(q-2) u.
inline DiscreteField power_source(const DiscreteField& u, const ExponentField& q) {
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(u[i]);
    f[i] = a > 0.0 ? 2.0 * std::pow(a, q.value_at(u.mesh().node(i)) - 2.0) * u[i] : 0.0;
  }
  return DiscreteField(u.mesh_ptr(), std::move(f), true);
}

/// q-modular of a - b.
inline double difference_modular(const QuadCache& c, const DiscreteField& a, const DiscreteField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = std::abs(a.at(c.cell[k], c.bary[k]) - b.at(c.cell[k], c.bary[k]));
    if (d > 0.0) s += c.weight[k] * std::pow(d, c.q[k]);
  }
  return s;
}

/// w_n: truncates u at level n, mollifies the source 2|u_n|^(q-2)u_n at
/// radius(eps) and follows the epsilon schedule with warm starts. Every
/// level is kept in result.levels.
inline SolveResult solve_limit_n(const DiscreteField& u, const ExponentField& p, const ExponentField& q, int n,
                                 const SolveConfig& cfg) {
  cfg.validate();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cutoff level must be >= 1");
  const auto mesh = u.mesh_ptr();
  const QuadCache cache(mesh, p, q, cfg.quadrature_points);
  const DofMap dofs(*mesh);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> riesz(stiffness_matrix(*mesh, dofs));
  if (riesz.info() != Eigen::Success) throw Error(ErrorCode::MeshFailure, "stiffness matrix is singular");
  const double diam = mesh_diameter(*mesh);
  const DiscreteField source = power_source(cutoff(u, n), q);

  DiscreteField z = DiscreteField::zero(mesh);
  SolveResult out(z);
  out.n = n;
  int total_iters = 0, converged_levels = 0;
  for (double eps : cfg.epsilon_schedule()) {
    const double radius = mollifier_radius(eps, diam);
    const DiscreteField v = mollify(source, radius);
    const Functional F(cache, eps, 1.0, &v.values());
    SolveResult level = detail::minimize(F, z, cfg, riesz, dofs);
    EpsilonLevel rec;
    rec.epsilon = eps;
    rec.field = std::make_shared<const DiscreteField>(level.field);
    const FieldModulars mods = field_modulars(cache, level.field, eps);
    rec.grad_modular = mods.grad;
    rec.reg_grad_modular = mods.reg_grad;
    rec.q_modular = mods.value;
    rec.energy = level.energy;
    rec.el_residual = level.el_residual;
    rec.iterations = level.iterations;
    rec.converged = level.converged;
    if (!out.levels.empty()) {
      rec.l2_step = mesh_l2_distance(level.field, z);
      rec.q_modular_step = difference_modular(cache, level.field, z);
    }
    out.levels.push_back(rec);
    total_iters += level.iterations;
    converged_levels += level.converged ? 1 : 0;
    z = level.field;
    out.energy = level.energy;
    out.el_residual = level.el_residual;
    out.converged = level.converged;
    out.energy_history = std::move(level.energy_history);
    out.diagnostics["mollifier_radius"] = radius;
  }
  out.field = z;
  out.iterations = total_iters;
  out.diagnostics["levels"] = static_cast<double>(out.levels.size());
  out.diagnostics["levels_converged"] = converged_levels;
  out.diagnostics["grad_modular"] = out.levels.back().grad_modular;
  out.diagnostics["reg_grad_modular"] = out.levels.back().reg_grad_modular;
  out.diagnostics["q_modular"] = out.levels.back().q_modular;
  out.diagnostics["epsilon"] = out.levels.back().epsilon;
  return out;
}

struct CascadeResult {
  std::vector<SolveResult> runs;  // one per n, in schedule order
  double u_grad_modular = 0.0;    // integral |grad u|^p
  double u_q_modular = 0.0;       // integral |u|^q
  std::vector<double> grad_gap;   // |integral |grad w_n|^p - integral |grad u|^p|
  std::vector<double> q_gap;      // |integral |w_n|^q - integral |u|^q|
  bool converged = true;
};

/// Runs solve_limit_n along cfg.n_schedule and tracks how w_n approaches u.
inline CascadeResult cascade(const DiscreteField& u, const ExponentField& p, const ExponentField& q,
                             const SolveConfig& cfg) {
  cfg.validate();
  CascadeResult out;
  const QuadCache cache(u.mesh_ptr(), p, q, cfg.quadrature_points);
  const FieldModulars mu = field_modulars(cache, u, 0.0);
  out.u_grad_modular = mu.grad;
  out.u_q_modular = mu.value;
  for (int n : cfg.n_schedule) {
    SolveResult r = solve_limit_n(u, p, q, n, cfg);
    const FieldModulars mw = field_modulars(cache, r.field, 0.0);
    out.grad_gap.push_back(std::abs(mw.grad - mu.grad));
    out.q_gap.push_back(std::abs(mw.value - mu.value));
    r.diagnostics["grad_gap"] = out.grad_gap.back();
    r.diagnostics["q_gap"] = out.q_gap.back();
    out.converged = out.converged && r.converged;
    out.runs.push_back(std::move(r));
  }
  return out;
}

}  // namespace vexlab

#endif  // VEXLAB_CASCADE_HPP
