#ifndef VEXLAB_SOLVERS_HPP
#define VEXLAB_SOLVERS_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/functional.hpp"
#include "vexlab/modular.hpp"

namespace vexlab {

struct ArmijoParams {
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
};

enum class DescentMethod { Newton, Gradient };

struct SolveConfig {
  double epsilon = 1e-2;  // single-level solves
  int max_iters = 20000;
  double grad_tol = 1e-8;
  ArmijoParams line_search;
  DescentMethod method = DescentMethod::Newton;
  double epsilon0 = 1.0;
  double eps_factor = 0.5;
  double eps_min = 1e-6;
  std::vector<int> n_schedule{1, 2, 4, 8};
  std::uint64_t seed = 42;
  int quadrature_points = kDefaultQuadraturePoints;
  double collapse_tol = 1e-6;

  void validate() const {
    if (!(grad_tol > 0.0)) throw Error(ErrorCode::ConfigError, "grad_tol must be positive");
    if (!(eps_factor > 0.0 && eps_factor < 1.0)) throw Error(ErrorCode::ConfigError, "eps_factor must lie in (0, 1)");
    if (!(epsilon0 > 0.0) || !(eps_min > 0.0) || eps_min > epsilon0)
      throw Error(ErrorCode::ConfigError, "need 0 < eps_min <= epsilon0");
    if (max_iters < 1) throw Error(ErrorCode::ConfigError, "max_iters must be >= 1");
    if (n_schedule.empty()) throw Error(ErrorCode::ConfigError, "n_schedule is empty");
    for (int n : n_schedule)
      if (n < 1) throw Error(ErrorCode::ConfigError, "n_schedule entries must be >= 1");
    if (!(line_search.c1 > 0.0 && line_search.c1 < 1.0) || !(line_search.shrink > 0.0 && line_search.shrink < 1.0))
      throw Error(ErrorCode::ConfigError, "Armijo parameters must lie in (0, 1)");
  }

  /// epsilon0, epsilon0 * f, ... while above eps_min, then eps_min itself.
  std::vector<double> epsilon_schedule() const {
    std::vector<double> out;
    for (double e = epsilon0; e > eps_min * (1.0 + 1e-12); e *= eps_factor) out.push_back(e);
    out.push_back(eps_min);
    return out;
  }
};

/// One level of an epsilon continuation.
struct EpsilonLevel {
  double epsilon = 0.0;
  std::shared_ptr<const DiscreteField> field;
  double grad_modular = 0.0;      // integral |grad w|^p
  double reg_grad_modular = 0.0;  // integral (|grad w|^2 + eps)^(p/2)
  double q_modular = 0.0;         // integral |w|^q
  double energy = 0.0;
  double el_residual = 0.0;
  double l2_step = 0.0;       // mesh-L2 distance to the previous level
  double q_modular_step = 0.0;  // q-modular of the difference to the previous level
  int iterations = 0;
  bool converged = false;
};

struct SolveResult {
  DiscreteField field;
  double energy = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::map<std::string, double> diagnostics;
  std::vector<double> energy_history;
  std::vector<EpsilonLevel> levels;
  int n = 0;  // cutoff level, 0 when not applicable

  explicit SolveResult(DiscreteField f) : field(std::move(f)) {}
};

/// Regularized energy F_eps(z) = integral (|grad z|^2 + eps)^(p/2)/p + |z|^q/q - v z.
inline double energy_Feps(const DiscreteField& z, const DiscreteField& v, const ExponentField& p,
                          const ExponentField& q, double eps, int points = kDefaultQuadraturePoints) {
  if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  const QuadCache cache(z.mesh_ptr(), p, q, points);
  return Functional(cache, eps, 1.0, &v.values()).value(z).value;
}

/// phi_eps(z) = integral (|grad z|^2 + eps)^(p/2)/p.
inline double phi_eps(const DiscreteField& z, const ExponentField& p, double eps,
                      int points = kDefaultQuadraturePoints) {
  return integrate(
      z,
      [&](const QuadPoint& qp) {
        const double pp = p.value_at(qp.x);
        return std::pow(dot(qp.grad, qp.grad) + eps, 0.5 * pp) / pp;
      },
      points);
}

/// F(z) = integral |grad z|^p/p + |z|^q/q - 2 |u_n|^(q-2) u_n z, with u_n
/// interpolated at quadrature points.
inline double energy_F(const DiscreteField& z, const DiscreteField& u_n, const ExponentField& p,
                       const ExponentField& q, int points = kDefaultQuadraturePoints) {
  if (&z.mesh() != &u_n.mesh()) throw Error(ErrorCode::InvalidArgument, "energy_F needs fields on one mesh");
  return integrate(
      z,
      [&](const QuadPoint& qp) {
        const double pp = p.value_at(qp.x), qq = q.value_at(qp.x);
        const double g2 = dot(qp.grad, qp.grad);
        const double un = u_n.at(qp.cell, qp.bary);
        const double a = std::abs(un);
        const double rhs = a > 0.0 ? 2.0 * std::pow(a, qq - 2.0) * un : 0.0;
        const double az = std::abs(qp.u);
        return (g2 > 0.0 ? std::pow(g2, 0.5 * pp) / pp : 0.0) + (az > 0.0 ? std::pow(az, qq) / qq : 0.0) - rhs * qp.u;
      },
      points);
}

/// Weak application <A_eps z, phi_i> = integral (|grad z|^2 + eps)^((p-2)/2) grad z . grad phi_i
/// for interior i; boundary entries are 0.
inline DiscreteField apply_Aeps(const DiscreteField& z, const ExponentField& p, double eps,
                                int points = kDefaultQuadraturePoints) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const Mesh& m = z.mesh();
  const QuadratureRule rule = make_quadrature(m.dim(), points);
  std::vector<double> r(m.num_nodes(), 0.0);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const Point g = z.cell_gradient(c);
    const double g2 = dot(g, g);
    double coeff = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) {
      Point x{0.0, 0.0};
      for (std::size_t a = 0; a < m.nodes_per_cell(); ++a) x = x + rule.bary[k][a] * m.node(m.cell(c)[a]);
      coeff += rule.weights[k] * std::pow(g2 + eps, 0.5 * p.value_at(x) - 1.0);
    }
    coeff *= m.cell_volume(c);
    for (std::size_t a = 0; a < m.nodes_per_cell(); ++a) r[m.cell(c)[a]] += coeff * dot(g, m.shape_gradient(c, a));
  }
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (m.is_boundary_node(i)) r[i] = 0.0;
  return DiscreteField(z.mesh_ptr(), std::move(r), true);
}

namespace detail {

inline double dot_interior(const Mesh& m, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (!m.is_boundary_node(i)) s += a[i] * b[i];
  return s;
}

/// Descent loop shared by single-level and continuation solves.
inline SolveResult minimize(const Functional& F, DiscreteField z, const SolveConfig& cfg,
                            const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& riesz, const DofMap& dofs) {
  const Mesh& m = z.mesh();
  const std::size_t nn = m.num_nodes();
  // The history starts from F(z0) and then accumulates the step differences,
  // which stay resolvable long after F(z) itself stops changing in double.
  double energy = F.value(z).value;
  std::vector<double> r = F.gradient(z);
  double res = el_residual_norm(m, r);
  SolveResult out(z);
  out.energy_history.push_back(energy);
  int it = 0;
  double t_grad = 1.0;
  int fallback_steps = 0;
  while (res > cfg.grad_tol && it < cfg.max_iters) {
    Eigen::VectorXd d;
    bool newton = cfg.method == DescentMethod::Newton;
    const Eigen::VectorXd rr = dofs.restrict(r);
    if (newton) {
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(F.hessian(z, dofs));
      if (ldlt.info() == Eigen::Success) {
        d = -ldlt.solve(rr);
        if (ldlt.info() != Eigen::Success || !d.allFinite() || d.dot(rr) >= 0.0) newton = false;
      } else {
        newton = false;
      }
    }
    if (!newton) d = -riesz.solve(rr);
    const double slope = d.dot(rr);  // < 0
    if (!(slope < 0.0)) break;
    const std::vector<double> dn = dofs.extend(d, nn);
    double t = newton ? 1.0 : std::min(1.0, 2.0 * t_grad);
    bool accepted = false;
    std::vector<double> step(nn);
    double delta = 0.0;  // F(z + step) - F(z)
    const auto try_step = [&](double tt) {
      for (std::size_t i = 0; i < nn; ++i) step[i] = tt * dn[i];
      try {
        delta = F.difference(z, z.with_values(step));
        return true;
      } catch (const Error&) {
        return false;
      }
    };
    for (int bt = 0; bt <= cfg.line_search.max_backtracks; ++bt) {
      if (try_step(t) && delta < 0.0 && delta <= cfg.line_search.c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= cfg.line_search.shrink;
    }
    if (!accepted) {
      // Sufficient decrease is unresolvable this close to the minimizer;
      // settle for a step that lowers both the energy and the residual.
      t = newton ? 1.0 : std::min(1.0, 2.0 * t_grad);
      for (int bt = 0; bt < 8 && !accepted; ++bt, t *= cfg.line_search.shrink) {
        if (!try_step(t) || delta > 0.0) continue;
        std::vector<double> trial(nn);
        for (std::size_t i = 0; i < nn; ++i) trial[i] = z[i] + step[i];
        accepted = el_residual_norm(m, F.gradient(z.with_values(trial))) < res;
        if (accepted) break;
      }
      if (!accepted) break;
      ++fallback_steps;
    }
    if (!newton) t_grad = t;
    std::vector<double> next(nn);
    for (std::size_t i = 0; i < nn; ++i) next[i] = z[i] + step[i];
    z = z.with_values(std::move(next));
    energy += delta;
    r = F.gradient(z);
    res = el_residual_norm(m, r);
    out.energy_history.push_back(energy);
    ++it;
  }
  out.field = z;
  out.energy = F.value(z).value;
  out.el_residual = res;
  out.iterations = it;
  out.converged = res <= cfg.grad_tol;
  out.diagnostics["fallback_steps"] = fallback_steps;
  out.diagnostics["epsilon"] = F.epsilon();
  return out;
}

}  // namespace detail

/// Minimizes F_eps over zero-trace fields at eps = cfg.epsilon. The
/// minimizer is unique by strict convexity; converged means the weak
/// Euler-Lagrange residual is at most cfg.grad_tol. Running out of iterations
/// returns the last iterate with converged = false.
inline SolveResult solve_regularized(const DiscreteField& v, const ExponentField& p, const ExponentField& q,
                                     const SolveConfig& cfg, const std::optional<DiscreteField>& initial = {}) {
  cfg.validate();
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const auto mesh = v.mesh_ptr();
  const QuadCache cache(mesh, p, q, cfg.quadrature_points);
  const DofMap dofs(*mesh);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> riesz(stiffness_matrix(*mesh, dofs));
  if (riesz.info() != Eigen::Success) throw Error(ErrorCode::MeshFailure, "stiffness matrix is singular");
  DiscreteField z0 = initial ? DiscreteField(mesh, initial->values(), true) : DiscreteField::zero(mesh);
  const Functional F(cache, cfg.epsilon, 1.0, &v.values());
  return detail::minimize(F, std::move(z0), cfg, riesz, dofs);
}

}  // namespace vexlab

#endif  // VEXLAB_SOLVERS_HPP
