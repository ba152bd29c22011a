#ifndef VEXLAB_FUNCTIONAL_HPP
#define VEXLAB_FUNCTIONAL_HPP

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/quadrature.hpp"

namespace vexlab {

/// Quadrature points of a mesh with both exponents evaluated once. Tabulated
/// exponents need a point location per evaluation, so solvers reuse this.
struct QuadCache {
  std::shared_ptr<const Mesh> mesh;
  std::vector<std::size_t> cell;
  std::vector<double> weight;
  std::vector<std::array<double, 3>> bary;
  std::vector<Point> x;
  std::vector<double> p, q;
  int order = 0;

  QuadCache(std::shared_ptr<const Mesh> m, const ExponentField& pf, const ExponentField& qf,
            int points = kDefaultQuadraturePoints)
      : mesh(std::move(m)) {
    const CellQuadrature quad(*mesh, make_quadrature(mesh->dim(), points));
    order = quad.rule().degree;
    const std::size_t n = quad.size();
    cell.resize(n);
    weight.resize(n);
    bary.resize(n);
    x.resize(n);
    p.resize(n);
    q.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      cell[k] = quad.cell_of(k);
      weight[k] = quad.weight(k);
      bary[k] = quad.bary(k);
      x[k] = quad.x(k);
      p[k] = pf.value_at(x[k]);
      q[k] = qf.value_at(x[k]);
    }
  }

  std::size_t size() const { return cell.size(); }

  /// Values of a nodal vector at every quadrature point.
  std::vector<double> at_points(const std::vector<double>& nodal) const {
    std::vector<double> out(size());
    const std::size_t npc = mesh->nodes_per_cell();
    for (std::size_t k = 0; k < size(); ++k) {
      const auto& c = mesh->cell(cell[k]);
      double v = 0.0;
      for (std::size_t a = 0; a < npc; ++a) v += bary[k][a] * nodal[c[a]];
      out[k] = v;
    }
    return out;
  }
};

/// Interior (free) nodes numbered consecutively.
struct DofMap {
  std::vector<int> dof;            // -1 on boundary nodes
  std::vector<std::size_t> node;   // inverse map

  explicit DofMap(const Mesh& m) : dof(m.num_nodes(), -1) {
    for (std::size_t i = 0; i < m.num_nodes(); ++i)
      if (!m.is_boundary_node(i)) {
        dof[i] = static_cast<int>(node.size());
        node.push_back(i);
      }
  }
  std::size_t size() const { return node.size(); }

  Eigen::VectorXd restrict(const std::vector<double>& nodal) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) r[static_cast<Eigen::Index>(k)] = nodal[node[k]];
    return r;
  }
  std::vector<double> extend(const Eigen::VectorXd& r, std::size_t nodes) const {
    std::vector<double> out(nodes, 0.0);
    for (std::size_t k = 0; k < size(); ++k) out[node[k]] = r[static_cast<Eigen::Index>(k)];
    return out;
  }
};

/// Discrete dual norm of a weak residual: sqrt(sum over interior nodes r_i^2 / m_i)
/// with lumped masses m_i. Mesh-independent proxy for the H^-1 size of r.
inline double el_residual_norm(const Mesh& m, const std::vector<double>& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (!m.is_boundary_node(i)) s += r[i] * r[i] / m.lumped_mass(i);
  return std::sqrt(s);
}

struct FunctionalValue {
  double value = 0.0;
  double magnitude = 0.0;  // sum of |weighted integrand|, a roundoff scale for value
};

/// Energy functionals of the form
///   integral G_eps(x, grad z) + sign * |z|^q(x)/q(x) - v z
/// with G_eps = (|grad z|^2 + eps)^(p/2)/p. sign = +1, v given: the regularized
/// energy F_eps. sign = -1, eps = 0, v = 0: the action J of the limit problem.
class Functional {
 public:
  Functional(const QuadCache& cache, double eps, double reaction_sign, const std::vector<double>* v_nodal)
      : c_(cache), eps_(eps), sign_(reaction_sign) {
    if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
    if (v_nodal != nullptr) v_ = c_.at_points(*v_nodal);
  }

  double epsilon() const { return eps_; }

  FunctionalValue value(const DiscreteField& z) const {
    FunctionalValue f;
    Point g{0.0, 0.0};
    std::size_t last = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_.cell[k] != last) {
        last = c_.cell[k];
        g = z.cell_gradient(last);
      }
      const double zk = z.at(c_.cell[k], c_.bary[k]);
      const double p = c_.p[k], q = c_.q[k];
      const double s = dot(g, g) + eps_;
      const double grad_term = s > 0.0 ? std::pow(s, 0.5 * p) / p : 0.0;
      const double az = std::abs(zk);
      const double react = az > 0.0 ? sign_ * std::pow(az, q) / q : 0.0;
      const double load = v_.empty() ? 0.0 : v_[k] * zk;
      const double dens = grad_term + react - load;
      if (!std::isfinite(dens)) detail::non_finite(c_.x[k], dens);
      f.value += c_.weight[k] * dens;
      f.magnitude += c_.weight[k] * (std::abs(grad_term) + std::abs(react) + std::abs(load));
    }
    return f;
  }

  /// F(z + dz) - F(z) without subtracting two energies. Near a minimizer the
  /// change is far below the rounding of F itself; here each integrand
  /// difference is formed directly, powers via expm1/log1p.
  double difference(const DiscreteField& z, const DiscreteField& dz) const {
    double out = 0.0;
    Point g{0.0, 0.0}, dg{0.0, 0.0};
    std::size_t last = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_.cell[k] != last) {
        last = c_.cell[k];
        g = z.cell_gradient(last);
        dg = dz.cell_gradient(last);
      }
      const double p = c_.p[k], q = c_.q[k];
      const double s0 = dot(g, g) + eps_;
      const double ds = 2.0 * dot(g, dg) + dot(dg, dg);
      const double d_grad = power_difference(s0, ds, 0.5 * p) / p;
      const double z0 = z.at(c_.cell[k], c_.bary[k]);
      const double dzk = dz.at(c_.cell[k], c_.bary[k]);
      const double d_react = sign_ * signed_power_difference(z0, dzk, q) / q;
      const double d_load = v_.empty() ? 0.0 : v_[k] * dzk;
      const double d = d_grad + d_react - d_load;
      if (!std::isfinite(d)) detail::non_finite(c_.x[k], d);
      out += c_.weight[k] * d;
    }
    return out;
  }

  /// Weak gradient <F'(z), phi_i> for every node; boundary rows are zero.
  std::vector<double> gradient(const DiscreteField& z) const {
    const Mesh& m = *c_.mesh;
    const std::size_t npc = m.nodes_per_cell();
    std::vector<double> r(m.num_nodes(), 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const std::size_t c = c_.cell[k];
      const Point g = z.cell_gradient(c);
      const double zk = z.at(c, c_.bary[k]);
      const double flux = flux_coefficient(dot(g, g), c_.p[k]);
      const double az = std::abs(zk);
      const double react = az > 0.0 ? sign_ * std::pow(az, c_.q[k] - 2.0) * zk : 0.0;
      const double load = v_.empty() ? 0.0 : v_[k];
      for (std::size_t a = 0; a < npc; ++a) {
        const std::size_t i = m.cell(c)[a];
        r[i] += c_.weight[k] * (flux * dot(g, m.shape_gradient(c, a)) + (react - load) * c_.bary[k][a]);
      }
    }
    for (std::size_t i = 0; i < m.num_nodes(); ++i)
      if (m.is_boundary_node(i)) r[i] = 0.0;
    return r;
  }

  /// Second variation on interior dofs. Singular coefficients (p < 2 with
  /// eps = 0, q < 2 near z = 0) are capped so the matrix stays finite.
  Eigen::SparseMatrix<double> hessian(const DiscreteField& z, const DofMap& dofs) const {
    const Mesh& m = *c_.mesh;
    const std::size_t npc = m.nodes_per_cell();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(c_.size() * npc * npc);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const std::size_t c = c_.cell[k];
      const Point g = z.cell_gradient(c);
      const double p = c_.p[k], q = c_.q[k];
      const double s = std::max(dot(g, g) + eps_, kSingularFloor);
      const double a = std::pow(s, 0.5 * p - 1.0);
      const double b = (p - 2.0) * std::pow(s, 0.5 * p - 2.0);
      const double az = std::max(std::abs(z.at(c, c_.bary[k])), q < 2.0 ? kReactionFloor : 0.0);
      const double react = sign_ * (q - 1.0) * std::pow(az, q - 2.0);
      const double w = c_.weight[k];
      for (std::size_t i = 0; i < npc; ++i) {
        const int di = dofs.dof[m.cell(c)[i]];
        if (di < 0) continue;
        const Point& gi = m.shape_gradient(c, i);
        for (std::size_t j = 0; j < npc; ++j) {
          const int dj = dofs.dof[m.cell(c)[j]];
          if (dj < 0) continue;
          const Point& gj = m.shape_gradient(c, j);
          const double hij =
              a * dot(gi, gj) + b * dot(g, gi) * dot(g, gj) + react * c_.bary[k][i] * c_.bary[k][j];
          trip.emplace_back(di, dj, w * hij);
        }
      }
    }
    const auto n = static_cast<Eigen::Index>(dofs.size());
    Eigen::SparseMatrix<double> h(n, n);
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
  }

  /// (|g|^2 + eps)^((p-2)/2), the flux coefficient of the regularized operator.
  double flux_coefficient(double g2, double p) const {
    const double s = g2 + eps_;
    if (s == 0.0) return 0.0;  // flux vanishes with the gradient
    return std::pow(s, 0.5 * p - 1.0);
  }

  static constexpr double kSingularFloor = 1e-14;
  static constexpr double kReactionFloor = 1e-8;

 private:
  /// (s + ds)^a - s^a for s >= 0, s + ds >= 0.
  static double power_difference(double s, double ds, double a) {
    const double s1 = s + ds;
    if (s <= 0.0 || !(ds / s > -0.5)) return (s1 > 0.0 ? std::pow(s1, a) : 0.0) - (s > 0.0 ? std::pow(s, a) : 0.0);
    return std::pow(s, a) * std::expm1(a * std::log1p(ds / s));
  }

  /// |z + dz|^q - |z|^q.
  static double signed_power_difference(double z, double dz, double q) {
    if (z == 0.0) return dz == 0.0 ? 0.0 : std::pow(std::abs(dz), q);
    const double z1 = z + dz;
    if ((z1 > 0.0) != (z > 0.0)) return (z1 == 0.0 ? 0.0 : std::pow(std::abs(z1), q)) - std::pow(std::abs(z), q);
    return power_difference(std::abs(z), z > 0.0 ? dz : -dz, q);
  }

  const QuadCache& c_;
  double eps_;
  double sign_;
  std::vector<double> v_;
};

struct FieldModulars {
  double grad = 0.0;      // integral |grad z|^p
  double reg_grad = 0.0;  // integral (|grad z|^2 + eps)^(p/2)
  double value = 0.0;     // integral |z|^q
};

inline FieldModulars field_modulars(const QuadCache& c, const DiscreteField& z, double eps) {
  FieldModulars out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Point g = z.cell_gradient(c.cell[k]);
    const double g2 = dot(g, g);
    const double az = std::abs(z.at(c.cell[k], c.bary[k]));
    if (g2 > 0.0) out.grad += c.weight[k] * std::pow(g2, 0.5 * c.p[k]);
    out.reg_grad += c.weight[k] * std::pow(g2 + eps, 0.5 * c.p[k]);
    if (az > 0.0) out.value += c.weight[k] * std::pow(az, c.q[k]);
  }
  return out;
}

/// P1 stiffness matrix on interior dofs, the Riesz map of H_0^1 used to
/// precondition descent.
inline Eigen::SparseMatrix<double> stiffness_matrix(const Mesh& m, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  const std::size_t npc = m.nodes_per_cell();
  for (std::size_t c = 0; c < m.num_cells(); ++c)
    for (std::size_t i = 0; i < npc; ++i) {
      const int di = dofs.dof[m.cell(c)[i]];
      if (di < 0) continue;
      for (std::size_t j = 0; j < npc; ++j) {
        const int dj = dofs.dof[m.cell(c)[j]];
        if (dj < 0) continue;
        trip.emplace_back(di, dj, m.cell_volume(c) * dot(m.shape_gradient(c, i), m.shape_gradient(c, j)));
      }
    }
  const auto n = static_cast<Eigen::Index>(dofs.size());
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

}  // namespace vexlab

#endif  // VEXLAB_FUNCTIONAL_HPP
