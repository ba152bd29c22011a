#ifndef VEXLAB_FEM_HPP
#define VEXLAB_FEM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/mesh.hpp"
#include "vexlab/quadrature.hpp"

namespace vexlab {

/// P1 field: one value per mesh node. When zero_trace is set the boundary
/// values are forced to exactly 0 on construction.
class DiscreteField {
 public:
  DiscreteField(std::shared_ptr<const Mesh> mesh, std::vector<double> values, bool zero_trace = false)
      : mesh_(std::move(mesh)), values_(std::move(values)), zero_trace_(zero_trace) {
    if (!mesh_) throw Error(ErrorCode::InvalidArgument, "field needs a mesh");
    if (values_.size() != mesh_->num_nodes())
      throw Error(ErrorCode::InvalidArgument, "field needs one value per mesh node");
    if (zero_trace_)
      for (std::size_t i = 0; i < values_.size(); ++i)
        if (mesh_->is_boundary_node(i)) values_[i] = 0.0;
  }

  static DiscreteField zero(std::shared_ptr<const Mesh> mesh) {
    const std::size_t n = mesh->num_nodes();
    return DiscreteField(std::move(mesh), std::vector<double>(n, 0.0), true);
  }

  template <typename F>
  static DiscreteField interpolate(std::shared_ptr<const Mesh> mesh, F&& f, bool zero_trace = false) {
    std::vector<double> v(mesh->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh->node(i));
    return DiscreteField(std::move(mesh), std::move(v), zero_trace);
  }

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  bool zero_trace() const { return zero_trace_; }

  DiscreteField with_values(std::vector<double> v) const { return DiscreteField(mesh_, std::move(v), zero_trace_); }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  /// Value of the interpolant on cell c at barycentric coordinates b.
  double at(std::size_t c, const std::array<double, 3>& b) const {
    const auto& cell = mesh_->cell(c);
    double v = 0.0;
    for (std::size_t k = 0; k < mesh_->nodes_per_cell(); ++k) v += b[k] * values_[cell[k]];
    return v;
  }

  /// Constant gradient of the interpolant on cell c.
  Point cell_gradient(std::size_t c) const {
    const auto& cell = mesh_->cell(c);
    Point g{0.0, 0.0};
    for (std::size_t k = 0; k < mesh_->nodes_per_cell(); ++k) g = g + values_[cell[k]] * mesh_->shape_gradient(c, k);
    return g;
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
  bool zero_trace_;
};

inline DiscreteField operator+(const DiscreteField& a, const DiscreteField& b) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return DiscreteField(a.mesh_ptr(), std::move(v), a.zero_trace() && b.zero_trace());
}

inline DiscreteField operator-(const DiscreteField& a, const DiscreteField& b) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return DiscreteField(a.mesh_ptr(), std::move(v), a.zero_trace() && b.zero_trace());
}

inline DiscreteField operator*(double s, const DiscreteField& a) {
  std::vector<double> v(a.values());
  for (auto& x : v) x *= s;
  return a.with_values(std::move(v));
}

/// Per-cell constant gradients of a P1 field.
struct GradientField {
  std::vector<Point> cells;
};

inline GradientField gradient(const DiscreteField& u) {
  const Mesh& m = u.mesh();
  GradientField g;
  g.cells.resize(m.num_cells());
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    if (!(m.cell_volume(c) > 0.0))
      throw Error(ErrorCode::DegenerateCell, "cell " + std::to_string(c) + " has zero volume");
    g.cells[c] = u.cell_gradient(c);
  }
  return g;
}

/// What an integrand sees at a quadrature point.
struct QuadPoint {
  std::size_t cell;
  Point x;
  double u;
  Point grad;
  std::array<double, 3> bary;
};

namespace detail {

[[noreturn]] inline void non_finite(const Point& x, double value) {
  std::ostringstream os;
  os << "integrand is " << value << " at (" << x[0] << ", " << x[1] << ")";
  throw Error(ErrorCode::NonFiniteIntegrand, os.str());
}

}  // namespace detail

/// Gauss quadrature over cells of integrand(QuadPoint). Sums in cell order.
template <typename Integrand>
double integrate(const DiscreteField& u, Integrand&& integrand, int points = kDefaultQuadraturePoints) {
  const Mesh& m = u.mesh();
  const QuadratureRule rule = make_quadrature(m.dim(), points);
  double sum = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const Point g = u.cell_gradient(c);
    double cell_sum = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) {
      Point x{0.0, 0.0};
      for (std::size_t a = 0; a < m.nodes_per_cell(); ++a) x = x + rule.bary[k][a] * m.node(m.cell(c)[a]);
      const double v = integrand(QuadPoint{c, x, u.at(c, rule.bary[k]), g, rule.bary[k]});
      if (!std::isfinite(v)) detail::non_finite(x, v);
      cell_sum += rule.weights[k] * v;
    }
    sum += m.cell_volume(c) * cell_sum;
  }
  return sum;
}

/// Quadrature of a function of position only.
template <typename Integrand>
double integrate(const Mesh& mesh, Integrand&& integrand, int points = kDefaultQuadraturePoints) {
  const QuadratureRule rule = make_quadrature(mesh.dim(), points);
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double cell_sum = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) {
      Point x{0.0, 0.0};
      for (std::size_t a = 0; a < mesh.nodes_per_cell(); ++a) x = x + rule.bary[k][a] * mesh.node(mesh.cell(c)[a]);
      const double v = integrand(x);
      if (!std::isfinite(v)) detail::non_finite(x, v);
      cell_sum += rule.weights[k] * v;
    }
    sum += mesh.cell_volume(c) * cell_sum;
  }
  return sum;
}

/// C1 truncation: identity on [-n, n], then sign(s) (n + 1 - exp(-(|s| - n))).
inline double cutoff_value(double s, int n) {
  const double a = std::abs(s);
  if (a <= n) return s;
  return std::copysign(n + 1.0 - std::exp(-(a - n)), s);
}

inline double cutoff_slope(double s, int n) {
  const double a = std::abs(s);
  if (a <= n) return 1.0;
  return std::exp(-(a - n));
}

inline DiscreteField cutoff(const DiscreteField& u, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cutoff level must be >= 1");
  std::vector<double> v(u.values());
  for (auto& x : v) x = cutoff_value(x, n);
  return u.with_values(std::move(v));
}

/// Discrete convolution with the bump (1 - r^2/radius^2)^3, normalized per
/// node against lumped masses so each output is a convex combination of
/// inputs. Nodes closer than radius + h to the boundary are set to zero.
inline DiscreteField mollify(const DiscreteField& f, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier radius must be positive");
  const Mesh& m = f.mesh();
  const std::size_t n = m.num_nodes();
  const double cell = radius;
  auto key_of = [&](const Point& p) {
    const auto ix = static_cast<std::int64_t>(std::floor(p[0] / cell));
    const auto iy = static_cast<std::int64_t>(std::floor(p[1] / cell));
    return std::pair<std::int64_t, std::int64_t>{ix, iy};
  };
  auto hash = [](std::int64_t ix, std::int64_t iy) {
    return static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(iy);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [ix, iy] = key_of(m.node(i));
    buckets[hash(ix, iy)].push_back(i);
  }
  const double r2 = radius * radius;
  const double layer = radius + m.h();
  std::vector<double> out(n, 0.0);
  const int reach_y = m.dim() == 2 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.boundary_distance(i) < layer) continue;
    const Point& xi = m.node(i);
    const auto [ix, iy] = key_of(xi);
    double num = 0.0, den = 0.0;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -reach_y; dy <= reach_y; ++dy) {
        auto it = buckets.find(hash(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (std::size_t j : it->second) {
          const Point d = m.node(j) - xi;
          const double s = dot(d, d) / r2;
          if (s >= 1.0) continue;
          const double k = (1.0 - s) * (1.0 - s) * (1.0 - s) * m.lumped_mass(j);
          num += k * f[j];
          den += k;
        }
      }
    out[i] = den > 0.0 ? num / den : f[i];
  }
  return DiscreteField(f.mesh_ptr(), std::move(out), true);
}

/// Mesh L2 norm with lumped masses: sqrt(sum m_i v_i^2).
inline double mesh_l2_norm(const DiscreteField& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u.mesh().lumped_mass(i) * u[i] * u[i];
  return std::sqrt(s);
}

inline double mesh_l2_distance(const DiscreteField& a, const DiscreteField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.mesh().lumped_mass(i) * (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace vexlab

#endif  // VEXLAB_FEM_HPP
