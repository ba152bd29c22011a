#ifndef VEXLAB_QUADRATURE_HPP
#define VEXLAB_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/mesh.hpp"

namespace vexlab {

/// Reference-simplex rule in barycentric coordinates; weights sum to 1.
struct QuadratureRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
  int degree = 0;  // polynomial exactness
};

inline constexpr int kDefaultQuadraturePoints = 3;

/// Gauss-Legendre in 1D (1..5 points); symmetric Dunavant rules with 1, 3, 6
/// or 7 points on triangles.
inline QuadratureRule make_quadrature(int dim, int points = kDefaultQuadraturePoints) {
  QuadratureRule r;
  if (dim == 1) {
    const auto [xi, w] = gauss_legendre_unit(points);
    for (std::size_t k = 0; k < xi.size(); ++k) r.bary.push_back({1.0 - xi[k], xi[k], 0.0});
    r.weights = w;
    r.degree = 2 * points - 1;
    return r;
  }
  auto add3 = [&](double a, double b, double w) {
    r.bary.push_back({a, b, b});
    r.bary.push_back({b, a, b});
    r.bary.push_back({b, b, a});
    r.weights.insert(r.weights.end(), 3, w);
  };
  switch (points) {
    case 1:
      r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(1.0);
      r.degree = 1;
      break;
    case 3:
      add3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
      r.degree = 2;
      break;
    case 6:
      add3(0.108103018168070, 0.445948490915965, 0.223381589678011);
      add3(0.816847572980459, 0.091576213509771, 0.109951743655322);
      r.degree = 4;
      break;
    case 7:
      r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(0.225);
      add3(0.059715871789770, 0.470142064105115, 0.132394152788506);
      add3(0.797426985353087, 0.101286507323456, 0.125939180544827);
      r.degree = 5;
      break;
    default: throw Error(ErrorCode::InvalidArgument, "triangle rules have 1, 3, 6 or 7 points");
  }
  return r;
}

/// Physical quadrature points of a mesh, flattened cell by cell.
class CellQuadrature {
 public:
  CellQuadrature(const Mesh& mesh, const QuadratureRule& rule) : rule_(rule), per_cell_(rule.weights.size()) {
    const std::size_t n = mesh.num_cells() * per_cell_;
    x_.resize(n);
    w_.resize(n);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
      for (std::size_t k = 0; k < per_cell_; ++k) {
        Point x{0.0, 0.0};
        for (std::size_t a = 0; a < mesh.nodes_per_cell(); ++a) x = x + rule.bary[k][a] * mesh.node(mesh.cell(c)[a]);
        x_[c * per_cell_ + k] = x;
        w_[c * per_cell_ + k] = rule.weights[k] * mesh.cell_volume(c);
      }
  }

  std::size_t size() const { return x_.size(); }
  std::size_t per_cell() const { return per_cell_; }
  std::size_t cell_of(std::size_t q) const { return q / per_cell_; }
  const Point& x(std::size_t q) const { return x_[q]; }
  double weight(std::size_t q) const { return w_[q]; }
  const std::array<double, 3>& bary(std::size_t q) const { return rule_.bary[q % per_cell_]; }
  const QuadratureRule& rule() const { return rule_; }

 private:
  QuadratureRule rule_;
  std::size_t per_cell_;
  std::vector<Point> x_;
  std::vector<double> w_;
};

}  // namespace vexlab

#endif  // VEXLAB_QUADRATURE_HPP
