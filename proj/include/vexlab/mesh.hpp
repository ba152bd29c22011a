#ifndef VEXLAB_MESH_HPP
#define VEXLAB_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/domain.hpp"

namespace vexlab {

/// A boundary facet: a single node in 1D, a segment in 2D.
struct BoundaryFacet {
  std::array<std::size_t, 2> nodes{};
  int node_count = 1;
  Point normal{};
  double measure = 1.0;
  std::size_t cell = 0;
};

/// Conforming simplicial mesh (segments in 1D, triangles in 2D). Geometry
/// (volumes, barycentric gradients, lumped masses) is computed once on
/// construction; the mesh is immutable afterwards.
class Mesh {
 public:
  using Cell = std::array<std::size_t, 3>;

  Mesh(int dim, std::vector<Point> nodes, std::vector<Cell> cells, std::vector<BoundaryFacet> facets)
      : dim_(dim), nodes_(std::move(nodes)), cells_(std::move(cells)), facets_(std::move(facets)) {
    if (dim_ != 1 && dim_ != 2) throw Error(ErrorCode::MeshFailure, "meshes are 1D or 2D");
    if (cells_.empty()) throw Error(ErrorCode::MeshFailure, "mesh has no cells");
    compute_geometry();
    attach_facets();
    compute_boundary_distance();
  }

  /// Builds a mesh from cells alone; boundary facets and outward normals are derived.
  static Mesh from_cells(int dim, std::vector<Point> nodes, std::vector<Cell> cells) {
    std::vector<BoundaryFacet> facets;
    if (dim == 1) {
      std::vector<int> count(nodes.size(), 0);
      for (const auto& c : cells) {
        ++count[c[0]];
        ++count[c[1]];
      }
      for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int k = 0; k < 2; ++k) {
          const std::size_t n = cells[ci][k];
          if (count[n] != 1) continue;
          const std::size_t other = cells[ci][1 - k];
          BoundaryFacet f;
          f.nodes = {n, n};
          f.node_count = 1;
          f.normal = {nodes[n][0] > nodes[other][0] ? 1.0 : -1.0, 0.0};
          f.cell = ci;
          facets.push_back(f);
        }
    } else {
      std::map<std::pair<std::size_t, std::size_t>, std::pair<int, std::size_t>> edges;
      for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int k = 0; k < 3; ++k) {
          std::size_t a = cells[ci][k], b = cells[ci][(k + 1) % 3];
          auto key = std::minmax(a, b);
          auto& e = edges[{key.first, key.second}];
          ++e.first;
          e.second = ci;
        }
      for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int k = 0; k < 3; ++k) {
          const std::size_t a = cells[ci][k], b = cells[ci][(k + 1) % 3], c = cells[ci][(k + 2) % 3];
          auto key = std::minmax(a, b);
          if (edges[{key.first, key.second}].first != 1) continue;
          const Point e = nodes[b] - nodes[a];
          const double len = norm(e);
          Point nu{e[1] / len, -e[0] / len};
          if (dot(nu, nodes[c] - nodes[a]) > 0.0) nu = -1.0 * nu;
          BoundaryFacet f;
          f.nodes = {a, b};
          f.node_count = 2;
          f.normal = nu;
          f.cell = ci;
          facets.push_back(f);
        }
    }
    return Mesh(dim, std::move(nodes), std::move(cells), std::move(facets));
  }

  int dim() const { return dim_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t nodes_per_cell() const { return static_cast<std::size_t>(dim_) + 1; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(std::size_t c) const { return cells_[c]; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }
  double cell_volume(std::size_t c) const { return volume_[c]; }
  /// Gradient of the barycentric coordinate of local vertex k on cell c.
  const Point& shape_gradient(std::size_t c, std::size_t k) const { return shape_grad_[c][k]; }
  double h() const { return h_; }
  double volume() const { return total_volume_; }
  double lumped_mass(std::size_t i) const { return lumped_mass_[i]; }
  bool is_boundary_node(std::size_t i) const { return boundary_node_[i] != 0; }
  /// Distance from node i to the meshed boundary.
  double boundary_distance(std::size_t i) const { return boundary_distance_[i]; }

  Point cell_centroid(std::size_t c) const {
    Point s{0.0, 0.0};
    for (std::size_t k = 0; k < nodes_per_cell(); ++k) s = s + nodes_[cells_[c][k]];
    return (1.0 / static_cast<double>(nodes_per_cell())) * s;
  }

  Point facet_point(const BoundaryFacet& f, double t) const {
    if (f.node_count == 1) return nodes_[f.nodes[0]];
    return nodes_[f.nodes[0]] + t * (nodes_[f.nodes[1]] - nodes_[f.nodes[0]]);
  }

  /// Relative mismatch between the mesh volume and the exact |Omega|; nonzero
  /// for disks, which are meshed as inscribed polygons.
  double geometric_error() const { return geometric_error_; }
  void set_geometric_error(double e) { geometric_error_ = e; }

 private:
  void compute_geometry() {
    const std::size_t npc = nodes_per_cell();
    volume_.assign(cells_.size(), 0.0);
    shape_grad_.assign(cells_.size(), {});
    lumped_mass_.assign(nodes_.size(), 0.0);
    h_ = 0.0;
    total_volume_ = 0.0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (std::size_t k = 0; k < npc; ++k)
        if (cells_[c][k] >= nodes_.size()) throw Error(ErrorCode::MeshFailure, "cell references missing node");
      if (dim_ == 1) {
        const double x0 = nodes_[cells_[c][0]][0], x1 = nodes_[cells_[c][1]][0];
        const double len = x1 - x0;
        volume_[c] = std::abs(len);
        if (len != 0.0) {
          shape_grad_[c][0] = {-1.0 / len, 0.0};
          shape_grad_[c][1] = {1.0 / len, 0.0};
        } else {
          shape_grad_[c][0] = shape_grad_[c][1] = {std::nan(""), std::nan("")};
        }
        h_ = std::max(h_, std::abs(len));
      } else {
        const Point& a = nodes_[cells_[c][0]];
        const Point& b = nodes_[cells_[c][1]];
        const Point& d = nodes_[cells_[c][2]];
        const double det = (b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]);
        volume_[c] = 0.5 * std::abs(det);
        if (det != 0.0) {
          // grad lambda_k = rot90(opposite edge) / (2 * signed area)
          shape_grad_[c][0] = {(b[1] - d[1]) / det, (d[0] - b[0]) / det};
          shape_grad_[c][1] = {(d[1] - a[1]) / det, (a[0] - d[0]) / det};
          shape_grad_[c][2] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
        } else {
          for (auto& g : shape_grad_[c]) g = {std::nan(""), std::nan("")};
        }
        h_ = std::max({h_, norm(b - a), norm(d - b), norm(a - d)});
      }
      total_volume_ += volume_[c];
      for (std::size_t k = 0; k < npc; ++k) lumped_mass_[cells_[c][k]] += volume_[c] / static_cast<double>(npc);
    }
  }

  void attach_facets() {
    boundary_node_.assign(nodes_.size(), 0);
    // Map each facet to its unique adjacent cell and recompute its measure.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> owner;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (dim_ == 1) {
        owner[{cells_[c][0], cells_[c][0]}] = c;
        owner[{cells_[c][1], cells_[c][1]}] = c;
      } else {
        for (int k = 0; k < 3; ++k) {
          auto key = std::minmax(cells_[c][k], cells_[c][(k + 1) % 3]);
          owner[{key.first, key.second}] = c;
        }
      }
    }
    for (auto& f : facets_) {
      for (int k = 0; k < f.node_count; ++k) {
        if (f.nodes[k] >= nodes_.size()) throw Error(ErrorCode::MeshFailure, "facet references missing node");
        boundary_node_[f.nodes[k]] = 1;
      }
      const std::size_t b = f.node_count == 2 ? f.nodes[1] : f.nodes[0];
      auto key = std::minmax(f.nodes[0], b);
      auto it = owner.find({key.first, key.second});
      if (it == owner.end()) throw Error(ErrorCode::MeshFailure, "facet is not an edge of any cell");
      f.cell = it->second;
      f.measure = f.node_count == 2 ? norm(nodes_[f.nodes[1]] - nodes_[f.nodes[0]]) : 1.0;
      const double len = norm(f.normal);
      if (!(len > 0.0)) throw Error(ErrorCode::MeshFailure, "facet normal has zero length");
      f.normal = (1.0 / len) * f.normal;
    }
  }

  void compute_boundary_distance() {
    boundary_distance_.assign(nodes_.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (const auto& f : facets_) {
        const double d = f.node_count == 1 ? norm(nodes_[i] - nodes_[f.nodes[0]])
                                           : Domain::segment_distance(nodes_[i], nodes_[f.nodes[0]], nodes_[f.nodes[1]]);
        boundary_distance_[i] = std::min(boundary_distance_[i], d);
      }
  }

  int dim_;
  std::vector<Point> nodes_;
  std::vector<Cell> cells_;
  std::vector<BoundaryFacet> facets_;
  std::vector<double> volume_;
  std::vector<std::array<Point, 3>> shape_grad_;
  std::vector<double> lumped_mass_;
  std::vector<char> boundary_node_;
  std::vector<double> boundary_distance_;
  double h_ = 0.0;
  double total_volume_ = 0.0;
  double geometric_error_ = 0.0;
};

namespace detail {

/// Red refinement: every triangle splits into four through its edge midpoints.
/// When snap_circle is set, midpoints of boundary edges are pushed onto it.
inline void refine_triangles(std::vector<Point>& nodes, std::vector<Mesh::Cell>& cells, const Domain* snap_circle) {
  std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
  for (const auto& c : cells)
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(c[k], c[(k + 1) % 3]);
      ++edge_count[{key.first, key.second}];
    }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
  auto mid = [&](std::size_t a, std::size_t b) {
    auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, nodes.size());
    if (inserted) {
      Point m = 0.5 * (nodes[a] + nodes[b]);
      if (snap_circle != nullptr && edge_count[{key.first, key.second}] == 1) {
        const Point c{snap_circle->center()[0], snap_circle->center()[1]};
        const Point r = m - c;
        m = c + (snap_circle->radius() / norm(r)) * r;
      }
      nodes.push_back(m);
    }
    return it->second;
  };
  std::vector<Mesh::Cell> out;
  out.reserve(cells.size() * 4);
  for (const auto& c : cells) {
    const std::size_t a = c[0], b = c[1], d = c[2];
    const std::size_t ab = mid(a, b), bd = mid(b, d), da = mid(d, a);
    out.push_back({a, ab, da});
    out.push_back({ab, b, bd});
    out.push_back({da, bd, d});
    out.push_back({ab, bd, da});
  }
  cells = std::move(out);
}

inline double max_edge(const std::vector<Point>& nodes, const std::vector<Mesh::Cell>& cells) {
  double h = 0.0;
  for (const auto& c : cells)
    for (int k = 0; k < 3; ++k) h = std::max(h, norm(nodes[c[k]] - nodes[c[(k + 1) % 3]]));
  return h;
}

inline double cross3(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
}

/// Ear clipping of a simple counterclockwise polygon.
inline std::vector<Mesh::Cell> ear_clip(const std::vector<Point>& vs) {
  std::vector<std::size_t> ring(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) ring[i] = i;
  std::vector<Mesh::Cell> tris;
  std::size_t guard = 0;
  while (ring.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t ip = ring[(i + ring.size() - 1) % ring.size()];
      const std::size_t ic = ring[i];
      const std::size_t in = ring[(i + 1) % ring.size()];
      if (cross3(vs[ip], vs[ic], vs[in]) <= 0.0) continue;
      bool blocked = false;
      for (std::size_t r : ring) {
        if (r == ip || r == ic || r == in) continue;
        const double d1 = cross3(vs[ip], vs[ic], vs[r]);
        const double d2 = cross3(vs[ic], vs[in], vs[r]);
        const double d3 = cross3(vs[in], vs[ip], vs[r]);
        if (d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({ip, ic, in});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 4 * vs.size()) throw Error(ErrorCode::MeshFailure, "ear clipping failed");
  }
  if (cross3(vs[ring[0]], vs[ring[1]], vs[ring[2]]) <= 0.0)
    throw Error(ErrorCode::MeshFailure, "degenerate final ear");
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

}  // namespace detail

/// Conforming simplicial mesh of Omega with max cell diameter <= h_target.
inline Mesh build_mesh(const Domain& omega, double h_target) {
  if (!(h_target > 0.0)) throw Error(ErrorCode::InvalidArgument, "h_target must be positive");
  switch (omega.kind()) {
    case DomainKind::Interval: {
      const double len = omega.b() - omega.a();
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h_target - 1e-12)));
      std::vector<Point> nodes(n + 1);
      std::vector<Mesh::Cell> cells(n);
      for (std::size_t i = 0; i <= n; ++i)
        nodes[i] = {i == n ? omega.b() : omega.a() + len * static_cast<double>(i) / static_cast<double>(n), 0.0};
      for (std::size_t i = 0; i < n; ++i) cells[i] = {i, i + 1, 0};
      return Mesh::from_cells(1, std::move(nodes), std::move(cells));
    }
    case DomainKind::Polygon: {
      std::vector<Point> nodes = omega.vertices();
      auto cells = detail::ear_clip(nodes);
      while (detail::max_edge(nodes, cells) > h_target) detail::refine_triangles(nodes, cells, nullptr);
      Mesh m = Mesh::from_cells(2, std::move(nodes), std::move(cells));
      m.set_geometric_error(std::abs(m.volume() - omega.measure()) / omega.measure());
      return m;
    }
    case DomainKind::Disk: {
      const Point c{omega.center()[0], omega.center()[1]};
      const double r = omega.radius();
      std::vector<Point> nodes{c};
      constexpr int kSectors = 8;
      for (int k = 0; k < kSectors; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kSectors;
        nodes.push_back({c[0] + r * std::cos(t), c[1] + r * std::sin(t)});
      }
      std::vector<Mesh::Cell> cells;
      for (std::size_t k = 0; k < kSectors; ++k) cells.push_back({0, 1 + k, 1 + (k + 1) % kSectors});
      while (detail::max_edge(nodes, cells) > h_target) detail::refine_triangles(nodes, cells, &omega);
      Mesh m = Mesh::from_cells(2, std::move(nodes), std::move(cells));
      m.set_geometric_error(std::abs(m.volume() - omega.measure()) / omega.measure());
      return m;
    }
    case DomainKind::Ball: break;
  }
  throw Error(ErrorCode::MeshFailure, "analytic balls are not meshable");
}

/// Gauss-Legendre nodes and weights on [0, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int points) {
  switch (points) {
    case 1: return {{0.5}, {1.0}};
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      return {{0.5 - d, 0.5 + d}, {0.5, 0.5}};
    }
    case 3: {
      const double d = 0.5 * std::sqrt(0.6);
      return {{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double wa = (18.0 + std::sqrt(30.0)) / 72.0, wb = (18.0 - std::sqrt(30.0)) / 72.0;
      return {{0.5 - 0.5 * b, 0.5 - 0.5 * a, 0.5 + 0.5 * a, 0.5 + 0.5 * b}, {wb, wa, wa, wb}};
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 1800.0, wb = (322.0 - 13.0 * std::sqrt(70.0)) / 1800.0;
      return {{0.5 - 0.5 * b, 0.5 - 0.5 * a, 0.5, 0.5 + 0.5 * a, 0.5 + 0.5 * b}, {wb, wa, 128.0 / 450.0, wa, wb}};
    }
    default: throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre supports 1..5 points");
  }
}

/// Facet-wise Gauss quadrature of density(x, nu) over the mesh boundary. In 1D
/// the boundary is a set of points with counting measure.
template <typename Density>
double boundary_integral(const Mesh& mesh, Density&& density, int points = 2) {
  const auto [xi, wt] = gauss_legendre_unit(points);
  double sum = 0.0;
  for (std::size_t fi = 0; fi < mesh.boundary_facets().size(); ++fi) {
    const BoundaryFacet& f = mesh.boundary_facets()[fi];
    if (f.node_count == 1) {
      sum += density(mesh.node(f.nodes[0]), f.normal, fi);
      continue;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) s += wt[k] * density(mesh.facet_point(f, xi[k]), f.normal, fi);
    sum += f.measure * s;
  }
  return sum;
}

/// Star-shape report of the meshed (polygonal) boundary, facet-exact.
inline StarShapeReport star_shape_report(const Mesh& mesh, std::span<const double> origin) {
  const Point o{origin[0], origin.size() > 1 ? origin[1] : 0.0};
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.boundary_facets()) m = std::min(m, dot(mesh.node(f.nodes[0]) - o, f.normal));
  std::vector<double> ov(origin.begin(), origin.end());
  return make_star_report(std::move(ov), m);
}

/// Locates the cell containing a point (1D: sorted search, 2D: bucket grid).
/// Points outside every cell map to the cell where they are least outside.
class PointLocator {
 public:
  explicit PointLocator(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
    const Mesh& m = *mesh_;
    if (m.dim() == 1) {
      order_.resize(m.num_cells());
      for (std::size_t c = 0; c < m.num_cells(); ++c) order_[c] = c;
      std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return left(a) < left(b); });
      return;
    }
    lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point hi{-lo_[0], -lo_[1]};
    for (const auto& p : m.nodes()) {
      lo_ = {std::min(lo_[0], p[0]), std::min(lo_[1], p[1])};
      hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1])};
    }
    nb_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(m.num_cells()) / 2.0)));
    span_ = {std::max(hi[0] - lo_[0], 1e-300), std::max(hi[1] - lo_[1], 1e-300)};
    buckets_.assign(nb_ * nb_, {});
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      Point cmin = m.node(m.cell(c)[0]), cmax = cmin;
      for (int k = 1; k < 3; ++k) {
        const Point& p = m.node(m.cell(c)[k]);
        cmin = {std::min(cmin[0], p[0]), std::min(cmin[1], p[1])};
        cmax = {std::max(cmax[0], p[0]), std::max(cmax[1], p[1])};
      }
      const auto [i0, j0] = bucket(cmin);
      const auto [i1, j1] = bucket(cmax);
      for (std::size_t i = i0; i <= i1; ++i)
        for (std::size_t j = j0; j <= j1; ++j) buckets_[i * nb_ + j].push_back(c);
    }
  }

  struct Location {
    std::size_t cell;
    std::array<double, 3> bary;
  };

  Location locate(const Point& x) const {
    const Mesh& m = *mesh_;
    if (m.dim() == 1) {
      auto it = std::upper_bound(order_.begin(), order_.end(), x[0],
                                 [&](double v, std::size_t c) { return v < left(c); });
      std::size_t c = it == order_.begin() ? order_.front() : *(it - 1);
      return {c, bary(c, x)};
    }
    const auto [i, j] = bucket(x);
    Location best{0, {0, 0, 0}};
    double best_score = -std::numeric_limits<double>::infinity();
    auto scan = [&](const std::vector<std::size_t>& cells) {
      for (std::size_t c : cells) {
        auto b = bary(c, x);
        const double score = std::min({b[0], b[1], b[2]});
        if (score > best_score) {
          best_score = score;
          best = {c, b};
        }
      }
    };
    scan(buckets_[i * nb_ + j]);
    if (best_score < -1e-12) {
      for (std::size_t c = 0; c < m.num_cells(); ++c) {
        auto b = bary(c, x);
        const double score = std::min({b[0], b[1], b[2]});
        if (score > best_score) {
          best_score = score;
          best = {c, b};
        }
      }
    }
    return best;
  }

  std::array<double, 3> bary(std::size_t c, const Point& x) const {
    const Mesh& m = *mesh_;
    const auto& cell = m.cell(c);
    std::array<double, 3> b{0, 0, 0};
    const Point& x0 = m.node(cell[0]);
    double rest = 0.0;
    for (std::size_t k = 1; k < m.nodes_per_cell(); ++k) {
      b[k] = dot(m.shape_gradient(c, k), x - x0);
      rest += b[k];
    }
    b[0] = 1.0 - rest;
    return b;
  }

  const Mesh& mesh() const { return *mesh_; }

 private:
  double left(std::size_t c) const {
    return std::min(mesh_->node(mesh_->cell(c)[0])[0], mesh_->node(mesh_->cell(c)[1])[0]);
  }

  std::pair<std::size_t, std::size_t> bucket(const Point& x) const {
    auto clampi = [&](double t) {
      const double v = std::floor(t * static_cast<double>(nb_));
      return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(nb_ - 1)));
    };
    return {clampi((x[0] - lo_[0]) / span_[0]), clampi((x[1] - lo_[1]) / span_[1])};
  }

  std::shared_ptr<const Mesh> mesh_;
  std::vector<std::size_t> order_;
  Point lo_{}, span_{};
  std::size_t nb_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace vexlab

#endif  // VEXLAB_MESH_HPP
