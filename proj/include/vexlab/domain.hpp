#ifndef VEXLAB_DOMAIN_HPP
#define VEXLAB_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "vexlab/core.hpp"

namespace vexlab {

enum class DomainKind { Interval, Polygon, Disk, Ball };

/// Bounded region Omega. Intervals, polygons and disks can be meshed; balls are
/// analytic only and may live in any dimension.
class Domain {
 public:
  static Domain interval(double a, double b) {
    if (!(a < b)) throw Error(ErrorCode::InvalidDomain, "interval needs a < b");
    Domain d(DomainKind::Interval, 1);
    d.center_ = {0.5 * (a + b)};
    d.vertices_ = {{a, 0.0}, {b, 0.0}};
    return d;
  }

  /// Vertices must be listed counterclockwise and describe a simple polygon.
  static Domain polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) throw Error(ErrorCode::InvalidDomain, "polygon needs at least 3 vertices");
    Domain d(DomainKind::Polygon, 2);
    d.vertices_ = std::move(vertices);
    if (d.signed_area() <= 0.0)
      throw Error(ErrorCode::InvalidDomain, "polygon vertices must be counterclockwise with positive area");
    if (!d.is_simple_polygon()) throw Error(ErrorCode::InvalidDomain, "polygon is self-intersecting");
    return d;
  }

  static Domain disk(Point center, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidDomain, "disk radius must be positive");
    Domain d(DomainKind::Disk, 2);
    d.center_ = {center[0], center[1]};
    d.radius_ = radius;
    return d;
  }

  /// Dimension is center.size().
  static Domain ball(std::vector<double> center, double radius) {
    if (center.empty()) throw Error(ErrorCode::InvalidDomain, "ball needs a center with at least one coordinate");
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidDomain, "ball radius must be positive");
    Domain d(DomainKind::Ball, static_cast<int>(center.size()));
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
  }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool meshable() const { return kind_ != DomainKind::Ball; }

  double a() const { return vertices_.at(0)[0]; }
  double b() const { return vertices_.at(1)[0]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }

  double measure() const {
    switch (kind_) {
      case DomainKind::Interval: return b() - a();
      case DomainKind::Polygon: return signed_area();
      case DomainKind::Disk: return std::numbers::pi * radius_ * radius_;
      case DomainKind::Ball: {
        const double n = dim_;
        return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0) * std::pow(radius_, n);
      }
    }
    return 0.0;
  }

  double diameter() const {
    switch (kind_) {
      case DomainKind::Interval: return b() - a();
      case DomainKind::Polygon: {
        double d = 0.0;
        for (const auto& u : vertices_)
          for (const auto& v : vertices_) d = std::max(d, norm(u - v));
        return d;
      }
      case DomainKind::Disk:
      case DomainKind::Ball: return 2.0 * radius_;
    }
    return 0.0;
  }

  /// Membership in the closure of Omega, with a small geometric slack.
  bool contains(std::span<const double> x, double slack = 1e-12) const {
    switch (kind_) {
      case DomainKind::Interval: return x[0] >= a() - slack && x[0] <= b() + slack;
      case DomainKind::Polygon: return point_in_polygon({x[0], x[1]}, slack);
      case DomainKind::Disk:
      case DomainKind::Ball: {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) r2 += (x[i] - center_[i]) * (x[i] - center_[i]);
        return std::sqrt(r2) <= radius_ + slack;
      }
    }
    return false;
  }

  /// Smallest and largest distance from y to points of the closure.
  std::pair<double, double> distance_range(std::span<const double> y) const {
    switch (kind_) {
      case DomainKind::Interval: {
        const double far = std::max(std::abs(y[0] - a()), std::abs(y[0] - b()));
        const double near = contains(y, 0.0) ? 0.0 : std::min(std::abs(y[0] - a()), std::abs(y[0] - b()));
        return {near, far};
      }
      case DomainKind::Polygon: {
        const Point p{y[0], y[1]};
        double far = 0.0;
        for (const auto& v : vertices_) far = std::max(far, norm(v - p));
        if (contains(y, 0.0)) return {0.0, far};
        double near = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < vertices_.size(); ++i)
          near = std::min(near, segment_distance(p, vertices_[i], vertices_[(i + 1) % vertices_.size()]));
        return {near, far};
      }
      case DomainKind::Disk:
      case DomainKind::Ball: {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
          const double yi = i < static_cast<int>(y.size()) ? y[i] : 0.0;
          r2 += (yi - center_[i]) * (yi - center_[i]);
        }
        const double r = std::sqrt(r2);
        return {std::max(0.0, r - radius_), r + radius_};
      }
    }
    return {0.0, 0.0};
  }

  /// Distance from an interior point to the boundary (0 outside).
  double distance_to_boundary(std::span<const double> x) const {
    if (!contains(x, 0.0)) return 0.0;
    switch (kind_) {
      case DomainKind::Interval: return std::min(x[0] - a(), b() - x[0]);
      case DomainKind::Polygon: {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < vertices_.size(); ++i)
          d = std::min(d, segment_distance({x[0], x[1]}, vertices_[i], vertices_[(i + 1) % vertices_.size()]));
        return d;
      }
      case DomainKind::Disk:
      case DomainKind::Ball: {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) r2 += (x[i] - center_[i]) * (x[i] - center_[i]);
        return radius_ - std::sqrt(r2);
      }
    }
    return 0.0;
  }

  /// Axis-aligned bounding box as (lower, upper) corners.
  std::pair<std::vector<double>, std::vector<double>> bounding_box() const {
    std::vector<double> lo(dim_), hi(dim_);
    if (kind_ == DomainKind::Disk || kind_ == DomainKind::Ball) {
      for (int i = 0; i < dim_; ++i) {
        lo[i] = center_[i] - radius_;
        hi[i] = center_[i] + radius_;
      }
      return {lo, hi};
    }
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::numeric_limits<double>::infinity();
      hi[i] = -lo[i];
      for (const auto& v : vertices_) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
    return {lo, hi};
  }

  Domain translated(std::span<const double> shift) const {
    Domain d = *this;
    for (std::size_t i = 0; i < d.center_.size(); ++i) d.center_[i] += shift[i];
    for (auto& v : d.vertices_) {
      v[0] += shift[0];
      if (dim_ > 1) v[1] += shift[1];
    }
    return d;
  }

  double signed_area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point& p = vertices_[i];
      const Point& q = vertices_[(i + 1) % vertices_.size()];
      s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
  }

  static double segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
  }

 private:
  Domain(DomainKind kind, int dim) : kind_(kind), dim_(dim) {}

  bool point_in_polygon(const Point& p, double slack) const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (segment_distance(p, vertices_[i], vertices_[(i + 1) % n]) <= slack) return true;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& vi = vertices_[i];
      const Point& vj = vertices_[j];
      if ((vi[1] > p[1]) != (vj[1] > p[1])) {
        const double xc = vj[0] + (p[1] - vj[1]) * (vi[0] - vj[0]) / (vi[1] - vj[1]);
        if (p[0] < xc) inside = !inside;
      }
    }
    return inside;
  }

  static double cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

  static bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const double d1 = cross(q2 - q1, p1 - q1);
    const double d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1);
    const double d4 = cross(p2 - p1, q2 - p1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](const Point& a, const Point& b, const Point& c) {
      return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
             c[1] <= std::max(a[1], b[1]);
    };
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
  }

  bool is_simple_polygon() const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (norm(vertices_[i] - vertices_[(i + 1) % n]) == 0.0) return false;
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n]))
          return false;
      }
    }
    return true;
  }

  DomainKind kind_;
  int dim_;
  std::vector<Point> vertices_;
  std::vector<double> center_;
  double radius_ = 0.0;
};

/// Point cloud covering the closure of Omega. Doubling the resolution yields a
/// superset of the previous cloud.
inline std::vector<std::vector<double>> sample_points(const Domain& omega, int resolution) {
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "sampling resolution must be >= 1");
  std::vector<std::vector<double>> out;
  switch (omega.kind()) {
    case DomainKind::Interval:
      for (int i = 0; i <= resolution; ++i)
        out.push_back({omega.a() + (omega.b() - omega.a()) * i / resolution});
      break;
    case DomainKind::Polygon: {
      double xmin = std::numeric_limits<double>::infinity(), ymin = xmin, xmax = -xmin, ymax = -xmin;
      for (const auto& v : omega.vertices()) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
      }
      for (int i = 0; i <= resolution; ++i)
        for (int j = 0; j <= resolution; ++j) {
          std::vector<double> x{xmin + (xmax - xmin) * i / resolution, ymin + (ymax - ymin) * j / resolution};
          if (omega.contains(x)) out.push_back(std::move(x));
        }
      const auto& vs = omega.vertices();
      for (std::size_t e = 0; e < vs.size(); ++e) {
        const Point& p = vs[e];
        const Point& q = vs[(e + 1) % vs.size()];
        for (int k = 0; k < resolution; ++k) {
          const double t = static_cast<double>(k) / resolution;
          out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
      }
      break;
    }
    case DomainKind::Disk: {
      const auto& c = omega.center();
      out.push_back({c[0], c[1]});
      const int angles = 4 * resolution;
      for (int k = 1; k <= resolution; ++k)
        for (int j = 0; j < angles; ++j) {
          const double r = omega.radius() * k / resolution;
          const double t = 2.0 * std::numbers::pi * j / angles;
          out.push_back({c[0] + r * std::cos(t), c[1] + r * std::sin(t)});
        }
      break;
    }
    case DomainKind::Ball: {
      const int n = omega.dim();
      int res = resolution;
      while (res > 1 && std::pow(res + 1.0, n) > 2e6) res /= 2;
      const auto& c = omega.center();
      std::vector<int> idx(n, 0);
      while (true) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = c[i] - omega.radius() + 2.0 * omega.radius() * idx[i] / res;
        if (omega.contains(x)) out.push_back(std::move(x));
        int i = 0;
        while (i < n && ++idx[i] > res) idx[i++] = 0;
        if (i == n) break;
      }
      for (int i = 0; i < n; ++i)
        for (double s : {-1.0, 1.0}) {
          std::vector<double> x = c;
          x[i] += s * omega.radius();
          out.push_back(std::move(x));
        }
      break;
    }
  }
  return out;
}

inline constexpr double kTolGeom = 1e-10;

struct StarShapeReport {
  std::vector<double> origin;
  double min_xdotnu = 0.0;
  bool is_star = false;
  double strict_rho = 0.0;
};

inline StarShapeReport make_star_report(std::vector<double> origin, double min_xdotnu) {
  StarShapeReport r;
  r.origin = std::move(origin);
  r.min_xdotnu = min_xdotnu;
  r.is_star = min_xdotnu >= -kTolGeom;
  r.strict_rho = std::max(min_xdotnu, 0.0);
  return r;
}

namespace detail {

inline double polygon_min_xdotnu(const std::vector<Point>& vs, const Point& o) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Point& p = vs[i];
    const Point& q = vs[(i + 1) % vs.size()];
    const Point e = q - p;
    const double len = norm(e);
    const Point nu{e[1] / len, -e[0] / len};
    best = std::min(best, dot(p - o, nu));
  }
  return best;
}

}  // namespace detail

/// min over the boundary of (x - origin) . nu(x). Polygons are evaluated facet
/// by facet (exact); disks and balls use the closed form R - |c - origin|, so
/// boundary_samples only matters for future curved kinds.
inline StarShapeReport star_shape_report(const Domain& omega, std::span<const double> origin,
                                         int boundary_samples = 0) {
  (void)boundary_samples;
  std::vector<double> o(origin.begin(), origin.end());
  o.resize(std::max<std::size_t>(o.size(), static_cast<std::size_t>(omega.dim())), 0.0);
  double m = 0.0;
  switch (omega.kind()) {
    case DomainKind::Interval: m = std::min(o[0] - omega.a(), omega.b() - o[0]); break;
    case DomainKind::Polygon: m = detail::polygon_min_xdotnu(omega.vertices(), {o[0], o[1]}); break;
    case DomainKind::Disk:
    case DomainKind::Ball: {
      double r2 = 0.0;
      for (int i = 0; i < omega.dim(); ++i) r2 += (omega.center()[i] - o[i]) * (omega.center()[i] - o[i]);
      m = omega.radius() - std::sqrt(r2);
      break;
    }
  }
  return make_star_report(std::move(o), m);
}

/// Searches for the origin maximizing min (x - o) . nu: coarse grid over the
/// bounding box, then compass refinement. Throws NotStarShaped when the best
/// value found is negative.
inline std::pair<std::vector<double>, StarShapeReport> find_star_center(const Domain& omega, int grid = 32) {
  if (omega.kind() != DomainKind::Polygon) {
    std::vector<double> o = omega.center();
    auto report = star_shape_report(omega, o);
    return {o, report};
  }
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "grid must be >= 1");
  const auto& vs = omega.vertices();
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin, xmax = -xmin, ymax = -xmin;
  for (const auto& v : vs) {
    xmin = std::min(xmin, v[0]);
    xmax = std::max(xmax, v[0]);
    ymin = std::min(ymin, v[1]);
    ymax = std::max(ymax, v[1]);
  }
  Point best{xmin, ymin};
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      const Point o{xmin + (xmax - xmin) * i / grid, ymin + (ymax - ymin) * j / grid};
      const double v = detail::polygon_min_xdotnu(vs, o);
      if (v > best_val) {
        best_val = v;
        best = o;
      }
    }
  double step = std::max(xmax - xmin, ymax - ymin) / grid;
  const double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > 1e-12 * (1.0 + omega.diameter())) {
    bool moved = false;
    for (const auto& d : dirs) {
      const Point o{best[0] + step * d[0], best[1] + step * d[1]};
      const double v = detail::polygon_min_xdotnu(vs, o);
      if (v > best_val) {
        best_val = v;
        best = o;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  if (best_val < -kTolGeom)
    throw Error(ErrorCode::NotStarShaped, "no tested origin gives x.nu >= 0 (best " + std::to_string(best_val) + ")");
  std::vector<double> o{best[0], best[1]};
  return {o, make_star_report(o, best_val)};
}

}  // namespace vexlab

#endif  // VEXLAB_DOMAIN_HPP
