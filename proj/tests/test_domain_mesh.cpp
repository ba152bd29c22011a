#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "vexlab/domain.hpp"
#include "vexlab/mesh.hpp"
#include "vexlab/mesh_io.hpp"
#include "vexlab/quadrature.hpp"

using namespace vexlab;

namespace {

Domain square(double lo, double hi) { return Domain::polygon({{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}); }

Domain l_shape() { return Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }

// Two arms whose inner walls face away from each other: the kernel is empty.
Domain u_shape() { return Domain::polygon({{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}); }

double sum_cell_volumes(const Mesh& m) {
  double s = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) s += m.cell_volume(c);
  return s;
}

double xdotnu_integral(const Mesh& m) {
  return boundary_integral(m, [](const Point& x, const Point& nu, std::size_t) { return dot(x, nu); });
}

// Independent oracle for snapped disk meshes: the polygon through the
// boundary nodes, via the shoelace formula and straight chord lengths.
std::pair<double, double> boundary_polygon_area_perimeter(const Mesh& m) {
  double area = 0.0, perim = 0.0;
  for (const auto& f : m.boundary_facets()) {
    const Point& a = m.node(f.nodes[0]);
    const Point& b = m.node(f.nodes[1]);
    area += 0.5 * (a[0] * b[1] - a[1] * b[0]);
    perim += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return {std::abs(area), perim};
}

}  // namespace

TEST(DomainValidation, RejectsBadShapes) {
  EXPECT_THROW(Domain::interval(1, 1), Error);
  EXPECT_THROW(Domain::disk({0, 0}, 0.0), Error);
  EXPECT_THROW(Domain::ball({0, 0, 0}, -1.0), Error);
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}}), Error);
  // Bow tie.
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error);
  // Clockwise.
  EXPECT_THROW(Domain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), Error);
}

TEST(BuildMesh, IntervalQuarter) {
  const Mesh m = build_mesh(Domain::interval(0, 1), 0.25);
  EXPECT_GE(m.num_cells(), 4u);
  EXPECT_NEAR(sum_cell_volumes(m), 1.0, 1e-14);
  EXPECT_LE(m.h(), 2 * 0.25);
}

TEST(BuildMesh, UnitSquare) {
  const Mesh m = build_mesh(square(0, 1), 0.5);
  EXPECT_NEAR(sum_cell_volumes(m), 1.0, 1e-10);
  EXPECT_LE(m.h(), 2 * 0.5);
}

TEST(BuildMesh, DiskAreaConvergesQuadratically) {
  double prev_err = 0.0;
  for (double h : {0.2, 0.1, 0.05}) {
    const Mesh m = build_mesh(Domain::disk({0, 0}, 1.0), h);
    const auto [area, perim] = boundary_polygon_area_perimeter(m);
    (void)perim;
    EXPECT_NEAR(m.volume(), area, 1e-12);
    const double err = std::numbers::pi - m.volume();
    EXPECT_GT(err, 0.0);
    EXPECT_LE(err, 2.0 * m.h() * m.h());
    EXPECT_NEAR(m.geometric_error(), err / std::numbers::pi, 1e-12);
    if (prev_err > 0.0) {
      EXPECT_LT(err, 0.35 * prev_err);
    }
    prev_err = err;
    EXPECT_LE(m.h(), 2 * h);
  }
}

TEST(BuildMesh, BallIsNotMeshable) {
  try {
    build_mesh(Domain::ball({0, 0, 0}, 1.0), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MeshFailure);
  }
}

TEST(MeshInvariants, UnitNormalsAndVolume) {
  for (const Domain& d : {Domain::interval(-1, 2), square(-1, 1), l_shape(), Domain::disk({0.3, -0.2}, 0.7)}) {
    const Mesh m = build_mesh(d, 0.1);
    for (const auto& f : m.boundary_facets()) EXPECT_NEAR(norm(f.normal), 1.0, 1e-12);
    EXPECT_NEAR(sum_cell_volumes(m), m.volume(), 1e-10 * m.volume());
    if (d.kind() != DomainKind::Disk) {
      EXPECT_NEAR(m.volume(), d.measure(), 1e-8 * d.measure());
    }
  }
}

TEST(MeshInvariants, DivergenceTheorem) {
  for (const Domain& d : {Domain::interval(0.5, 2), square(-1, 1), l_shape(), Domain::disk({0.3, -0.2}, 0.7)}) {
    const Mesh m = build_mesh(d, 0.08);
    EXPECT_NEAR(xdotnu_integral(m), m.dim() * m.volume(), 1e-6 * m.volume());
  }
}

TEST(BoundaryIntegral, Examples) {
  const Mesh disk = build_mesh(Domain::disk({0, 0}, 1.0), 0.05);
  const double perim = boundary_integral(disk, [](const Point&, const Point&, std::size_t) { return 1.0; });
  EXPECT_NEAR(perim, boundary_polygon_area_perimeter(disk).second, 1e-12);
  EXPECT_NEAR(perim, 2 * std::numbers::pi, disk.h() * disk.h());
  EXPECT_EQ(boundary_integral(disk, [](const Point&, const Point&, std::size_t) { return 0.0; }), 0.0);
  EXPECT_NEAR(xdotnu_integral(build_mesh(square(-1, 1), 0.25)), 8.0, 1e-12);
}

TEST(StarShape, Examples) {
  const std::vector<double> o{0.0, 0.0};
  auto r = star_shape_report(Domain::disk({0, 0}, 1.0), o);
  EXPECT_DOUBLE_EQ(r.min_xdotnu, 1.0);
  EXPECT_DOUBLE_EQ(r.strict_rho, 1.0);
  EXPECT_TRUE(r.is_star);
  for (double c : {0.25, -0.6, 1.5}) {
    r = star_shape_report(Domain::disk({c, 0}, 1.0), o);
    // Oracle: min over unit nu of 1 + c nu_1, sampled.
    double oracle = 1e300;
    for (int k = 0; k < 3600; ++k) oracle = std::min(oracle, 1.0 + c * std::cos(2 * std::numbers::pi * k / 3600));
    EXPECT_NEAR(r.min_xdotnu, oracle, 1e-12);
    EXPECT_EQ(r.is_star, c < 1.0);
    EXPECT_DOUBLE_EQ(r.strict_rho, std::max(0.0, r.min_xdotnu));
  }
  r = star_shape_report(square(-1, 1), o);
  EXPECT_DOUBLE_EQ(r.min_xdotnu, 1.0);
}

TEST(StarShape, PolygonIndependentOfSamples) {
  const std::vector<double> o{0.4, 0.6};
  const double ref = star_shape_report(l_shape(), o, 0).min_xdotnu;
  for (int s : {1, 16, 512}) EXPECT_EQ(star_shape_report(l_shape(), o, s).min_xdotnu, ref);
}

TEST(StarShape, TranslationInvariance) {
  const std::vector<double> shift{3.25, -1.5};
  for (const Domain& d : {l_shape(), Domain::disk({0.1, 0.2}, 0.9), square(0, 1)}) {
    const std::vector<double> o{0.5, 0.5};
    const std::vector<double> os{o[0] + shift[0], o[1] + shift[1]};
    const auto a = star_shape_report(d, o);
    const auto b = star_shape_report(d.translated(shift), os);
    EXPECT_NEAR(a.min_xdotnu, b.min_xdotnu, 1e-12);
    EXPECT_EQ(a.is_star, b.is_star);
  }
}

TEST(StarShape, MeshReportAgreesWithPolygon) {
  const Mesh m = build_mesh(l_shape(), 0.25);
  const std::vector<double> o{0.5, 0.5};
  EXPECT_NEAR(star_shape_report(m, o).min_xdotnu, star_shape_report(l_shape(), o).min_xdotnu, 1e-12);
}

TEST(FindStarCenter, Disk) {
  const auto [o, r] = find_star_center(Domain::disk({0.2, -0.3}, 1.0));
  EXPECT_NEAR(o[0], 0.2, 1e-12);
  EXPECT_NEAR(o[1], -0.3, 1e-12);
  EXPECT_NEAR(r.min_xdotnu, 1.0, 1e-12);
}

TEST(FindStarCenter, LShape) {
  const auto [o, r] = find_star_center(l_shape());
  EXPECT_GT(o[0], 0.0);
  EXPECT_LT(o[0], 1.0);
  EXPECT_GT(o[1], 0.0);
  EXPECT_LT(o[1], 1.0);
  EXPECT_GT(r.min_xdotnu, 0.0);
  // Oracle: signed distance from o to each edge line, recomputed directly.
  const auto& vs = l_shape().vertices();
  double m = 1e300;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Point a = vs[i], b = vs[(i + 1) % vs.size()];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    m = std::min(m, ((a[0] - o[0]) * (b[1] - a[1]) - (a[1] - o[1]) * (b[0] - a[0])) / len);
  }
  EXPECT_NEAR(r.min_xdotnu, m, 1e-12);
}

TEST(FindStarCenter, NotStarShaped) {
  try {
    find_star_center(u_shape());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStarShaped);
  }
}

TEST(MeshIo, RoundTrip) {
  const Mesh m = build_mesh(l_shape(), 0.5);
  std::stringstream s;
  write_mesh(s, m);
  const Mesh r = read_mesh(s);
  ASSERT_EQ(r.num_nodes(), m.num_nodes());
  ASSERT_EQ(r.num_cells(), m.num_cells());
  ASSERT_EQ(r.boundary_facets().size(), m.boundary_facets().size());
  EXPECT_NEAR(r.volume(), m.volume(), 1e-14);
  EXPECT_NEAR(xdotnu_integral(r), xdotnu_integral(m), 1e-12);
}

TEST(MeshIo, RejectsGarbage) {
  std::stringstream s("2 3 1 0\n0 0 0\n1 1 0\n");
  EXPECT_THROW(read_mesh(s), Error);
}

TEST(Quadrature, ExactOnPolynomials) {
  // Each triangle rule integrates x^a y^b exactly up to its degree on the unit square.
  const Mesh m = build_mesh(square(0, 1), 0.5);
  for (int pts : {1, 3, 6, 7}) {
    const CellQuadrature q(m, make_quadrature(2, pts));
    const int deg = q.rule().degree;
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) s += q.weight(k) * std::pow(q.x(k)[0], a) * std::pow(q.x(k)[1], b);
        EXPECT_NEAR(s, 1.0 / ((a + 1) * (b + 1)), 1e-13) << pts << " points, x^" << a << " y^" << b;
      }
  }
  const Mesh line = build_mesh(Domain::interval(0, 1), 0.5);
  for (int pts = 1; pts <= 5; ++pts) {
    const CellQuadrature q(line, make_quadrature(1, pts));
    for (int a = 0; a <= 2 * pts - 1; ++a) {
      double s = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) s += q.weight(k) * std::pow(q.x(k)[0], a);
      EXPECT_NEAR(s, 1.0 / (a + 1), 1e-14);
    }
  }
}
