#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vexlab/modular.hpp"

using namespace vexlab;

namespace {

std::shared_ptr<const Mesh> unit_interval(double h) {
  return std::make_shared<const Mesh>(build_mesh(Domain::interval(0, 1), h));
}

std::shared_ptr<const Mesh> unit_square(double h) {
  return std::make_shared<const Mesh>(build_mesh(Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), h));
}

DiscreteField constant_field(std::shared_ptr<const Mesh> m, double c) {
  return DiscreteField(m, std::vector<double>(m->num_nodes(), c));
}

DiscreteField random_field(std::shared_ptr<const Mesh> m, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(m->num_nodes());
  for (auto& x : v) x = d(rng);
  return DiscreteField(m, std::move(v));
}

// Oracle for u = 2, p = 2 + x: rho(2/mu) = a^2 (a - 1)/ln a with a = 2/mu,
// solved by long double bisection.
long double affine_rho(long double a) { return a == 1.0L ? 1.0L : a * a * (a - 1.0L) / std::log(a); }

long double affine_norm_oracle() {
  long double lo = 0.5L, hi = 4.0L;  // rho decreasing in mu
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (affine_rho(2.0L / mid) > 1.0L ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace

TEST(Modular, UnitFieldOnUnitMeasure) {
  for (auto m : {unit_interval(0.01), unit_square(0.1)}) {
    const auto u = constant_field(m, 1.0);
    EXPECT_NEAR(modular(u, ExponentField::affine(2.0, {1.0, 0.5})).value, 1.0, 1e-12);
    EXPECT_NEAR(modular(u, ExponentField::constant(7.5)).value, 1.0, 1e-12);
  }
}

TEST(Modular, AffineExponentClosedForm) {
  const auto r = modular(constant_field(unit_interval(0.01), 2.0), ExponentField::affine(2.0, {1.0}));
  EXPECT_NEAR(r.value, 4.0 / std::numbers::ln2, 1e-9);
  EXPECT_GE(r.quadrature_order, 2);
}

TEST(Modular, ZeroField) {
  EXPECT_EQ(modular(constant_field(unit_square(0.2), 0.0), ExponentField::constant(2.5)).value, 0.0);
  EXPECT_EQ(luxemburg_norm(constant_field(unit_square(0.2), 0.0), ExponentField::constant(2.5)), 0.0);
}

TEST(GradientModular, Examples) {
  auto m = unit_square(0.1);
  const auto affine = DiscreteField::interpolate(m, [](const Point& x) { return 0.6 * x[0] - 0.8 * x[1]; });
  EXPECT_NEAR(gradient_modular(affine, ExponentField::radial(1.5, 2.0, {0.3, 0.3})).value, 1.0, 1e-12);
  EXPECT_EQ(gradient_modular(constant_field(m, 3.0), ExponentField::constant(2)).value, 0.0);
  double prev = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto u = DiscreteField::interpolate(unit_interval(h), [](const Point& x) { return std::sin(std::numbers::pi * x[0]); });
    const double err = std::abs(gradient_modular(u, ExponentField::constant(2)).value - std::numbers::pi * std::numbers::pi / 2);
    EXPECT_LE(err, 10.0 * h * h);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.2);
    }
    prev = err;
  }
}

TEST(Luxemburg, ConstantExponentIsLpNorm) {
  std::mt19937_64 rng(5);
  for (double p : {1.3, 2.0, 3.7}) {
    const auto u = random_field(unit_square(0.1), rng, 5.0);
    const double closed = std::pow(modular(u, ExponentField::constant(p)).value, 1.0 / p);
    EXPECT_NEAR(luxemburg_norm(u, ExponentField::constant(p)), closed, 1e-8 * closed);
  }
}

TEST(Luxemburg, UnitField) {
  EXPECT_NEAR(luxemburg_norm(constant_field(unit_square(0.1), 1.0), ExponentField::affine(1.5, {2.0, 1.0})), 1.0,
              1e-10);
}

TEST(Luxemburg, AffineExponentMatchesScalarOracle) {
  const auto u = constant_field(unit_interval(0.005), 2.0);
  const double mu = luxemburg_norm(u, ExponentField::affine(2.0, {1.0}));
  EXPECT_NEAR(mu, static_cast<double>(affine_norm_oracle()), 1e-9);
  EXPECT_NEAR(modular(DiscreteField(u.mesh_ptr(), std::vector<double>(u.size(), 2.0 / mu)),
                      ExponentField::affine(2.0, {1.0}))
                  .value,
              1.0, 1e-9);
}

TEST(Luxemburg, Homogeneity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam(-20.0, 20.0);
  const auto p = ExponentField::affine(1.4, {1.5, 0.5});
  for (int t = 0; t < 20; ++t) {
    const auto u = random_field(unit_square(0.2), rng, 2.0);
    const double l = lam(rng);
    const double a = luxemburg_norm(l * u, p), b = std::abs(l) * luxemburg_norm(u, p);
    EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, b));
  }
}

TEST(Luxemburg, TriangleInequality) {
  std::mt19937_64 rng(23);
  const auto p = ExponentField::radial(1.6, 1.2, {0.5, 0.5});
  for (int t = 0; t < 50; ++t) {
    const auto m = unit_square(0.25);
    const auto u = random_field(m, rng, 3.0), v = random_field(m, rng, 0.5);
    EXPECT_LE(luxemburg_norm(u + v, p), luxemburg_norm(u, p) + luxemburg_norm(v, p) + 1e-9);
  }
}

TEST(Relations, UnitModularGivesUnitNorm) {
  const auto m = unit_interval(0.01);
  const auto p = ExponentField::affine(2.0, {1.0});
  auto u = DiscreteField::interpolate(m, [](const Point& x) { return 1.0 + x[0] * x[0]; });
  // Rescale until rho(u) = 1 (bisection on the amplitude).
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid * u, p).value < 1.0 ? lo : hi) = mid;
  }
  u = (0.5 * (lo + hi)) * u;
  ASSERT_NEAR(modular(u, p).value, 1.0, 1e-12);
  EXPECT_NEAR(luxemburg_norm(u, p), 1.0, 1e-10);
  EXPECT_TRUE(verify_modular_relations(u, p).pass);
}

TEST(Relations, SandwichForConstantThree) {
  const auto u = constant_field(unit_interval(0.01), 3.0);
  const auto r = verify_modular_relations(u, ExponentField::affine(2.0, {1.0}));
  EXPECT_GT(r.norm, 1.0);
  const double ratio = std::log(r.rho) / std::log(r.norm);
  EXPECT_GE(ratio, 2.0 - 1e-12);
  EXPECT_LE(ratio, 3.0 + 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.sandwich_applicable);
}

TEST(Relations, ZeroFieldPasses) {
  EXPECT_TRUE(verify_modular_relations(constant_field(unit_square(0.2), 0.0), ExponentField::constant(2)).pass);
}

TEST(Relations, RandomizedSandwich) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> scale(0.01, 20.0);
  const std::vector<ExponentField> ps{ExponentField::affine(1.2, {2.0, -0.5}), ExponentField::radial(1.5, 3.0, {0.2, 0.7}),
                                      ExponentField::constant(2.5)};
  for (int t = 0; t < 60; ++t) {
    const auto m = t % 2 == 0 ? unit_interval(0.05) : unit_square(0.25);
    const auto u = random_field(m, rng, scale(rng));
    const auto r = verify_modular_relations(u, ps[t % ps.size()]);
    EXPECT_TRUE(r.pass) << "trial " << t;
    EXPECT_LE(r.unit_residual, 1e-8);
    EXPECT_GE(r.lower_slack, -1e-8 * std::max(1.0, r.rho));
    EXPECT_GE(r.upper_slack, -1e-8 * std::max(1.0, r.rho));
  }
}

TEST(Holder, ZeroPartner) {
  const auto m = unit_square(0.2);
  std::mt19937_64 rng(1);
  const auto h = holder_check(random_field(m, rng, 1.0), constant_field(m, 0.0), ExponentField::affine(2.0, {1.0, 0.0}));
  EXPECT_EQ(h.lhs, 0.0);
  EXPECT_EQ(h.rhs, 0.0);
  EXPECT_TRUE(h.pass);
}

TEST(Holder, ConstantTwoFactorOfTwo) {
  const auto m = unit_interval(0.01);
  const auto u = DiscreteField::interpolate(m, [](const Point& x) { return std::cos(3 * x[0]); });
  const auto h = holder_check(u, u, ExponentField::constant(2));
  EXPECT_DOUBLE_EQ(h.constant, 1.0);
  const double l2sq = modular(u, ExponentField::constant(2)).value;
  EXPECT_NEAR(h.lhs, l2sq, 1e-12);
  EXPECT_NEAR(h.rhs, l2sq, 1e-8);
  EXPECT_TRUE(h.pass);
}

TEST(Holder, RandomizedAffineExponent) {
  std::mt19937_64 rng(2024);
  const auto p = ExponentField::affine(2.0, {1.0, 0.0});
  const auto m1 = unit_interval(0.1);
  const auto m2 = unit_square(0.5);
  for (int t = 0; t < 1000; ++t) {
    const auto m = t % 2 == 0 ? m1 : m2;
    const auto h = holder_check(random_field(m, rng, 3.0), random_field(m, rng, 3.0), p);
    ASSERT_TRUE(h.pass) << "trial " << t;
    ASSERT_GE(h.slack, 0.0);
  }
}

TEST(Holder, RequiresSharedMesh) {
  EXPECT_THROW(holder_check(constant_field(unit_interval(0.1), 1.0), constant_field(unit_interval(0.1), 1.0),
                            ExponentField::constant(2)),
               Error);
}
