#ifndef VEXLAB_EXPONENT_FIELD_HPP
#define VEXLAB_EXPONENT_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/domain.hpp"
#include "vexlab/mesh.hpp"

namespace vexlab {

enum class ExponentKind { Constant, Affine, Radial, Tabulated, Conjugate, SobolevConjugate };

/// Resolution of the point clouds used for ess-inf/ess-sup proxies.
struct SamplingPlan {
  int resolution = 64;
};

/// Variable exponent p(x). Immutable; copies share state.
///
/// Kinds: constant c, affine a + b.x, radial base + amp |x - center|^2,
/// P1-tabulated on a mesh, and the pointwise maps p' = p/(p-1) and
/// p* = N p/(N - p) applied to another field.
class ExponentField {
 public:
  static ExponentField constant(double c) {
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::Constant;
    s->a = c;
    return ExponentField(std::move(s));
  }

  static ExponentField affine(double a, std::vector<double> b) {
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::Affine;
    s->a = a;
    s->vec = std::move(b);
    return ExponentField(std::move(s));
  }

  static ExponentField radial(double base, double amp, std::vector<double> center) {
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::Radial;
    s->a = base;
    s->amp = amp;
    s->vec = std::move(center);
    return ExponentField(std::move(s));
  }

  static ExponentField tabulated(std::shared_ptr<const Mesh> mesh, std::vector<double> nodal) {
    if (nodal.size() != mesh->num_nodes())
      throw Error(ErrorCode::InvalidArgument, "tabulated exponent needs one value per mesh node");
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::Tabulated;
    s->locator = std::make_shared<PointLocator>(mesh);
    s->mesh = std::move(mesh);
    s->nodal = std::move(nodal);
    return ExponentField(std::move(s));
  }

  ExponentKind kind() const { return s_->kind; }
  bool is_constant() const { return s_->kind == ExponentKind::Constant; }
  double constant_value() const { return s_->a; }
  const Mesh* tabulation_mesh() const { return s_->mesh.get(); }
  const std::vector<double>& nodal_values() const { return s_->nodal; }
  const ExponentField& base() const { return *s_->base; }
  int sobolev_dim() const { return s_->dim; }
  double affine_offset() const { return s_->a; }
  const std::vector<double>& affine_slope() const { return s_->vec; }
  double radial_amplitude() const { return s_->amp; }
  const std::vector<double>& radial_center() const { return s_->vec; }

  double value_at(std::span<const double> x) const {
    const State& s = *s_;
    switch (s.kind) {
      case ExponentKind::Constant: return s.a;
      case ExponentKind::Affine: {
        double v = s.a;
        for (std::size_t i = 0; i < s.vec.size() && i < x.size(); ++i) v += s.vec[i] * x[i];
        return v;
      }
      case ExponentKind::Radial: return s.a + s.amp * radius2(x);
      case ExponentKind::Tabulated: {
        const auto loc = s.locator->locate(as_point(x));
        double v = 0.0;
        for (std::size_t k = 0; k < s.mesh->nodes_per_cell(); ++k) v += loc.bary[k] * s.nodal[s.mesh->cell(loc.cell)[k]];
        return v;
      }
      case ExponentKind::Conjugate: {
        const double t = s.base->value_at(x);
        if (!(t > 1.0)) throw Error(ErrorCode::NonElliptic, "conjugate of exponent <= 1");
        return t / (t - 1.0);
      }
      case ExponentKind::SobolevConjugate: {
        const double t = s.base->value_at(x);
        if (!(t < s.dim)) throw Error(ErrorCode::ExponentTooLarge, "p(x) >= N, Sobolev conjugate is infinite");
        return s.dim * t / (s.dim - t);
      }
    }
    return 0.0;
  }

  double value_at(const Point& x) const { return value_at(std::span<const double>(x.data(), kMaxMeshDim)); }

  /// Gradient in the meshed coordinates. Exactly zero for constant fields;
  /// per-cell constant for tabulated ones.
  Point gradient_at(const Point& x) const {
    const State& s = *s_;
    switch (s.kind) {
      case ExponentKind::Constant: return {0.0, 0.0};
      case ExponentKind::Affine: return {s.vec.size() > 0 ? s.vec[0] : 0.0, s.vec.size() > 1 ? s.vec[1] : 0.0};
      case ExponentKind::Radial: {
        Point g{0.0, 0.0};
        for (int i = 0; i < kMaxMeshDim; ++i) g[i] = 2.0 * s.amp * (x[i] - (i < static_cast<int>(s.vec.size()) ? s.vec[i] : 0.0));
        return g;
      }
      case ExponentKind::Tabulated: {
        const auto loc = s.locator->locate(x);
        Point g{0.0, 0.0};
        for (std::size_t k = 0; k < s.mesh->nodes_per_cell(); ++k)
          g = g + s.nodal[s.mesh->cell(loc.cell)[k]] * s.mesh->shape_gradient(loc.cell, k);
        return g;
      }
      case ExponentKind::Conjugate: {
        const double t = s.base->value_at(x);
        if (!(t > 1.0)) throw Error(ErrorCode::NonElliptic, "conjugate of exponent <= 1");
        return (-1.0 / ((t - 1.0) * (t - 1.0))) * s.base->gradient_at(x);
      }
      case ExponentKind::SobolevConjugate: {
        const double t = s.base->value_at(x);
        if (!(t < s.dim)) throw Error(ErrorCode::ExponentTooLarge, "p(x) >= N, Sobolev conjugate is infinite");
        return (s.dim * s.dim / ((s.dim - t) * (s.dim - t))) * s.base->gradient_at(x);
      }
    }
    return {0.0, 0.0};
  }

  static ExponentField conjugate_of(const ExponentField& p) {
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::Conjugate;
    s->base = std::make_shared<ExponentField>(p);
    return ExponentField(std::move(s));
  }

  static ExponentField sobolev_of(const ExponentField& p, int n) {
    auto s = std::make_shared<State>();
    s->kind = ExponentKind::SobolevConjugate;
    s->base = std::make_shared<ExponentField>(p);
    s->dim = n;
    return ExponentField(std::move(s));
  }

 private:
  struct State {
    ExponentKind kind = ExponentKind::Constant;
    double a = 0.0;
    double amp = 0.0;
    std::vector<double> vec;
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const PointLocator> locator;
    std::vector<double> nodal;
    std::shared_ptr<const ExponentField> base;
    int dim = 0;
  };

  explicit ExponentField(std::shared_ptr<const State> s) : s_(std::move(s)) {}

  double radius2(std::span<const double> x) const {
    double r2 = 0.0;
    const std::size_t n = std::max(x.size(), s_->vec.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = i < x.size() ? x[i] : 0.0;
      const double ci = i < s_->vec.size() ? s_->vec[i] : 0.0;
      r2 += (xi - ci) * (xi - ci);
    }
    return r2;
  }

  static Point as_point(std::span<const double> x) { return {x.size() > 0 ? x[0] : 0.0, x.size() > 1 ? x[1] : 0.0}; }

  std::shared_ptr<const State> s_;
};

namespace detail {

inline std::pair<double, double> raw_bounds(const ExponentField& p, const Domain& omega) {
  switch (p.kind()) {
    case ExponentKind::Constant: return {p.constant_value(), p.constant_value()};
    case ExponentKind::Affine: {
      const auto& b = p.affine_slope();
      auto slope = [&](int i) { return i < static_cast<int>(b.size()) ? b[i] : 0.0; };
      if (omega.kind() == DomainKind::Interval || omega.kind() == DomainKind::Polygon) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& v : omega.vertices()) {
          double val = p.affine_offset();
          for (int i = 0; i < omega.dim(); ++i) val += slope(i) * v[i];
          lo = std::min(lo, val);
          hi = std::max(hi, val);
        }
        return {lo, hi};
      }
      double mid = p.affine_offset(), len2 = 0.0;
      for (int i = 0; i < omega.dim(); ++i) {
        mid += slope(i) * omega.center()[i];
        len2 += slope(i) * slope(i);
      }
      const double spread = std::sqrt(len2) * omega.radius();
      return {mid - spread, mid + spread};
    }
    case ExponentKind::Radial: {
      const auto [rmin, rmax] = omega.distance_range(p.radial_center());
      const double base = p.value_at(p.radial_center());
      const double v1 = base + p.radial_amplitude() * rmin * rmin;
      const double v2 = base + p.radial_amplitude() * rmax * rmax;
      return {std::min(v1, v2), std::max(v1, v2)};
    }
    case ExponentKind::Tabulated: {
      const auto& v = p.nodal_values();
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return {*lo, *hi};
    }
    case ExponentKind::Conjugate: {
      const auto [lo, hi] = raw_bounds(p.base(), omega);
      if (!(lo > 1.0)) throw Error(ErrorCode::NonElliptic, "conjugate of exponent <= 1");
      return {hi / (hi - 1.0), lo / (lo - 1.0)};
    }
    case ExponentKind::SobolevConjugate: {
      const auto [lo, hi] = raw_bounds(p.base(), omega);
      const double n = p.sobolev_dim();
      if (!(hi < n)) throw Error(ErrorCode::ExponentTooLarge, "p+ >= N, Sobolev conjugate is infinite");
      return {n * lo / (n - lo), n * hi / (n - hi)};
    }
  }
  return {0.0, 0.0};
}

inline void require_elliptic(double p_minus) {
  if (!(p_minus > 1.0))
    throw Error(ErrorCode::NonElliptic, "exponent infimum " + std::to_string(p_minus) + " is not > 1");
}

}  // namespace detail

/// (p-, p+) over the closure of Omega: closed form for analytic kinds, nodal
/// extremes (exact for the P1 interpolant) for tabulated ones.
inline std::pair<double, double> bounds(const ExponentField& p, const Domain& omega, SamplingPlan sampling = {}) {
  if (sampling.resolution < 1) throw Error(ErrorCode::InvalidArgument, "sampling resolution must be >= 1");
  auto b = detail::raw_bounds(p, omega);
  detail::require_elliptic(b.first);
  if (!std::isfinite(b.second)) throw Error(ErrorCode::InvalidArgument, "exponent is unbounded on the domain");
  return b;
}

/// Min/max of p over the sample cloud of Omega; never outside bounds().
inline std::pair<double, double> sampled_bounds(const ExponentField& p, const Domain& omega, SamplingPlan sampling) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x : sample_points(omega, sampling.resolution)) {
    const double v = p.value_at(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  detail::require_elliptic(lo);
  return {lo, hi};
}

/// p' with 1/p + 1/p' = 1 pointwise.
inline ExponentField conjugate(const ExponentField& p) {
  if (p.is_constant()) {
    const double c = p.constant_value();
    detail::require_elliptic(c);
    return ExponentField::constant(c / (c - 1.0));
  }
  return ExponentField::conjugate_of(p);
}

inline ExponentField conjugate(const ExponentField& p, const Domain& omega) {
  bounds(p, omega);
  return conjugate(p);
}

/// p* = N p / (N - p). Throws ExponentTooLarge wherever p >= N is detected.
inline ExponentField sobolev_conjugate(const ExponentField& p, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (p.is_constant()) {
    const double c = p.constant_value();
    if (!(c < n)) throw Error(ErrorCode::ExponentTooLarge, "p >= N, Sobolev conjugate is infinite");
    return ExponentField::constant(n * c / (n - c));
  }
  return ExponentField::sobolev_of(p, n);
}

inline ExponentField sobolev_conjugate(const ExponentField& p, int n, const Domain& omega) {
  const auto [lo, hi] = bounds(p, omega);
  (void)lo;
  if (!(hi < n)) throw Error(ErrorCode::ExponentTooLarge, "p+ >= N, Sobolev conjugate is infinite");
  return sobolev_conjugate(p, n);
}

struct LogHolderEstimate {
  double c_hat = 0.0;
  std::vector<double> worst_x, worst_y;
  /// max over sampled balls B of |B|^(p-_B - p+_B)
  double ball_max = 1.0;
  std::size_t pairs = 0;
  std::size_t balls = 0;
};

namespace detail {

template <typename Rng>
std::vector<double> random_point(const Domain& omega, Rng& rng) {
  const auto [lo, hi] = omega.bounding_box();
  std::vector<double> x(omega.dim());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (int i = 0; i < omega.dim(); ++i) x[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    if (omega.contains(x, 0.0)) return x;
  }
  // Rejection only fails for slivers; fall back to a deterministic sample.
  return sample_points(omega, 1).front();
}

template <typename Rng>
std::vector<double> random_direction(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> d(dim);
  double n2 = 0.0;
  while (n2 < 1e-20) {
    n2 = 0.0;
    for (auto& v : d) {
      v = g(rng);
      n2 += v * v;
    }
  }
  for (auto& v : d) v /= std::sqrt(n2);
  return d;
}

}  // namespace detail

/// Empirical log-Hoelder constant: max of |p(x) - p(y)| (-log|x - y|) over
/// random pairs with |x - y| <= 1/2, plus the ball form |B|^(p-_B - p+_B).
/// Finite output is evidence, not proof.
inline LogHolderEstimate log_holder_estimate(const ExponentField& p, const Domain& omega, std::size_t pairs,
                                             std::uint64_t seed = 42) {
  if (pairs < 1) throw Error(ErrorCode::InvalidArgument, "pairs must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LogHolderEstimate out;
  const int dim = omega.dim();
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto x = detail::random_point(omega, rng);
    std::vector<double> y(dim);
    double t = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      t = unit(rng) < 0.5 ? 0.5 * (1.0 - unit(rng)) : 0.5 * std::exp(-25.0 * unit(rng));
      const auto d = detail::random_direction(dim, rng);
      for (int i = 0; i < dim; ++i) y[i] = x[i] + t * d[i];
      found = omega.contains(y, 0.0) && t > 0.0;
    }
    if (!found) continue;
    ++out.pairs;
    const double c = std::abs(p.value_at(x) - p.value_at(y)) * (-std::log(t));
    if (c > out.c_hat || out.worst_x.empty()) {
      out.c_hat = std::max(out.c_hat, c);
      out.worst_x = x;
      out.worst_y = y;
    }
  }
  const std::size_t balls = std::max<std::size_t>(1, pairs / 10);
  constexpr int kPointsPerBall = 16;
  for (std::size_t k = 0; k < balls; ++k) {
    const auto c = detail::random_point(omega, rng);
    const double dmax = std::min(0.5, omega.distance_to_boundary(c));
    if (!(dmax > 0.0)) continue;
    const double r = dmax * (1.0 - unit(rng));
    double lo = p.value_at(c), hi = lo;
    for (int j = 0; j < kPointsPerBall; ++j) {
      const auto d = detail::random_direction(dim, rng);
      const double s = r * std::pow(unit(rng), 1.0 / dim);
      std::vector<double> z(dim);
      for (int i = 0; i < dim; ++i) z[i] = c[i] + s * d[i];
      const double v = p.value_at(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double vol = std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(r, dim);
    out.ball_max = std::max(out.ball_max, std::pow(vol, lo - hi));
    ++out.balls;
  }
  return out;
}

/// Sampled proxy for ess inf (p*(x) - q(x)); positive means the compact
/// embedding criterion holds at this resolution.
inline double embedding_gap(const ExponentField& p, const ExponentField& q, const Domain& omega, int n,
                            SamplingPlan sampling = {}) {
  const auto pstar = sobolev_conjugate(p, n, omega);
  const auto [qlo, qhi] = detail::raw_bounds(q, omega);
  (void)qhi;
  if (qlo < 1.0) throw Error(ErrorCode::InvalidArgument, "embedding gap needs q- >= 1");
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& x : sample_points(omega, sampling.resolution)) gap = std::min(gap, pstar.value_at(x) - q.value_at(x));
  return gap;
}

}  // namespace vexlab

#endif  // VEXLAB_EXPONENT_FIELD_HPP
