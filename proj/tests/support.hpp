#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "schroflow/field.hpp"
#include "schroflow/init.hpp"

namespace testing {

using schroflow::DomainGrid;
using schroflow::Field;
using schroflow::TargetManifold;
using schroflow::Vec3;

inline constexpr double pi = std::numbers::pi;

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng)};
}

/// Random point on the target.
inline Vec3 random_point(const TargetManifold& target, std::mt19937_64& rng) {
  if (target.kind() == schroflow::TargetKind::Sphere) {
    Vec3 x;
    do x = random_vec(rng); while (norm(x) < 0.1);
    return target.project_point(x);
  }
  const Vec3 x = random_vec(rng, 2.0);
  return {x.x, x.y, std::sqrt(1.0 + x.x * x.x + x.y * x.y)};
}

inline Field from_function(const DomainGrid& grid, const TargetManifold& target, auto&& fn) {
  std::vector<Vec3> v(grid.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = grid.dim() == 1 ? fn(grid.coordinate(i, 0), 0.0)
                           : fn(grid.coordinate(i, 0), grid.coordinate(i, 1));
  }
  return Field(grid, target, std::move(v));
}

inline Field great_circle(int n, double w = 1.0) {
  return from_function(DomainGrid::circle(n), TargetManifold::sphere(),
                       [w](double x, double) { return Vec3{std::cos(w * x), std::sin(w * x), 0.0}; });
}

inline Field random_smooth(const DomainGrid& grid, const TargetManifold& target,
                           std::uint64_t seed) {
  auto spec = schroflow::InitSpec::parse("random-smooth");
  spec.params["seed"] = double(seed);
  return schroflow::make_initial(grid, target, spec);
}

/// Rotation about the unit axis by angle (Rodrigues).
struct Rotation {
  double m[3][3];
  Rotation(Vec3 axis, double angle) {
    axis = (1.0 / norm(axis)) * axis;
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    double r[3][3] = {{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
                      {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
                      {t * x * z - s * y, t * y * z + s * x, t * z * z + c}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = r[i][j];
  }
  Vec3 operator()(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Field apply(const Field& u) const {
    std::vector<Vec3> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(u[i]);
    return Field(u.grid(), u.target(), std::move(v));
  }
};

/// Hyperbolic boost in the (x, z) plane; an isometry of H(-1).
inline Vec3 boost(const Vec3& v, double rapidity) {
  const double c = std::cosh(rapidity), s = std::sinh(rapidity);
  return {c * v.x + s * v.z, v.y, s * v.x + c * v.z};
}

inline double max_diff(std::span<const Vec3> a, std::span<const Vec3> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, max_abs(a[i] - b[i]));
  return e;
}

inline double order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

}  // namespace testing
