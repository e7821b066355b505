#pragma once

#include <array>
#include <string_view>

#include "schroflow/vec3.hpp"

namespace schroflow {

enum class TargetKind { Sphere, Hyperbolic };

/// Kähler target embedded in R^3 with a signed inner product.
///
/// The unit sphere S^2 uses the Euclidean product and level +1. The hyperbolic
/// plane H(-1) is realized as the upper sheet of the hyperboloid
/// <p,p> = -1 in Minkowski space R^{2,1}, signature (+,+,-). Every operation
/// goes through `inner`, so one code path serves both targets.
class TargetManifold {
 public:
  static constexpr int ambient_dim = 3;

  static TargetManifold sphere() { return TargetManifold(TargetKind::Sphere); }
  static TargetManifold hyperbolic() { return TargetManifold(TargetKind::Hyperbolic); }
  /// "s2" or "h2"; throws Error(InvalidArgument) otherwise.
  static TargetManifold from_name(std::string_view name);

  TargetKind kind() const { return kind_; }
  std::string_view name() const { return kind_ == TargetKind::Sphere ? "s2" : "h2"; }
  std::array<int, 3> signature() const { return {1, 1, kind_ == TargetKind::Sphere ? 1 : -1}; }
  double constraint_level() const { return kind_ == TargetKind::Sphere ? 1.0 : -1.0; }

  double inner(const Vec3& a, const Vec3& b) const {
    return a.x * b.x + a.y * b.y + last_sign() * a.z * b.z;
  }
  double sq_norm(const Vec3& a) const { return inner(a, a); }

  /// <p,p> - constraint_level.
  double constraint_residual(const Vec3& p) const { return sq_norm(p) - constraint_level(); }

  /// Radial rescale onto the target. Throws Error(NonProjectable) for the zero
  /// vector on S^2, and for anything outside the future timelike cone on H(-1).
  Vec3 project_point(const Vec3& x) const;

  /// v - (<v,p>/<p,p>) p. Uses the actual <p,p>, so it also serves points that
  /// sit slightly off the constraint surface.
  Vec3 project_tangent(const Vec3& p, const Vec3& v) const {
    return v - (inner(v, p) / inner(p, p)) * p;
  }

  /// J(p)v: p x v on S^2, the Minkowski cross product (last component of the
  /// Euclidean cross product negated) on H(-1).
  Vec3 complex_structure(const Vec3& p, const Vec3& v) const {
    Vec3 c = cross(p, v);
    c.z *= last_sign();
    return c;
  }

  /// Normal correction turning Delta u into the tension field at p:
  /// (grad_sq / level) p, i.e. +|grad u|^2 u on S^2 and -|grad u|^2 u on H(-1).
  Vec3 tension_correction(const Vec3& p, double grad_sq) const {
    return (grad_sq / constraint_level()) * p;
  }

  /// Geodesic distance between two points of the target.
  double distance(const Vec3& p, const Vec3& q) const;

  friend bool operator==(const TargetManifold&, const TargetManifold&) = default;

 private:
  explicit TargetManifold(TargetKind kind) : kind_(kind) {}
  double last_sign() const { return kind_ == TargetKind::Sphere ? 1.0 : -1.0; }

  TargetKind kind_;
};

}  // namespace schroflow
