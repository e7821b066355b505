#include "schroflow/target.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schroflow/error.hpp"

namespace schroflow {

TargetManifold TargetManifold::from_name(std::string_view name) {
  if (name == "s2") return sphere();
  if (name == "h2") return hyperbolic();
  throw Error(ErrorKind::InvalidArgument,
              "unknown target '" + std::string(name) + "' (expected s2 or h2)");
}

Vec3 TargetManifold::project_point(const Vec3& x) const {
  if (!is_finite(x)) throw Error(ErrorKind::NonProjectable, "non-finite point");
  if (kind_ == TargetKind::Sphere) {
    const double r = norm(x);
    if (!(r > 0.0)) throw Error(ErrorKind::NonProjectable, "zero vector has no radial projection");
    return x / r;
  }
  const double q = sq_norm(x);
  if (!(q < 0.0) || !(x.z > 0.0)) {
    throw Error(ErrorKind::NonProjectable, "point outside the future timelike cone");
  }
  return x / std::sqrt(-q);
}

double TargetManifold::distance(const Vec3& p, const Vec3& q) const {
  if (kind_ == TargetKind::Sphere) return std::atan2(norm(cross(p, q)), dot(p, q));
  return std::acosh(std::max(1.0, -inner(p, q)));
}

}  // namespace schroflow
