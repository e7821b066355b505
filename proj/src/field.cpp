#include "schroflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schroflow/error.hpp"
#include "schroflow/parallel.hpp"

namespace schroflow {

Field::Field(DomainGrid grid, TargetManifold target, std::vector<Vec3> values)
    : grid_(std::move(grid)), target_(target), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw Error(ErrorKind::InvalidArgument,
                "field has " + std::to_string(values_.size()) + " values for " +
                    std::to_string(grid_.node_count()) + " grid nodes");
  }
}

Field Field::projected(DomainGrid grid, TargetManifold target, std::vector<Vec3> raw) {
  for (auto& v : raw) v = target.project_point(v);
  return Field(std::move(grid), target, std::move(raw));
}

std::vector<double> tension_density(const Field& u) {
  const auto& target = u.target();
  const auto lap = laplacian(u.grid(), u.values());
  std::vector<double> g(u.size());
  const double level = target.constraint_level();
  for (std::size_t i = 0; i < u.size(); ++i) {
    // Rescaled by level/<u,u> so the correction stays exactly normal off the
    // constraint surface as well.
    g[i] = -level * target.inner(lap[i], u[i]) / target.sq_norm(u[i]);
  }
  return g;
}

Section tension(const Field& u) {
  const auto& target = u.target();
  auto tau = laplacian(u.grid(), u.values());
  const auto g = tension_density(u);
  for (std::size_t i = 0; i < u.size(); ++i) tau[i] += target.tension_correction(u[i], g[i]);
  return tau;
}

std::vector<double> energy_density(const Field& u) {
  const auto& grid = u.grid();
  std::vector<double> e(u.size(), 0.0);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const auto d = forward_difference(grid, u.values(), axis);
    for (std::size_t i = 0; i < u.size(); ++i) e[i] += 0.5 * u.target().sq_norm(d[i]);
  }
  return e;
}

double energy(const Field& u) { return integrate(u.grid(), energy_density(u)); }

Section velocity_kernel(const DomainGrid& grid, const TargetManifold& target,
                        std::span<const Vec3> y, double epsilon) {
  auto v = laplacian(grid, y);
  parallel_for(v.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 tau = target.project_tangent(y[i], v[i]);
      v[i] = epsilon * tau + target.complex_structure(y[i], tau);
    }
  });
  return v;
}

Section schrodinger_velocity(const Field& u, double epsilon) {
  return velocity_kernel(u.grid(), u.target(), u.values(), epsilon);
}

std::vector<Section> covariant_derivative(const Field& u, std::span<const Vec3> s) {
  auto out = gradient(u.grid(), s);
  for (auto& section : out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      section[i] = u.target().project_tangent(u[i], section[i]);
    }
  }
  return out;
}

std::vector<Section> tangent_gradient(const Field& u) {
  return covariant_derivative(u, u.values());
}

double constraint_drift(const Field& u) {
  double drift = 0.0;
  for (const auto& p : u.values()) {
    drift = std::max(drift, std::fabs(u.target().constraint_residual(p)));
  }
  return drift;
}

double sup_gradient(const Field& u) {
  const auto grad = tangent_gradient(u);
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double sq = 0.0;
    for (const auto& g : grad) sq += u.target().sq_norm(g[i]);
    const double mag = std::sqrt(std::max(sq, 0.0));
    if (!std::isfinite(mag)) return mag;
    sup = std::max(sup, mag);
  }
  return sup;
}

}  // namespace schroflow
