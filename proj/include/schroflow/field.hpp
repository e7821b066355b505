#pragma once

#include <span>
#include <vector>

#include "schroflow/grid.hpp"
#include "schroflow/target.hpp"
#include "schroflow/vec3.hpp"

namespace schroflow {

/// One ambient vector per grid node.
using Section = std::vector<Vec3>;

/// Grid-sampled map u: M -> N, stored as ambient K-vectors per node.
///
/// The constraint is not enforced on construction; `constraint_drift` reports
/// it. Use `Field::projected` to build an on-target field from raw values.
class Field {
 public:
  Field(DomainGrid grid, TargetManifold target, std::vector<Vec3> values);

  static Field projected(DomainGrid grid, TargetManifold target, std::vector<Vec3> raw);

  const DomainGrid& grid() const { return grid_; }
  const TargetManifold& target() const { return target_; }
  std::span<const Vec3> values() const { return values_; }
  std::vector<Vec3>& mutable_values() { return values_; }
  std::size_t size() const { return values_.size(); }
  const Vec3& operator[](std::size_t i) const { return values_[i]; }

 private:
  DomainGrid grid_;
  TargetManifold target_;
  std::vector<Vec3> values_;
};

/// Per-node |grad u|^2 consistent with the compact Laplacian: -<Delta u, u>.
/// For on-target u this equals the mean of forward and backward squared
/// differences summed over axes.
std::vector<double> tension_density(const Field& u);

/// tau(u) = Delta u + tension_correction(u, tension_density(u)); tangent at
/// every node up to rounding.
Section tension(const Field& u);

/// Per-node 1/2 sum_a <D+_a u, D+_a u>_sig.
std::vector<double> energy_density(const Field& u);

/// E(u) = integral of `energy_density`. Summation by parts makes its first
/// variation exactly -integral <Delta u, phi>.
double energy(const Field& u);

/// epsilon tau(u) + J(u) tau(u).
Section schrodinger_velocity(const Field& u, double epsilon);

/// Same as `schrodinger_velocity` but for raw ambient values that may sit off
/// the target. Projection and J use the actual <y,y>, so the velocity stays
/// orthogonal to y under the signed product.
Section velocity_kernel(const DomainGrid& grid, const TargetManifold& target,
                        std::span<const Vec3> y, double epsilon);

/// Pullback connection: (nabla_a s)(x) = P_u(x) (d_a s)(x) with central d_a.
std::vector<Section> covariant_derivative(const Field& u, std::span<const Vec3> s);

/// Tangent-projected central gradient of u, one section per axis.
std::vector<Section> tangent_gradient(const Field& u);

/// max over nodes of |<u,u>_sig - level|.
double constraint_drift(const Field& u);

/// max over nodes of |grad u|_h, using `tangent_gradient`.
double sup_gradient(const Field& u);

}  // namespace schroflow
