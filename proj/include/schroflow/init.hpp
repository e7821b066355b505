#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "schroflow/field.hpp"

namespace schroflow {

/// Initial condition spec "name:args". Args are either positional numbers
/// ("constant:0,0,1") or key=value pairs ("magnon:k=2,theta=0.785").
struct InitSpec {
  std::string name = "constant";
  std::vector<double> positional;
  std::map<std::string, double> params;

  static InitSpec parse(std::string_view text);
  std::string to_string() const;
  double get(const std::string& key, double fallback) const;

  friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

/// Names accepted by `make_initial`.
std::vector<std::string> initializer_names();

/// Throws Error(InvalidArgument) if `spec` is unknown or undefined for `target`.
void validate_initializer(const InitSpec& spec, const TargetManifold& target);

/// Builds the initial map. Supported:
///   constant:a,b,c                       projected constant map
///   greatcircle:w=1                      (cos w x, sin w x, 0), S^2 only
///   magnon:k=2,theta=0.785               precessing spin wave along axis 0
///   random-smooth:seed=,modes=4,amp=0.3  low-mode trigonometric perturbation
///   bump:amp=4,width=0.4                 concentrated tilt around the centre
/// Wavenumbers are in units of 2 pi / L along each axis. `default_seed` is used
/// when random-smooth has no explicit seed.
Field make_initial(const DomainGrid& grid, const TargetManifold& target, const InitSpec& spec,
                   std::uint64_t default_seed = 42);

/// Continuum precession frequency of the magnon with wavenumber `k` (already
/// scaled by 2 pi / L) and cone angle `theta`: k^2 cos(theta) on S^2,
/// k^2 cosh(theta) on H(-1).
double magnon_frequency(const TargetManifold& target, double k, double theta);

}  // namespace schroflow
