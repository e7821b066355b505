#pragma once

#include <limits>
#include <vector>

#include "schroflow/field.hpp"

namespace schroflow::norms {

/// Smallest integer greater than m/2.
constexpr int critical_order(int m) { return m / 2 + 1; }

/// Largest derivative order k whose norms the grid resolves: k + 1 <= n/4 on
/// every axis.
int max_resolved_order(const DomainGrid& grid);

/// Throws Error(ResolutionExceeded) when `k` is above `max_resolved_order`.
void require_resolution(const DomainGrid& grid, int k);

/// Snapshot of every monitored quantity at one time.
struct NormReport {
  double time = 0.0;
  double energy = 0.0;
  double sup_grad = 0.0;
  std::vector<double> w_norms;  ///< ||Du||_{W^{l,2}}, l = 0..k
  std::vector<double> h_norms;  ///< ||grad u||_{H^{l,2}}, l = 0..k
  double constraint_drift = 0.0;
};

// Index bookkeeping: both families are indexed by the number of derivatives
// taken of the first derivative. h_norm(u, l) sums |nabla^i (nabla u)|^2 for
// i = 0..l, w_norm(u, l) sums |D^i u|^2 for i = 1..l+1. So the pair
// (w_norm(u, k-1), h_norm(u, k-1)) is what the order-k comparison uses.
//
// The first-derivative terms of both families use forward differences, so
// h_norm(u, 0)^2 = w_norm(u, 0)^2 = 2 E(u) on S^2. Higher terms iterate the
// central difference (plain for W, tangent-projected for H). All multi-indices
// are kept separately; nothing is symmetrized. W norms use the Euclidean
// product of ambient components on both targets.

/// Bundle-valued norm ||grad u||_{H^{k,2}}.
double h_norm(const Field& u, int k);
/// Ambient norm ||Du||_{W^{k,2}}.
double w_norm(const Field& u, int k);

/// Cumulative lists l = 0..k_max; nondecreasing by construction.
std::vector<double> h_norms(const Field& u, int k_max);
std::vector<double> w_norms(const Field& u, int k_max);

NormReport make_report(const Field& u, double time, int k_max);

/// Result of comparing the two norm families at order k (k > m/2):
///   ||Du||_{W^{k-1,2}}    <= C sum_{t=1..k} ||grad u||_{H^{k-1,2}}^t
///   ||grad u||_{H^{k-1,2}} <= C sum_{t=1..k} ||Du||_{W^{k-1,2}}^t
struct NormComparison {
  int k = 0;
  double w_lhs = 0.0;      ///< ||Du||_{W^{k-1,2}}
  double w_rhs_sum = 0.0;  ///< sum_t ||grad u||_{H^{k-1,2}}^t
  double h_lhs = 0.0;      ///< ||grad u||_{H^{k-1,2}}
  double h_rhs_sum = 0.0;  ///< sum_t ||Du||_{W^{k-1,2}}^t
  double c_w = 0.0;        ///< smallest C for the first inequality
  double c_h = 0.0;        ///< smallest C for the second inequality
  double fitted_c = 0.0;   ///< max(c_w, c_h)
};

/// Throws Error(InvalidArgument) if k <= m/2, Error(ResolutionExceeded) if
/// k - 1 is not resolved.
NormComparison compare_section_norms(const Field& u, int k);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Interpolation parameters for
///   ||nabla^j s||_{L^p} <= C ||s||_{H^{n,r}}^a ||s||_{L^q}^{1-a},  s = grad u,
/// with 1/p = j/m + a (1/r - n/m) + (1-a)/q. Exponents may be `infinity`.
struct InterpolationParams {
  int j = 0;
  int n = 1;
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;
  double a = 0.0;

  friend bool operator==(const InterpolationParams&, const InterpolationParams&) = default;
};

/// Admissibility check for domain dimension m. Throws Error(ParameterImbalance)
/// if the exponents are out of range or break the balance relation (to 1e-12),
/// Error(ExcludedEndpoint) for a = 1 with r = m/(n-j) != 1.
void validate_interpolation(int m, const InterpolationParams& params);

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;  ///< right side without the constant
  double ratio = 0.0;
};

InterpolationCheck check_interpolation_inequality(const Field& u,
                                                  const InterpolationParams& params);

/// (integral |f|^p)^{1/p} for a nonnegative node function; p = infinity gives max.
double lp_norm(const DomainGrid& grid, std::span<const double> magnitude, double p);

}  // namespace schroflow::norms
