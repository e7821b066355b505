#include "schroflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schroflow/error.hpp"

namespace schroflow::norms {

namespace {

using Level = std::vector<Section>;

// Level l holds nabla^l (nabla u), one section per multi-index of length l+1.
std::vector<Level> covariant_tower(const Field& u, int top) {
  std::vector<Level> levels;
  levels.push_back(tangent_gradient(u));
  for (int l = 1; l <= top; ++l) {
    Level next;
    next.reserve(levels.back().size() * std::size_t(u.grid().dim()));
    for (const auto& s : levels.back()) {
      for (auto& d : covariant_derivative(u, s)) next.push_back(std::move(d));
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

std::vector<double> pointwise_magnitude(const Field& u, const Level& level) {
  std::vector<double> mag(u.size(), 0.0);
  for (const auto& s : level) {
    for (std::size_t i = 0; i < u.size(); ++i) mag[i] += u.target().sq_norm(s[i]);
  }
  for (auto& m : mag) m = std::sqrt(std::max(m, 0.0));
  return mag;
}

double integrated_square(const Field& u, const Level& level, bool euclidean) {
  std::vector<double> sq(u.size(), 0.0);
  for (const auto& s : level) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      sq[i] += euclidean ? dot(s[i], s[i]) : u.target().sq_norm(s[i]);
    }
  }
  return integrate(u.grid(), sq);
}

Level forward_level(const Field& u) {
  Level level;
  for (int axis = 0; axis < u.grid().dim(); ++axis) {
    level.push_back(forward_difference(u.grid(), u.values(), axis));
  }
  return level;
}

std::vector<double> cumulative_roots(const std::vector<double>& terms) {
  std::vector<double> out;
  double acc = 0.0;
  for (double t : terms) {
    acc += std::max(t, 0.0);
    out.push_back(std::sqrt(acc));
  }
  return out;
}

double power_sum(double x, int k) {
  double sum = 0.0;
  double power = 1.0;
  for (int t = 1; t <= k; ++t) {
    power *= x;
    sum += power;
  }
  return sum;
}

double smallest_constant(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return rhs == 0.0 ? infinity : lhs / rhs;
}

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

int max_resolved_order(const DomainGrid& grid) { return grid.min_size() / 4 - 1; }

void require_resolution(const DomainGrid& grid, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "norm order must be nonnegative");
  if (k > max_resolved_order(grid)) {
    throw Error(ErrorKind::ResolutionExceeded,
                "order " + std::to_string(k) + " needs at least " + std::to_string(4 * (k + 1)) +
                    " nodes per axis, grid has " + std::to_string(grid.min_size()));
  }
}

std::vector<double> h_norms(const Field& u, int k_max) {
  require_resolution(u.grid(), k_max);
  std::vector<double> terms{integrated_square(u, forward_level(u), false)};
  if (k_max > 0) {
    const auto tower = covariant_tower(u, k_max);
    for (int l = 1; l <= k_max; ++l) terms.push_back(integrated_square(u, tower[l], false));
  }
  return cumulative_roots(terms);
}

std::vector<double> w_norms(const Field& u, int k_max) {
  require_resolution(u.grid(), k_max);
  std::vector<double> terms{integrated_square(u, forward_level(u), true)};
  Level level = gradient(u.grid(), u.values());
  for (int i = 2; i <= k_max + 1; ++i) {
    Level next;
    next.reserve(level.size() * std::size_t(u.grid().dim()));
    for (const auto& s : level) {
      for (int axis = 0; axis < u.grid().dim(); ++axis) {
        next.push_back(gradient(u.grid(), std::span<const Vec3>(s), axis));
      }
    }
    level = std::move(next);
    terms.push_back(integrated_square(u, level, true));
  }
  return cumulative_roots(terms);
}

double h_norm(const Field& u, int k) { return h_norms(u, k).back(); }
double w_norm(const Field& u, int k) { return w_norms(u, k).back(); }

NormReport make_report(const Field& u, double time, int k_max) {
  NormReport r;
  r.time = time;
  r.energy = energy(u);
  r.sup_grad = sup_gradient(u);
  r.w_norms = w_norms(u, k_max);
  r.h_norms = h_norms(u, k_max);
  r.constraint_drift = constraint_drift(u);
  return r;
}

NormComparison compare_section_norms(const Field& u, int k) {
  const int m = u.grid().dim();
  if (2 * k <= m) {
    throw Error(ErrorKind::InvalidArgument,
                "comparison order k=" + std::to_string(k) + " must exceed m/2");
  }
  require_resolution(u.grid(), k - 1);
  NormComparison c;
  c.k = k;
  c.w_lhs = w_norm(u, k - 1);
  c.h_lhs = h_norm(u, k - 1);
  c.w_rhs_sum = power_sum(c.h_lhs, k);
  c.h_rhs_sum = power_sum(c.w_lhs, k);
  c.c_w = smallest_constant(c.w_lhs, c.w_rhs_sum);
  c.c_h = smallest_constant(c.h_lhs, c.h_rhs_sum);
  c.fitted_c = std::max(c.c_w, c.c_h);
  return c;
}

void validate_interpolation(int m, const InterpolationParams& P) {
  const auto imbalance = [](const std::string& why) {
    throw Error(ErrorKind::ParameterImbalance, why);
  };
  if (m < 1) imbalance("domain dimension must be positive");
  if (P.j < 0 || P.j > P.n) imbalance("need 0 <= j <= n");
  if (!(P.q >= 1.0) || !(P.r >= 1.0)) imbalance("need 1 <= q, r <= infinity");
  if (!(P.p > 0.0)) imbalance("need p > 0");
  const double a_min = P.n == 0 ? 0.0 : double(P.j) / P.n;
  if (!(P.a >= a_min - 1e-12) || !(P.a <= 1.0)) imbalance("need j/n <= a <= 1");
  const double lhs = reciprocal(P.p);
  const double rhs = double(P.j) / m + P.a * (reciprocal(P.r) - double(P.n) / m) +
                     (1.0 - P.a) * reciprocal(P.q);
  if (std::fabs(lhs - rhs) > 1e-12) {
    imbalance("1/p = " + std::to_string(lhs) + " but the balance relation gives " +
              std::to_string(rhs));
  }
  if (P.a == 1.0 && P.n > P.j && std::isfinite(P.r)) {
    const double critical = double(m) / (P.n - P.j);
    if (std::fabs(P.r - critical) <= 1e-12 && critical != 1.0) {
      throw Error(ErrorKind::ExcludedEndpoint, "a = 1 is excluded when r = m/(n-j) != 1");
    }
  }
}

double lp_norm(const DomainGrid& grid, std::span<const double> magnitude, double p) {
  if (std::isinf(p)) {
    double sup = 0.0;
    for (double v : magnitude) sup = std::max(sup, std::fabs(v));
    return sup;
  }
  std::vector<double> powered(magnitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) powered[i] = std::pow(std::fabs(magnitude[i]), p);
  return std::pow(integrate(grid, powered), 1.0 / p);
}

InterpolationCheck check_interpolation_inequality(const Field& u, const InterpolationParams& P) {
  const auto& grid = u.grid();
  validate_interpolation(grid.dim(), P);
  const int top = std::max(P.j, P.n);
  require_resolution(grid, top);
  const auto tower = covariant_tower(u, top);

  std::vector<std::vector<double>> mags;
  for (const auto& level : tower) mags.push_back(pointwise_magnitude(u, level));

  double high = 0.0;
  if (std::isinf(P.r)) {
    for (int i = 0; i <= P.n; ++i) high = std::max(high, lp_norm(grid, mags[i], infinity));
  } else {
    double acc = 0.0;
    for (int i = 0; i <= P.n; ++i) acc += std::pow(lp_norm(grid, mags[i], P.r), P.r);
    high = std::pow(acc, 1.0 / P.r);
  }
  const double low = lp_norm(grid, mags[0], P.q);

  InterpolationCheck out;
  out.lhs = lp_norm(grid, mags[P.j], P.p);
  out.rhs = std::pow(high, P.a) * std::pow(low, 1.0 - P.a);
  out.ratio = smallest_constant(out.lhs, out.rhs);
  return out;
}

}  // namespace schroflow::norms
