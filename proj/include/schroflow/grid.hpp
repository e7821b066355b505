#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace schroflow {

/// Uniform periodic grid on the flat circle S^1 (dim 1) or flat torus T^2 (dim 2).
///
/// Nodes are stored row-major: axis 0 varies slowest. Coordinates of node
/// (i0, i1) are (i0 h0, i1 h1).
class DomainGrid {
 public:
  static constexpr int min_nodes_per_axis = 8;

  static DomainGrid circle(int n, double length = 2.0 * std::numbers::pi);
  static DomainGrid torus(int n0, int n1, double length0 = 2.0 * std::numbers::pi,
                          double length1 = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  std::string_view name() const { return dim_ == 1 ? "s1" : "t2"; }
  int size(int axis) const { return sizes_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / sizes_[axis]; }
  int min_size() const;
  double min_spacing() const;

  std::size_t node_count() const {
    return dim_ == 1 ? std::size_t(sizes_[0]) : std::size_t(sizes_[0]) * std::size_t(sizes_[1]);
  }
  /// Quadrature weight of a single node, the product of the spacings.
  double cell_volume() const { return dim_ == 1 ? spacing(0) : spacing(0) * spacing(1); }
  double volume() const { return dim_ == 1 ? lengths_[0] : lengths_[0] * lengths_[1]; }

  std::size_t index(int i0, int i1 = 0) const;
  std::array<int, 2> multi_index(std::size_t node) const;
  double coordinate(std::size_t node, int axis) const;

  /// Calls fn(start, stride, count) once per grid line parallel to `axis`.
  template <class Fn>
  void for_each_line(int axis, Fn&& fn) const {
    if (dim_ == 1) {
      fn(std::size_t{0}, std::size_t{1}, sizes_[0]);
      return;
    }
    const auto n0 = std::size_t(sizes_[0]);
    const auto n1 = std::size_t(sizes_[1]);
    if (axis == 0) {
      for (std::size_t j = 0; j < n1; ++j) fn(j, n1, sizes_[0]);
    } else {
      for (std::size_t i = 0; i < n0; ++i) fn(i * n1, std::size_t{1}, sizes_[1]);
    }
  }

  friend bool operator==(const DomainGrid&, const DomainGrid&) = default;

 private:
  DomainGrid(int dim, std::array<int, 2> sizes, std::array<double, 2> lengths);

  int dim_;
  std::array<int, 2> sizes_;
  std::array<double, 2> lengths_;
};

/// Second-order compact Laplacian sum_a (f(x+h_a) - 2f(x) + f(x-h_a)) / h_a^2.
template <class T>
std::vector<T> laplacian(const DomainGrid& grid, std::span<const T> f) {
  std::vector<T> out(f.size(), T{});
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double inv_h2 = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
    grid.for_each_line(axis, [&](std::size_t start, std::size_t stride, int count) {
      for (int i = 0; i < count; ++i) {
        const std::size_t here = start + std::size_t(i) * stride;
        const std::size_t next = start + std::size_t(i + 1 == count ? 0 : i + 1) * stride;
        const std::size_t prev = start + std::size_t(i == 0 ? count - 1 : i - 1) * stride;
        out[here] += ((f[next] - f[here]) - (f[here] - f[prev])) * inv_h2;
      }
    });
  }
  return out;
}

/// Central difference (f(x+h_a) - f(x-h_a)) / 2h_a along one axis.
template <class T>
std::vector<T> gradient(const DomainGrid& grid, std::span<const T> f, int axis) {
  std::vector<T> out(f.size(), T{});
  const double inv_2h = 0.5 / grid.spacing(axis);
  grid.for_each_line(axis, [&](std::size_t start, std::size_t stride, int count) {
    for (int i = 0; i < count; ++i) {
      const std::size_t next = start + std::size_t(i + 1 == count ? 0 : i + 1) * stride;
      const std::size_t prev = start + std::size_t(i == 0 ? count - 1 : i - 1) * stride;
      out[start + std::size_t(i) * stride] = (f[next] - f[prev]) * inv_2h;
    }
  });
  return out;
}

template <class T>
std::vector<std::vector<T>> gradient(const DomainGrid& grid, std::span<const T> f) {
  std::vector<std::vector<T>> out;
  out.reserve(std::size_t(grid.dim()));
  for (int axis = 0; axis < grid.dim(); ++axis) out.push_back(gradient(grid, f, axis));
  return out;
}

/// One-sided difference (f(x+h_a) - f(x)) / h_a. Its adjoint pairs with the
/// compact Laplacian: sum D+f . D+g = -sum f . laplacian(g) exactly.
template <class T>
std::vector<T> forward_difference(const DomainGrid& grid, std::span<const T> f, int axis) {
  std::vector<T> out(f.size(), T{});
  const double inv_h = 1.0 / grid.spacing(axis);
  grid.for_each_line(axis, [&](std::size_t start, std::size_t stride, int count) {
    for (int i = 0; i < count; ++i) {
      const std::size_t here = start + std::size_t(i) * stride;
      const std::size_t next = start + std::size_t(i + 1 == count ? 0 : i + 1) * stride;
      out[here] = (f[next] - f[here]) * inv_h;
    }
  });
  return out;
}

/// Periodic trapezoid rule. Summation is pairwise in a fixed order, so the
/// result does not depend on how the integrand was produced.
double integrate(const DomainGrid& grid, std::span<const double> f);

/// Pairwise sum in fixed order.
double deterministic_sum(std::span<const double> values);

}  // namespace schroflow
