#include "schroflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schroflow/error.hpp"

namespace schroflow {

DomainGrid::DomainGrid(int dim, std::array<int, 2> sizes, std::array<double, 2> lengths)
    : dim_(dim), sizes_(sizes), lengths_(lengths) {
  for (int a = 0; a < dim_; ++a) {
    if (sizes_[a] < min_nodes_per_axis) {
      throw Error(ErrorKind::InvalidArgument,
                  "grid needs at least " + std::to_string(min_nodes_per_axis) +
                      " nodes per axis, got " + std::to_string(sizes_[a]));
    }
    if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a])) {
      throw Error(ErrorKind::InvalidArgument, "grid period must be positive and finite");
    }
  }
}

DomainGrid DomainGrid::circle(int n, double length) {
  return DomainGrid(1, {n, 1}, {length, 1.0});
}

DomainGrid DomainGrid::torus(int n0, int n1, double length0, double length1) {
  return DomainGrid(2, {n0, n1}, {length0, length1});
}

int DomainGrid::min_size() const {
  return dim_ == 1 ? sizes_[0] : std::min(sizes_[0], sizes_[1]);
}

double DomainGrid::min_spacing() const {
  return dim_ == 1 ? spacing(0) : std::min(spacing(0), spacing(1));
}

std::size_t DomainGrid::index(int i0, int i1) const {
  const auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  if (dim_ == 1) return std::size_t(wrap(i0, sizes_[0]));
  return std::size_t(wrap(i0, sizes_[0])) * std::size_t(sizes_[1]) +
         std::size_t(wrap(i1, sizes_[1]));
}

std::array<int, 2> DomainGrid::multi_index(std::size_t node) const {
  if (dim_ == 1) return {int(node), 0};
  return {int(node / std::size_t(sizes_[1])), int(node % std::size_t(sizes_[1]))};
}

double DomainGrid::coordinate(std::size_t node, int axis) const {
  return multi_index(node)[axis] * spacing(axis);
}

namespace {

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

}  // namespace

double deterministic_sum(std::span<const double> values) {
  return pairwise(values.data(), values.size());
}

double integrate(const DomainGrid& grid, std::span<const double> f) {
  return deterministic_sum(f) * grid.cell_volume();
}

}  // namespace schroflow
