#include "doctest.h"
#include "schroflow/error.hpp"
#include "schroflow/norms.hpp"
#include "support.hpp"

using namespace schroflow;
using namespace schroflow::norms;
using testing::great_circle;
using testing::pi;
using testing::random_smooth;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

double drift(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("orders and resolution") {
  CHECK(critical_order(1) == 1);
  CHECK(critical_order(2) == 2);
  CHECK(max_resolved_order(DomainGrid::circle(64)) == 15);
  CHECK(max_resolved_order(DomainGrid::torus(16, 32)) == 3);
  CHECK(max_resolved_order(DomainGrid::circle(8)) == 1);
  const auto u = great_circle(16);
  CHECK_NOTHROW(h_norm(u, 3));
  CHECK(kind_of([&] { h_norm(u, 4); }) == ErrorKind::ResolutionExceeded);
  CHECK(kind_of([&] { w_norm(u, 4); }) == ErrorKind::ResolutionExceeded);
}

TEST_CASE("norms of constant maps vanish") {
  const auto grid = DomainGrid::torus(16, 16);
  const Field c(grid, TargetManifold::sphere(), std::vector<Vec3>(grid.node_count(), {0, 1, 0}));
  for (int k = 0; k <= 2; ++k) {
    CHECK(h_norm(c, k) == 0.0);
    CHECK(w_norm(c, k) == 0.0);
  }
  const auto cmp = compare_section_norms(c, 2);
  CHECK(cmp.w_lhs == 0.0);
  CHECK(cmp.h_lhs == 0.0);
  CHECK(cmp.fitted_c == 0.0);
}

TEST_CASE("great circle norms") {
  const auto u = great_circle(256);
  const double h = u.grid().spacing(0);
  CHECK(h_norm(u, 0) == doctest::Approx(std::sqrt(2 * pi)).epsilon(h * h));
  CHECK(h_norm(u, 1) == doctest::Approx(h_norm(u, 0)).epsilon(h * h));
  CHECK(w_norm(u, 1) == doctest::Approx(2 * std::sqrt(pi)).epsilon(h * h));
  CHECK(w_norm(u, 1) > h_norm(u, 1) * 1.3);
}

TEST_CASE("norm identities and monotonicity") {
  for (const auto& target : {TargetManifold::sphere(), TargetManifold::hyperbolic()}) {
    for (const auto& grid : {DomainGrid::circle(128), DomainGrid::torus(32, 32)}) {
      const auto u = random_smooth(grid, target, 17);
      const double h0 = h_norm(u, 0);
      CHECK(std::abs(h0 * h0 - 2 * energy(u)) <= 1e-12 * 2 * energy(u));
      const auto hs = h_norms(u, 3);
      const auto ws = w_norms(u, 3);
      REQUIRE(hs.size() == 4);
      for (int k = 0; k < 4; ++k) {
        CHECK(hs[std::size_t(k)] == doctest::Approx(h_norm(u, k)).epsilon(1e-14));
        CHECK(ws[std::size_t(k)] == doctest::Approx(w_norm(u, k)).epsilon(1e-14));
        if (k > 0) {
          CHECK(hs[std::size_t(k)] >= hs[std::size_t(k - 1)]);
          CHECK(ws[std::size_t(k)] >= ws[std::size_t(k - 1)]);
        }
      }
      if (target.kind() == TargetKind::Sphere) CHECK(ws[0] == doctest::Approx(h0).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm report") {
  const auto u = random_smooth(DomainGrid::circle(64), TargetManifold::sphere(), 2);
  const auto r = make_report(u, 0.5, 2);
  CHECK(r.time == 0.5);
  CHECK(r.energy == energy(u));
  CHECK(r.sup_grad == sup_gradient(u));
  CHECK(r.h_norms.size() == 3);
  CHECK(r.w_norms.size() == 3);
  CHECK(r.constraint_drift == constraint_drift(u));
}

TEST_CASE("section norm comparison") {
  const auto circle = great_circle(64);
  CHECK(kind_of([&] { compare_section_norms(circle, 0); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(compare_section_norms(circle, 1));
  const auto torus = random_smooth(DomainGrid::torus(16, 16), TargetManifold::sphere(), 3);
  CHECK(kind_of([&] { compare_section_norms(torus, 1); }) == ErrorKind::InvalidArgument);

  const auto c = compare_section_norms(great_circle(128), 2);
  CHECK(c.k == 2);
  CHECK(c.w_lhs == doctest::Approx(w_norm(great_circle(128), 1)));
  const double x = c.h_lhs;
  CHECK(c.w_rhs_sum == doctest::Approx(x + x * x));
  CHECK(c.c_w == doctest::Approx(c.w_lhs / c.w_rhs_sum));
  CHECK(c.fitted_c == std::max(c.c_w, c.c_h));
  CHECK(c.w_lhs <= c.fitted_c * c.w_rhs_sum * (1 + 1e-15));
  CHECK(c.h_lhs <= c.fitted_c * c.h_rhs_sum * (1 + 1e-15));

  const double c64 = compare_section_norms(great_circle(64), 2).fitted_c;
  const double c128 = c.fitted_c;
  const double c256 = compare_section_norms(great_circle(256), 2).fitted_c;
  CHECK(std::isfinite(c256));
  CHECK(drift(c64, c128) < 0.05);
  CHECK(drift(c128, c256) < 0.05);
  CHECK(drift(c64, c256) < 0.05);
}

TEST_CASE("interpolation parameter validation") {
  CHECK_NOTHROW(validate_interpolation(1, {1, 2, 2, 2, 2, 0.5}));
  CHECK_NOTHROW(validate_interpolation(1, {0, 1, infinity, 2, 2, 0.5}));
  CHECK_NOTHROW(validate_interpolation(1, {0, 1, 2, 2, 2, 0.0}));
  CHECK_NOTHROW(validate_interpolation(2, {0, 1, 4, 2, 2, 0.5}));
  CHECK(kind_of([] { validate_interpolation(1, {1, 2, 3, 2, 2, 0.5}); }) ==
        ErrorKind::ParameterImbalance);
  CHECK(kind_of([] { validate_interpolation(1, {2, 1, 2, 2, 2, 0.5}); }) ==
        ErrorKind::ParameterImbalance);
  CHECK(kind_of([] { validate_interpolation(1, {1, 2, 2, 2, 2, 0.25}); }) ==
        ErrorKind::ParameterImbalance);
  CHECK(kind_of([] { validate_interpolation(1, {0, 1, 2, 0.5, 2, 0.0}); }) ==
        ErrorKind::ParameterImbalance);
  // a = 1 with r = m/(n - j) = 2 != 1 on a surface.
  CHECK(kind_of([] { validate_interpolation(2, {0, 1, infinity, 2, 2, 1.0}); }) ==
        ErrorKind::ExcludedEndpoint);
  // a = 1 with r = m/(n - j) = 1 is allowed.
  CHECK_NOTHROW(validate_interpolation(1, {0, 1, infinity, 2, 1, 1.0}));
}

TEST_CASE("interpolation inequality check") {
  const auto u = random_smooth(DomainGrid::circle(128), TargetManifold::sphere(), 4);
  const auto id = check_interpolation_inequality(u, {0, 1, 2, 2, 2, 0.0});
  CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-14));
  CHECK(id.ratio <= 1.0 + 1e-14);

  const auto a = check_interpolation_inequality(u, {1, 2, 2, 2, 2, 0.5});
  CHECK(a.lhs > 0.0);
  CHECK(a.ratio == doctest::Approx(a.lhs / a.rhs));

  // The velocity of a geodesic is parallel, so the j = 1 side only sees
  // discretization error and the ratio collapses towards zero.
  const auto g64 = check_interpolation_inequality(great_circle(64), {1, 2, 2, 2, 2, 0.5});
  const auto g256 = check_interpolation_inequality(great_circle(256), {1, 2, 2, 2, 2, 0.5});
  CHECK(g256.ratio < 1e-3);
  CHECK(g256.ratio <= g64.ratio + 1e-12);

  CHECK_THROWS_AS(check_interpolation_inequality(u, {1, 2, 3, 2, 2, 0.5}), Error);
}

TEST_CASE("lp norms") {
  const auto grid = DomainGrid::circle(64);
  std::vector<double> f(64, 2.0);
  CHECK(lp_norm(grid, f, 2) == doctest::Approx(2 * std::sqrt(2 * pi)));
  CHECK(lp_norm(grid, f, 1) == doctest::Approx(4 * pi));
  f[3] = 5.0;
  CHECK(lp_norm(grid, f, infinity) == 5.0);
}
