#include "doctest.h"
#include "schroflow/error.hpp"
#include "schroflow/flow.hpp"
#include "support.hpp"

using namespace schroflow;
using namespace schroflow::flow;
using testing::great_circle;
using testing::pi;
using testing::random_smooth;

namespace {

FlowConfig config(Scheme scheme, double dt, double t_end, double eps = 0.0) {
  FlowConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.t_end = t_end;
  c.epsilon = eps;
  return c;
}

Field magnon_at(const DomainGrid& grid, double k, double theta, double phase_shift) {
  return testing::from_function(grid, TargetManifold::sphere(), [=](double x, double) {
    return Vec3{std::sin(theta) * std::cos(k * x - phase_shift),
                std::sin(theta) * std::sin(k * x - phase_shift), std::cos(theta)};
  });
}

double rel_energy_drift(const Trajectory& t) {
  const double e0 = t.reports.front().energy;
  double worst = 0.0;
  for (const auto& r : t.reports) worst = std::max(worst, std::abs(r.energy - e0) / e0);
  return worst;
}

constexpr Scheme schemes[] = {Scheme::ImplicitMidpoint, Scheme::Rk4Projected};

}  // namespace

TEST_CASE("scheme names") {
  CHECK(scheme_from_string("implicit-midpoint") == Scheme::ImplicitMidpoint);
  CHECK(scheme_from_string("explicit-rk4-projected") == Scheme::Rk4Projected);
  CHECK(to_string(Scheme::Rk4Projected) == "explicit-rk4-projected");
  CHECK_THROWS_AS(scheme_from_string("euler"), Error);
  CHECK(to_string(ExitStatus::BlowUp) == "blowup");
}

TEST_CASE("CFL rule and validation") {
  const auto grid = DomainGrid::circle(256);
  FlowConfig c;
  const double h = 2 * pi / 256;
  CHECK(max_admissible_dt(grid, c) == doctest::Approx(0.2 * h * h));
  c.dt = 1e-4;
  CHECK_FALSE(cfl_violation(grid, c));
  c.dt = 1.0;
  REQUIRE(cfl_violation(grid, c));
  CHECK(cfl_violation(grid, c)->find("CFL") != std::string::npos);
  CHECK_THROWS_AS(validate(grid, c), Error);
  c.unsafe_dt = true;
  CHECK_NOTHROW(validate(grid, c));
  c = FlowConfig{};
  c.epsilon = -1;
  CHECK_THROWS_AS(validate(grid, c), Error);
  c = FlowConfig{};
  c.monitor_every = 0;
  CHECK_THROWS_AS(validate(grid, c), Error);
  c = FlowConfig{};
  c.k_monitor = 100;
  CHECK_THROWS_AS(validate(grid, c), Error);

  CHECK(monitored_order(DomainGrid::circle(64), FlowConfig{}) == 1);
  CHECK(monitored_order(DomainGrid::torus(32, 32), FlowConfig{}) == 2);
  CHECK(monitored_order(DomainGrid::torus(8, 8), FlowConfig{}) == 1);
}

TEST_CASE("step counting") {
  CHECK(step_count(config(Scheme::ImplicitMidpoint, 1e-4, 1.0)) == 10000);
  CHECK(step_count(config(Scheme::ImplicitMidpoint, 0.3, 1.0)) == 4);
  CHECK(step_count(config(Scheme::ImplicitMidpoint, 0.1, 0.3)) == 3);
}

TEST_CASE("constant maps are stationary") {
  const auto grid = DomainGrid::torus(16, 16);
  for (const auto& target : {TargetManifold::sphere(), TargetManifold::hyperbolic()}) {
    const Field c(grid, target, std::vector<Vec3>(grid.node_count(), target.project_point({0.2, 0.1, 1.5})));
    for (Scheme s : schemes) {
      const auto next = step(c, config(s, 1e-3, 1.0, 0.5));
      CHECK(testing::max_diff(next.values(), c.values()) == 0.0);
    }
  }
}

TEST_CASE("great circle is stationary up to discretization") {
  const auto u = great_circle(128);
  for (Scheme s : schemes) {
    auto c = config(s, 1e-4, 1e-2);
    const auto t = run(u, c);
    CHECK(t.status == ExitStatus::Completed);
    CHECK(testing::max_diff(t.final_state->values(), u.values()) <= 1e-10);
  }
}

TEST_CASE("one magnon step matches the rotated ansatz") {
  const auto grid = DomainGrid::circle(256);
  const double k = 2, theta = pi / 4, dt = 1e-4;
  const double omega = k * k * std::cos(theta);
  const auto u0 = magnon_at(grid, k, theta, 0.0);
  const auto exact = magnon_at(grid, k, theta, omega * dt);
  const double h = grid.spacing(0);
  for (Scheme s : schemes) {
    const auto u1 = step(u0, config(s, dt, 1.0));
    CHECK(testing::max_diff(u1.values(), exact.values()) <= 10 * (dt * dt * dt + dt * h * h) * omega);
  }
}

TEST_CASE("energy conservation at epsilon = 0") {
  const auto grid = DomainGrid::circle(128);
  const auto u0 = make_initial(grid, TargetManifold::sphere(),
                               InitSpec::parse("magnon:k=2,theta=0.7853981633974483"));
  auto c = config(Scheme::ImplicitMidpoint, 2e-4, 0.5);
  c.monitor_every = 50;
  CHECK(rel_energy_drift(run(u0, c)) <= 1e-8);
  c.scheme = Scheme::Rk4Projected;
  CHECK(rel_energy_drift(run(u0, c)) <= 1e-6);

  const auto r = random_smooth(DomainGrid::torus(24, 24), TargetManifold::sphere(), 8);
  auto c2 = config(Scheme::ImplicitMidpoint, 2e-3, 0.2);
  c2.monitor_every = 10;
  const auto t = run(r, c2);
  CHECK(t.status == ExitStatus::Completed);
  CHECK(rel_energy_drift(t) <= 1e-8);
}

TEST_CASE("energy dissipation at epsilon > 0") {
  for (const auto& target : {TargetManifold::sphere(), TargetManifold::hyperbolic()}) {
    const auto u0 = random_smooth(DomainGrid::circle(64), target, 12);
    for (Scheme s : schemes) {
      auto c = config(s, 1e-3, 0.5, 0.1);
      c.monitor_every = 5;
      const auto t = run(u0, c);
      REQUIRE(t.status == ExitStatus::Completed);
      for (std::size_t i = 1; i < t.reports.size(); ++i)
        CHECK(t.reports[i].energy < t.reports[i - 1].energy);
    }
  }
}

TEST_CASE("strong damping relaxes to a harmonic map") {
  const auto u0 = random_smooth(DomainGrid::circle(32), TargetManifold::sphere(), 4);
  auto c = config(Scheme::ImplicitMidpoint, 5e-3, 10.0, 1.0);
  c.monitor_every = 500;
  const auto t = run(u0, c);
  REQUIRE(t.status == ExitStatus::Completed);
  double worst = 0.0;
  for (const auto& v : tension(*t.final_state)) worst = std::max(worst, max_abs(v));
  CHECK(worst < 1e-4);
}

TEST_CASE("midpoint keeps the constraint before projection") {
  for (const auto& target : {TargetManifold::sphere(), TargetManifold::hyperbolic()}) {
    const auto u = random_smooth(DomainGrid::torus(16, 16), target, 30);
    for (double eps : {0.0, 0.3}) {
      auto c = config(Scheme::ImplicitMidpoint, 5e-3, 1.0, eps);
      const auto raw = midpoint_update(u, c, c.dt);
      for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK(std::abs(target.sq_norm(raw[i]) - target.constraint_level()) <=
              10 * c.midpoint_tol * std::max(1.0, dot(u[i], u[i])));
      }
    }
  }
}

TEST_CASE("flow commutes with rotations of the target") {
  const auto u = random_smooth(DomainGrid::circle(64), TargetManifold::sphere(), 31);
  const testing::Rotation rot({0.3, -1, 2}, 1.1);
  for (Scheme s : schemes) {
    auto c = config(s, 1e-3, 0.05, 0.2);
    const auto a = *run(rot.apply(u), c).final_state;
    const auto b = rot.apply(*run(u, c).final_state);
    CHECK(testing::max_diff(a.values(), b.values()) <= 1e-10);
  }
}

TEST_CASE("temporal order against the exact semi-discrete magnon") {
  const auto grid = DomainGrid::circle(32);
  const double k = 4, theta = pi / 4, t_end = 0.1;
  const double h = grid.spacing(0);
  const double omega_h = 4 / (h * h) * std::pow(std::sin(k * h / 2), 2) * std::cos(theta);
  const auto u0 = magnon_at(grid, k, theta, 0.0);
  const auto exact = magnon_at(grid, k, theta, omega_h * t_end);
  auto error = [&](Scheme s, double dt) {
    auto c = config(s, dt, t_end);
    c.midpoint_tol = 1e-14;
    c.monitor_every = 1000000;
    return testing::max_diff(run(u0, c).final_state->values(), exact.values());
  };
  const double m1 = error(Scheme::ImplicitMidpoint, 0.1 / 16), m2 = error(Scheme::ImplicitMidpoint, 0.1 / 32);
  CHECK(testing::order(m1, m2) >= 1.9);
  const double r1 = error(Scheme::Rk4Projected, 0.1 / 16), r2 = error(Scheme::Rk4Projected, 0.1 / 32);
  CHECK(testing::order(r1, r2) >= 3.8);
}

TEST_CASE("run records reports on schedule") {
  const auto u0 = random_smooth(DomainGrid::circle(64), TargetManifold::sphere(), 40);
  auto c = config(Scheme::Rk4Projected, 1e-3, 0.0105);
  c.monitor_every = 4;
  const auto t = run(u0, c, true);
  CHECK(t.status == ExitStatus::Completed);
  CHECK(t.steps_taken == 11);
  CHECK(t.reports.size() == 11 / 4 + 1 + 1);
  CHECK(t.snapshots.size() == t.reports.size());
  CHECK(t.reports.front().time == 0.0);
  CHECK(t.reports.back().time == 0.0105);
  CHECK(t.final_time == 0.0105);
  CHECK(t.reports[1].time == doctest::Approx(0.004));
  for (const auto& r : t.reports) {
    CHECK(r.h_norms.size() == 2);
    CHECK(r.constraint_drift <= 1e-12);
  }
}

TEST_CASE("blow-up and solver failure end the run with state kept") {
  const auto u0 = random_smooth(DomainGrid::circle(64), TargetManifold::sphere(), 41);
  auto c = config(Scheme::ImplicitMidpoint, 1e-3, 0.1);
  c.blowup_threshold = 0.5 * sup_gradient(u0);
  const auto t = run(u0, c);
  CHECK(t.status == ExitStatus::BlowUp);
  CHECK(t.steps_taken == 1);
  CHECK(t.final_state.has_value());
  CHECK(t.reports.size() == 2);
  CHECK_THROWS_AS(step(u0, c), Error);

  auto bad = config(Scheme::ImplicitMidpoint, 0.5, 1.0);
  bad.unsafe_dt = true;
  bad.midpoint_max_iter = 20;
  const auto f = run(u0, bad);
  CHECK(f.status == ExitStatus::SolverFailure);
  CHECK(f.message.find("MidpointDiverged") != std::string::npos);
  try {
    step(u0, bad);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MidpointDiverged);
  }
}

TEST_CASE("epsilon sweep") {
  const auto grid = DomainGrid::circle(32);
  const Field c(grid, TargetManifold::sphere(), std::vector<Vec3>(32, {0, 0, 1}));
  const std::vector<double> eps{0.1, 0.05};
  auto cfg = config(Scheme::ImplicitMidpoint, 5e-3, 0.1);
  cfg.monitor_every = 5;
  const auto flat = epsilon_sweep(c, eps, cfg);
  REQUIRE(flat.rows.size() == 2);
  for (const auto& r : flat.rows) CHECK(r.deviation == 0.0);
  CHECK(flat.monotone);

  const auto u0 = make_initial(grid, TargetManifold::sphere(), InitSpec::parse("magnon:k=2,theta=0.7"));
  const std::vector<double> eps4{0.2, 0.1, 0.05, 0.025};
  const auto res = epsilon_sweep(u0, eps4, cfg);
  CHECK(res.monotone);
  CHECK(res.order >= 0.9);
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    CHECK(res.rows[i].deviation < res.rows[i - 1].deviation);

  const std::vector<double> x{1, 2, 4}, y{3, 12, 48};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
}

TEST_CASE("singularity probe classification") {
  auto cfg = config(Scheme::ImplicitMidpoint, 4e-3, 0.04);
  cfg.monitor_every = 2;
  const std::vector<int> levels{32, 64};
  const auto constant = singularity_probe(
      [](const DomainGrid& g) {
        return Field(g, TargetManifold::sphere(), std::vector<Vec3>(g.node_count(), {0, 0, 1}));
      },
      2 * pi, 2 * pi, levels, cfg);
  CHECK(constant.classification == ProbeClass::RefinementStable);
  for (const auto& r : constant.runs) {
    CHECK(r.status == ExitStatus::Completed);
    CHECK(r.peak_sup_grad == 0.0);
  }
  CHECK(constant.runs[1].dt == doctest::Approx(1e-3));
  CHECK(constant.runs[1].sup_grad_curve.size() == constant.runs[0].sup_grad_curve.size());

  const auto smooth = singularity_probe(
      [](const DomainGrid& g) {
        return make_initial(g, TargetManifold::sphere(), InitSpec::parse("random-smooth:seed=1,amp=0.1,modes=2"));
      },
      2 * pi, 2 * pi, levels, cfg);
  CHECK(smooth.classification == ProbeClass::RefinementStable);
  CHECK(smooth.runs[1].sup_grad_curve.size() == smooth.runs[0].sup_grad_curve.size());

  auto tight = cfg;
  tight.blowup_threshold = 1e-3;
  const auto blown = singularity_probe(
      [](const DomainGrid& g) {
        return make_initial(g, TargetManifold::sphere(), InitSpec::parse("bump"));
      },
      2 * pi, 2 * pi, levels, tight);
  for (const auto& r : blown.runs) CHECK(r.status == ExitStatus::BlowUp);
}
