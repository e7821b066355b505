#include "schroflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schroflow/error.hpp"

namespace schroflow::flow {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Rk4Projected ? "explicit-rk4-projected" : "implicit-midpoint";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "explicit-rk4-projected" || name == "rk4") return Scheme::Rk4Projected;
  if (name == "implicit-midpoint" || name == "midpoint") return Scheme::ImplicitMidpoint;
  throw Error(ErrorKind::InvalidArgument,
              "unknown scheme '" + std::string(name) +
                  "' (expected explicit-rk4-projected or implicit-midpoint)");
}

std::string_view to_string(ExitStatus status) {
  switch (status) {
    case ExitStatus::Completed: return "completed";
    case ExitStatus::BlowUp: return "blowup";
    case ExitStatus::SolverFailure: return "solver-failure";
  }
  return "unknown";
}

std::string_view to_string(ProbeClass c) {
  return c == ProbeClass::RefinementStable ? "refinement-stable" : "refinement-growing";
}

double max_admissible_dt(const DomainGrid& grid, const FlowConfig& cfg) {
  const double h = grid.min_spacing();
  return cfg.cfl_factor * h * h;
}

std::optional<std::string> cfl_violation(const DomainGrid& grid, const FlowConfig& cfg) {
  if (cfg.unsafe_dt) return std::nullopt;
  const double limit = max_admissible_dt(grid, cfg);
  if (cfg.dt <= limit * (1.0 + 1e-12)) return std::nullopt;
  std::ostringstream msg;
  msg.precision(6);
  msg << "dt = " << cfg.dt << " breaks the CFL rule dt <= cfl_factor * h_min^2 = "
      << cfg.cfl_factor << " * " << grid.min_spacing() << "^2 = " << limit
      << " (pass --unsafe-dt to override)";
  return msg.str();
}

int monitored_order(const DomainGrid& grid, const FlowConfig& cfg) {
  if (cfg.k_monitor) return *cfg.k_monitor;
  return std::min(norms::critical_order(grid.dim()), norms::max_resolved_order(grid));
}

void validate(const DomainGrid& grid, const FlowConfig& cfg) {
  const auto bad = [](const std::string& why) { throw Error(ErrorKind::InvalidArgument, why); };
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) bad("epsilon must be >= 0");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) bad("dt must be > 0");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) bad("t_end must be > 0");
  if (cfg.monitor_every < 1) bad("monitor_every must be >= 1");
  if (!(cfg.blowup_threshold > 0.0)) bad("blowup_threshold must be > 0");
  if (!(cfg.midpoint_tol > 0.0)) bad("midpoint_tol must be > 0");
  if (cfg.midpoint_max_iter < 1) bad("midpoint_max_iter must be >= 1");
  if (!(cfg.cfl_factor > 0.0)) bad("cfl_factor must be > 0");
  if (cfg.k_monitor) norms::require_resolution(grid, *cfg.k_monitor);
  if (auto why = cfl_violation(grid, cfg)) bad(*why);
}

std::vector<Vec3> midpoint_update(const Field& u, const FlowConfig& cfg, double dt) {
  const auto& grid = u.grid();
  const auto& target = u.target();
  const auto y = u.values();
  const std::size_t n = y.size();

  auto v = velocity_kernel(grid, target, y, cfg.epsilon);
  std::vector<Vec3> next(n), mid(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = y[i] + dt * v[i];

  for (int iter = 0; iter < cfg.midpoint_max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (y[i] + next[i]);
    v = velocity_kernel(grid, target, mid, cfg.epsilon);
    double change = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 candidate = y[i] + dt * v[i];
      finite = finite && is_finite(candidate);
      change = std::max(change, max_abs(candidate - next[i]));
      next[i] = candidate;
    }
    if (!finite) break;
    if (change <= cfg.midpoint_tol) return next;
  }
  throw Error(ErrorKind::MidpointDiverged,
              "fixed-point iteration did not reach tolerance " + std::to_string(cfg.midpoint_tol) +
                  " in " + std::to_string(cfg.midpoint_max_iter) + " iterations (dt too large?)");
}

std::vector<Vec3> rk4_update(const Field& u, const FlowConfig& cfg, double dt) {
  const auto& grid = u.grid();
  const auto& target = u.target();
  const auto y = u.values();
  const std::size_t n = y.size();
  std::vector<Vec3> stage(n);

  const auto k1 = velocity_kernel(grid, target, y, cfg.epsilon);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + (0.5 * dt) * k1[i];
  const auto k2 = velocity_kernel(grid, target, stage, cfg.epsilon);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + (0.5 * dt) * k2[i];
  const auto k3 = velocity_kernel(grid, target, stage, cfg.epsilon);
  for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
  const auto k4 = velocity_kernel(grid, target, stage, cfg.epsilon);

  for (std::size_t i = 0; i < n; ++i) {
    stage[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return stage;
}

namespace {

Field advance(const Field& u, const FlowConfig& cfg, double dt) {
  auto raw = cfg.scheme == Scheme::ImplicitMidpoint ? midpoint_update(u, cfg, dt)
                                                    : rk4_update(u, cfg, dt);
  return Field::projected(u.grid(), u.target(), std::move(raw));
}

double l2_distance(const Field& a, const Field& b) {
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec3 d = a[i] - b[i];
    sq[i] = dot(d, d);
  }
  return std::sqrt(integrate(a.grid(), sq));
}

}  // namespace

Field step(const Field& u, const FlowConfig& cfg, double dt) {
  Field next = advance(u, cfg, dt);
  const double sup = sup_gradient(next);
  if (!(sup <= cfg.blowup_threshold)) {
    throw Error(ErrorKind::BlowUp, "sup|grad u| = " + std::to_string(sup) +
                                       " exceeds threshold " +
                                       std::to_string(cfg.blowup_threshold));
  }
  return next;
}

Field step(const Field& u, const FlowConfig& cfg) { return step(u, cfg, cfg.dt); }

std::size_t step_count(const FlowConfig& cfg) {
  return std::size_t(std::max(1.0, std::ceil(cfg.t_end / cfg.dt - 1e-6)));
}

Trajectory run(const Field& u0, const FlowConfig& cfg, bool keep_snapshots) {
  validate(u0.grid(), cfg);
  const int k = monitored_order(u0.grid(), cfg);
  const std::size_t steps = step_count(cfg);

  Trajectory traj;
  Field u = u0;
  const auto record = [&](const Field& state, double t) {
    traj.reports.push_back(norms::make_report(state, t, k));
    if (keep_snapshots) traj.snapshots.push_back(state);
  };
  record(u, 0.0);

  for (std::size_t s = 1; s <= steps; ++s) {
    const bool last = s == steps;
    const double t = last ? cfg.t_end : double(s) * cfg.dt;
    const double dt = last ? cfg.t_end - double(steps - 1) * cfg.dt : cfg.dt;
    try {
      u = advance(u, cfg, dt);
    } catch (const Error& e) {
      traj.status = ExitStatus::SolverFailure;
      traj.message = e.what();
      break;
    }
    traj.steps_taken = s;
    traj.final_time = t;
    const double sup = sup_gradient(u);
    if (!(sup <= cfg.blowup_threshold)) {
      traj.status = ExitStatus::BlowUp;
      traj.message = "sup|grad u| = " + std::to_string(sup) + " at t = " + std::to_string(t);
      record(u, t);
      break;
    }
    if (s % std::size_t(cfg.monitor_every) == 0 || last) record(u, t);
  }
  traj.final_state = std::move(u);
  return traj;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

SweepResult epsilon_sweep(const Field& u0, std::span<const double> eps_list,
                          const FlowConfig& cfg) {
  FlowConfig ref_cfg = cfg;
  ref_cfg.epsilon = 0.0;
  const auto ref = run(u0, ref_cfg, true);

  SweepResult result;
  result.reference_status = ref.status;
  for (double eps : eps_list) {
    FlowConfig c = cfg;
    c.epsilon = eps;
    SweepRow row;
    row.epsilon = eps;
    try {
      const auto traj = run(u0, c, true);
      row.status = traj.status;
      row.message = traj.message;
      const std::size_t common = std::min(traj.snapshots.size(), ref.snapshots.size());
      for (std::size_t i = 0; i < common; ++i) {
        row.deviation = std::max(row.deviation, l2_distance(traj.snapshots[i], ref.snapshots[i]));
      }
    } catch (const Error& e) {
      row.status = ExitStatus::SolverFailure;
      row.message = e.what();
    }
    result.rows.push_back(row);
  }

  result.monotone = ref.status == ExitStatus::Completed;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    if (row.status != ExitStatus::Completed) result.monotone = false;
    if (i > 0 && row.deviation > result.rows[i - 1].deviation) result.monotone = false;
    if (row.status == ExitStatus::Completed && row.deviation > 0.0 && row.epsilon > 0.0) {
      xs.push_back(row.epsilon);
      ys.push_back(row.deviation);
    }
  }
  result.order = loglog_slope(xs, ys);
  return result;
}

ProbeReport singularity_probe(const std::function<Field(const DomainGrid&)>& make_u0,
                              double length0, double length1, std::span<const int> refinements,
                              const FlowConfig& cfg, double growth_tol) {
  if (refinements.empty()) throw Error(ErrorKind::InvalidArgument, "no refinement levels");
  ProbeReport report;
  const double n0 = refinements.front();
  for (int n : refinements) {
    const auto grid = DomainGrid::torus(n, n, length0, length1);
    const double ratio = n / n0;
    FlowConfig c = cfg;
    c.dt = cfg.dt / (ratio * ratio);
    c.monitor_every = std::max(1, int(std::lround(cfg.monitor_every * ratio * ratio)));

    ProbeRun pr;
    pr.n = n;
    pr.dt = c.dt;
    try {
      const auto traj = run(make_u0(grid), c);
      pr.status = traj.status;
      pr.message = traj.message;
      for (const auto& r : traj.reports) {
        pr.sup_grad_curve.emplace_back(r.time, r.sup_grad);
        if (std::isfinite(r.sup_grad)) pr.peak_sup_grad = std::max(pr.peak_sup_grad, r.sup_grad);
      }
    } catch (const Error& e) {
      pr.status = ExitStatus::SolverFailure;
      pr.message = e.what();
    }
    report.runs.push_back(std::move(pr));
  }

  const auto& runs = report.runs;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].status == ExitStatus::BlowUp && runs[i - 1].status != ExitStatus::BlowUp) {
      report.classification = ProbeClass::RefinementGrowing;
    }
  }
  if (runs.size() >= 2) {
    const double prev = runs[runs.size() - 2].peak_sup_grad;
    const double last = runs.back().peak_sup_grad;
    report.growth = prev > 0.0 ? (last - prev) / prev : (last > 0.0 ? norms::infinity : 0.0);
    if (report.growth > growth_tol) report.classification = ProbeClass::RefinementGrowing;
  }
  return report;
}

}  // namespace schroflow::flow
