#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schroflow/field.hpp"
#include "schroflow/norms.hpp"

namespace schroflow::flow {

enum class Scheme { Rk4Projected, ImplicitMidpoint };

std::string_view to_string(Scheme scheme);
/// "explicit-rk4-projected" or "implicit-midpoint".
Scheme scheme_from_string(std::string_view name);

struct FlowConfig {
  double epsilon = 0.0;
  double dt = 1e-4;
  double t_end = 1.0;
  Scheme scheme = Scheme::ImplicitMidpoint;
  int monitor_every = 100;
  std::optional<int> k_monitor;  ///< defaults to the critical order [m/2]+1
  double blowup_threshold = 1e6;
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 100;
  double cfl_factor = 0.2;
  bool unsafe_dt = false;

  friend bool operator==(const FlowConfig&, const FlowConfig&) = default;
};

/// cfl_factor * h_min^2.
double max_admissible_dt(const DomainGrid& grid, const FlowConfig& cfg);

/// Human-readable reason if dt breaks the CFL rule and unsafe_dt is off.
std::optional<std::string> cfl_violation(const DomainGrid& grid, const FlowConfig& cfg);

/// Throws Error(InvalidArgument) on nonsensical settings or a CFL violation.
void validate(const DomainGrid& grid, const FlowConfig& cfg);

int monitored_order(const DomainGrid& grid, const FlowConfig& cfg);

/// Implicit midpoint update u+ = u + dt v((u + u+)/2), solved by fixed-point
/// iteration to cfg.midpoint_tol in the max norm. Returns the raw values,
/// before any projection. Throws Error(MidpointDiverged).
std::vector<Vec3> midpoint_update(const Field& u, const FlowConfig& cfg, double dt);

/// Classical four-stage update of the raw values, no projection.
std::vector<Vec3> rk4_update(const Field& u, const FlowConfig& cfg, double dt);

/// One step of size cfg.dt with the configured scheme, projected onto the
/// target. Throws Error(MidpointDiverged), Error(NonProjectable) or
/// Error(BlowUp) when sup|grad u| passes cfg.blowup_threshold.
Field step(const Field& u, const FlowConfig& cfg);
Field step(const Field& u, const FlowConfig& cfg, double dt);

enum class ExitStatus { Completed, BlowUp, SolverFailure };
std::string_view to_string(ExitStatus status);

struct Trajectory {
  std::vector<norms::NormReport> reports;
  std::vector<Field> snapshots;  ///< one per report when requested
  std::optional<Field> final_state;
  ExitStatus status = ExitStatus::Completed;
  std::string message;
  std::size_t steps_taken = 0;
  double final_time = 0.0;
};

/// Number of steps needed to reach t_end; the last step is shortened to land on
/// t_end exactly.
std::size_t step_count(const FlowConfig& cfg);

/// Integrates u0 to cfg.t_end. Reports are taken at step 0, every
/// monitor_every steps and at the last step, so there are
/// ceil(steps / monitor_every) + 1 of them. Blow-up and solver failure end the
/// run early with the state at abort kept in final_state.
Trajectory run(const Field& u0, const FlowConfig& cfg, bool keep_snapshots = false);

struct SweepRow {
  double epsilon = 0.0;
  double deviation = 0.0;  ///< sup over samples of ||u_eps - u_ref||_{L^2}
  ExitStatus status = ExitStatus::Completed;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  ExitStatus reference_status = ExitStatus::Completed;
  bool monotone = false;    ///< deviation nonincreasing along eps_list, all runs completed
  double order = 0.0;       ///< least-squares slope of log deviation vs log eps
};

/// Runs u0 at every epsilon and at epsilon = 0 with otherwise identical
/// settings, and tabulates the deviation from the epsilon = 0 run.
SweepResult epsilon_sweep(const Field& u0, std::span<const double> eps_list,
                          const FlowConfig& cfg);

/// Slope of the least-squares line through (log x, log y).
double loglog_slope(std::span<const double> x, std::span<const double> y);

enum class ProbeClass { RefinementStable, RefinementGrowing };
std::string_view to_string(ProbeClass c);

struct ProbeRun {
  int n = 0;
  double dt = 0.0;
  ExitStatus status = ExitStatus::Completed;
  std::string message;
  double peak_sup_grad = 0.0;
  std::vector<std::pair<double, double>> sup_grad_curve;  ///< (t, sup|grad u|)
};

struct ProbeReport {
  std::vector<ProbeRun> runs;
  ProbeClass classification = ProbeClass::RefinementStable;
  double growth = 0.0;  ///< relative change of the peak over the last refinement
};

/// Runs the same initial datum on n x n tori for every n in `refinements`
/// (increasing). dt is rescaled by (n_0/n)^2 to keep the CFL ratio. The result
/// is RefinementGrowing if a finer run blows up or its peak sup|grad u|
/// exceeds the previous one by more than `growth_tol` relative; otherwise
/// RefinementStable. This is a classification only.
ProbeReport singularity_probe(const std::function<Field(const DomainGrid&)>& make_u0,
                              double length0, double length1, std::span<const int> refinements,
                              const FlowConfig& cfg, double growth_tol = 0.1);

}  // namespace schroflow::flow
