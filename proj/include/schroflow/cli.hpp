#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schroflow/flow.hpp"
#include "schroflow/init.hpp"
#include "schroflow/norms.hpp"

namespace schroflow::cli {

enum class Command { Simulate, SweepEpsilon, ProbeSingularity, CheckNorms, GnSweep, Dispersion };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

namespace exit_code {
inline constexpr int completed = 0;
inline constexpr int usage = 2;
inline constexpr int blowup = 3;
inline constexpr int solver_failure = 4;
}  // namespace exit_code

int exit_code_for(flow::ExitStatus status);

struct DomainSpec {
  std::string kind = "s1";  ///< "s1" or "t2"
  std::vector<int> sizes{256};
  std::vector<double> lengths;  ///< empty means 2 pi on every axis

  DomainGrid make_grid() const;
  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct RunManifest {
  Command command = Command::Simulate;
  DomainSpec domain;
  std::string target = "s2";
  InitSpec init;
  flow::FlowConfig flow;
  std::string output_dir = ".";
  std::uint64_t seed = 42;

  // sweep-epsilon
  std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
  // probe-singularity
  std::vector<int> refinements{32, 64};
  double growth_tol = 0.1;
  // check-norms and gn-sweep
  int norm_order = 2;
  int field_count = 1;
  std::vector<norms::InterpolationParams> gn_params;
  // dispersion
  std::vector<double> dispersion_k{1, 2, 3};
  std::vector<double> dispersion_theta{0.5235987755982988, 0.7853981633974483};

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string to_json(const RunManifest& manifest);
/// Missing keys keep their defaults. Throws Error(Usage) on malformed input.
RunManifest manifest_from_json(std::string_view text);

/// "j=1,n=2,p=2,q=2,r=2,a=0.5"; p, q, r accept "inf".
norms::InterpolationParams parse_interpolation_params(std::string_view text);
std::string format_interpolation_params(const norms::InterpolationParams& params);

/// Parses argv (argv[0] is the program name). A --config JSON file is loaded
/// first and explicit flags override it. Returns nullopt after printing help
/// to `help`. Throws Error(Usage) naming the offending flag or rule.
std::optional<RunManifest> parse_and_validate(int argc, const char* const* argv,
                                              std::ostream& help);
/// Convenience for tests: args exclude the program name.
RunManifest parse_and_validate(const std::vector<std::string>& args);

/// Throws Error(Usage).
void validate(const RunManifest& manifest);

/// Runs the manifest's command, writing outputs under output_dir. Returns the
/// process exit code.
int execute(const RunManifest& manifest, std::ostream& log);

struct DispersionRow {
  double k = 0.0;
  double theta = 0.0;
  double omega_theory = 0.0;
  double omega_observed = 0.0;
  double rel_error = 0.0;  ///< absolute error when omega_theory is 0
};

/// Magnon precession on S^1 -> S^2 at epsilon = 0 for every (k, theta) pair of
/// the manifest. The observed frequency comes from the unwrapped phase of the
/// k-th Fourier coefficient of u^1 + i u^2, fitted linearly in time.
std::vector<DispersionRow> dispersion_experiment(const RunManifest& manifest);

/// -d/dt arg c_k(t) by least squares, c_k = sum_x (u^1 + i u^2) e^{-i k x}.
/// `k_eff` is the physical wavenumber.
double precession_frequency(std::span<const double> times, std::span<const Field> snapshots,
                            double k_eff);

}  // namespace schroflow::cli
