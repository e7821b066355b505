#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "schroflow/cli.hpp"
#include "schroflow/error.hpp"
#include "schroflow/io.hpp"

namespace schroflow::cli {

namespace fs = std::filesystem;
using io::format_double;
using nlohmann::json;

namespace {

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void write_snapshot_with_sidecar(const fs::path& dir, const std::string& stem, const Field& u,
                                 const RunManifest& m, double time, const json& extra) {
  io::write_snapshot(dir / (stem + ".sflw"), u);
  json sidecar = {
      {"format", "SFLW"},
      {"version", io::snapshot_version},
      {"time", time},
      {"target", m.target},
      {"seed", m.seed},
      {"manifest", json::parse(to_json(m))},
  };
  sidecar.update(extra);
  io::write_text(dir / (stem + ".json"), sidecar.dump(2) + "\n");
}

std::vector<std::pair<std::string, Field>> sample_fields(const RunManifest& m,
                                                         const DomainGrid& grid,
                                                         const TargetManifold& target) {
  std::vector<std::pair<std::string, Field>> out;
  if (m.field_count == 1) {
    out.emplace_back(m.init.to_string(), make_initial(grid, target, m.init, m.seed));
    return out;
  }
  InitSpec base;
  base.name = "random-smooth";
  std::uint64_t first = m.seed;
  if (m.init.name == "random-smooth") {
    base = m.init;
    if (auto it = base.params.find("seed"); it != base.params.end()) first = std::uint64_t(it->second);
  }
  for (int i = 0; i < m.field_count; ++i) {
    InitSpec spec = base;
    spec.params["seed"] = double(first + std::uint64_t(i));
    out.emplace_back(spec.to_string(), make_initial(grid, target, spec, m.seed));
  }
  return out;
}

std::string csv_field(const std::string& s) { return "\"" + s + "\""; }

int run_simulate(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto grid = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  const auto u0 = make_initial(grid, target, m.init, m.seed);
  write_snapshot_with_sidecar(dir, "initial", u0, m, 0.0, json::object());

  const auto traj = flow::run(u0, m.flow);
  auto csv = open_csv(dir / "norms.csv");
  io::write_reports_csv(csv, traj.reports);
  write_snapshot_with_sidecar(dir, "final", *traj.final_state, m, traj.final_time,
                              {{"status", std::string(flow::to_string(traj.status))},
                               {"steps", traj.steps_taken},
                               {"message", traj.message}});

  const auto& first = traj.reports.front();
  const auto& last = traj.reports.back();
  log << "status " << flow::to_string(traj.status) << " after " << traj.steps_taken
      << " steps, t = " << traj.final_time << "\n"
      << "energy " << first.energy << " -> " << last.energy << "\n";
  if (!traj.message.empty()) log << traj.message << "\n";
  return exit_code_for(traj.status);
}

int run_sweep(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto grid = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  const auto u0 = make_initial(grid, target, m.init, m.seed);
  const auto result = flow::epsilon_sweep(u0, m.eps_list, m.flow);

  auto csv = open_csv(dir / "sweep.csv");
  csv << "epsilon,deviation,status\n";
  for (const auto& row : result.rows) {
    csv << format_double(row.epsilon) << ',' << format_double(row.deviation) << ','
        << flow::to_string(row.status) << '\n';
    log << "eps " << row.epsilon << "  deviation " << row.deviation << "  "
        << flow::to_string(row.status) << "\n";
  }
  const json summary = {
      {"reference_status", std::string(flow::to_string(result.reference_status))},
      {"monotone", result.monotone},
      {"order", result.order},
  };
  io::write_text(dir / "sweep_summary.json", summary.dump(2) + "\n");
  log << "monotone " << (result.monotone ? "yes" : "no") << ", fitted order " << result.order
      << "\n";
  return exit_code::completed;
}

int run_probe(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto base = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  const auto make_u0 = [&](const DomainGrid& grid) {
    return make_initial(grid, target, m.init, m.seed);
  };
  const auto report = flow::singularity_probe(make_u0, base.length(0), base.length(1),
                                              m.refinements, m.flow, m.growth_tol);

  auto curves = open_csv(dir / "probe.csv");
  curves << "n,t,sup_grad\n";
  auto runs = open_csv(dir / "probe_runs.csv");
  runs << "n,dt,status,peak_sup_grad\n";
  for (const auto& r : report.runs) {
    for (const auto& [t, g] : r.sup_grad_curve) {
      curves << r.n << ',' << format_double(t) << ',' << format_double(g) << '\n';
    }
    runs << r.n << ',' << format_double(r.dt) << ',' << flow::to_string(r.status) << ','
         << format_double(r.peak_sup_grad) << '\n';
    log << "n " << r.n << "  peak sup|grad u| " << r.peak_sup_grad << "  "
        << flow::to_string(r.status) << "\n";
  }
  const json summary = {
      {"classification", std::string(flow::to_string(report.classification))},
      {"growth", report.growth},
  };
  io::write_text(dir / "probe_summary.json", summary.dump(2) + "\n");
  log << "classification " << flow::to_string(report.classification) << "\n";
  return exit_code::completed;
}

int run_check_norms(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto grid = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  auto csv = open_csv(dir / "norm_check.csv");
  csv << "field_id,k,inequality,lhs,rhs,fitted_C\n";
  double c_w = 0.0, c_h = 0.0;
  for (const auto& [id, u] : sample_fields(m, grid, target)) {
    const auto c = norms::compare_section_norms(u, m.norm_order);
    csv << csv_field(id) << ',' << c.k << ",w_by_h," << format_double(c.w_lhs) << ','
        << format_double(c.w_rhs_sum) << ',' << format_double(c.c_w) << '\n';
    csv << csv_field(id) << ',' << c.k << ",h_by_w," << format_double(c.h_lhs) << ','
        << format_double(c.h_rhs_sum) << ',' << format_double(c.c_h) << '\n';
    c_w = std::max(c_w, c.c_w);
    c_h = std::max(c_h, c.c_h);
  }
  log << "max fitted C: w_by_h " << c_w << ", h_by_w " << c_h << "\n";
  return exit_code::completed;
}

int run_gn_sweep(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto grid = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  const auto fields = sample_fields(m, grid, target);
  auto csv = open_csv(dir / "gn_sweep.csv");
  csv << "params,field_id,lhs,rhs,ratio\n";
  auto summary = open_csv(dir / "gn_summary.csv");
  summary << "params,sup_ratio\n";
  for (const auto& P : m.gn_params) {
    const auto label = csv_field(format_interpolation_params(P));
    double sup = 0.0;
    for (const auto& [id, u] : fields) {
      const auto c = norms::check_interpolation_inequality(u, P);
      csv << label << ',' << csv_field(id) << ',' << format_double(c.lhs) << ','
          << format_double(c.rhs) << ',' << format_double(c.ratio) << '\n';
      sup = std::max(sup, c.ratio);
    }
    summary << label << ',' << format_double(sup) << '\n';
    log << format_interpolation_params(P) << "  sup ratio " << sup << "\n";
  }
  return exit_code::completed;
}

int run_dispersion(const RunManifest& m, const fs::path& dir, std::ostream& log) {
  const auto rows = dispersion_experiment(m);
  auto csv = open_csv(dir / "dispersion.csv");
  csv << "k,theta,omega_theory,omega_observed,rel_error\n";
  for (const auto& r : rows) {
    csv << format_double(r.k) << ',' << format_double(r.theta) << ','
        << format_double(r.omega_theory) << ',' << format_double(r.omega_observed) << ','
        << format_double(r.rel_error) << '\n';
    log << "k " << r.k << " theta " << r.theta << "  omega " << r.omega_observed
        << " (theory " << r.omega_theory << ", rel error " << r.rel_error << ")\n";
  }
  return exit_code::completed;
}

}  // namespace

double precession_frequency(std::span<const double> times, std::span<const Field> snapshots,
                            double k_eff) {
  const std::size_t n = std::min(times.size(), snapshots.size());
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  std::vector<double> phase(n);
  double offset = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const Field& u = snapshots[s];
    std::complex<double> c{};
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = u.grid().coordinate(i, 0);
      c += std::complex<double>(u[i].x, u[i].y) * std::polar(1.0, -k_eff * x);
    }
    const double raw = std::arg(c);
    if (s > 0) {
      double jump = raw + offset - phase[s - 1];
      while (jump > std::numbers::pi) {
        offset -= 2.0 * std::numbers::pi;
        jump -= 2.0 * std::numbers::pi;
      }
      while (jump < -std::numbers::pi) {
        offset += 2.0 * std::numbers::pi;
        jump += 2.0 * std::numbers::pi;
      }
    }
    phase[s] = raw + offset;
  }
  double st = 0, sp = 0, stt = 0, stp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    st += times[s];
    sp += phase[s];
    stt += times[s] * times[s];
    stp += times[s] * phase[s];
  }
  const double slope = (n * stp - st * sp) / (n * stt - st * st);
  return -slope;
}

std::vector<DispersionRow> dispersion_experiment(const RunManifest& m) {
  const auto grid = m.domain.make_grid();
  const auto target = TargetManifold::from_name(m.target);
  const double kappa = 2.0 * std::numbers::pi / grid.length(0);
  std::vector<DispersionRow> rows;
  for (double k : m.dispersion_k) {
    for (double theta : m.dispersion_theta) {
      InitSpec spec;
      spec.name = "magnon";
      spec.params = {{"k", k}, {"theta", theta}};
      const auto u0 = make_initial(grid, target, spec, m.seed);

      DispersionRow row;
      row.k = k;
      row.theta = theta;
      row.omega_theory = magnon_frequency(target, k * kappa, theta);

      flow::FlowConfig cfg = m.flow;
      cfg.epsilon = 0.0;
      // Keep the phase advance between samples well below pi.
      const double per_step = std::fabs(row.omega_theory) * cfg.dt;
      if (per_step * cfg.monitor_every > 1.0) {
        cfg.monitor_every = std::max(1, int(1.0 / per_step));
      }
      const auto traj = flow::run(u0, cfg, true);
      if (traj.status != flow::ExitStatus::Completed) {
        throw Error(traj.status == flow::ExitStatus::BlowUp ? ErrorKind::BlowUp
                                                            : ErrorKind::MidpointDiverged,
                    traj.message);
      }
      std::vector<double> times;
      for (const auto& r : traj.reports) times.push_back(r.time);
      row.omega_observed = precession_frequency(times, traj.snapshots, k * kappa);
      const double err = std::fabs(row.omega_observed - row.omega_theory);
      row.rel_error = row.omega_theory != 0.0 ? err / std::fabs(row.omega_theory) : err;
      rows.push_back(row);
    }
  }
  return rows;
}

int execute(const RunManifest& m, std::ostream& log) {
  validate(m);
  const fs::path dir = m.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  io::write_text(dir / "manifest.json", to_json(m));
  switch (m.command) {
    case Command::Simulate: return run_simulate(m, dir, log);
    case Command::SweepEpsilon: return run_sweep(m, dir, log);
    case Command::ProbeSingularity: return run_probe(m, dir, log);
    case Command::CheckNorms: return run_check_norms(m, dir, log);
    case Command::GnSweep: return run_gn_sweep(m, dir, log);
    case Command::Dispersion: return run_dispersion(m, dir, log);
  }
  return exit_code::completed;
}

}  // namespace schroflow::cli
