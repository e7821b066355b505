#include "schroflow/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "schroflow/error.hpp"
#include "schroflow/io.hpp"

namespace schroflow::cli {

using nlohmann::json;

namespace {

[[noreturn]] void usage(const std::string& why) { throw Error(ErrorKind::Usage, why); }

template <class T>
T parse_scalar(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    usage("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

double parse_exponent(std::string_view text) {
  if (text == "inf" || text == "infinity") return norms::infinity;
  return parse_scalar<double>(text, "exponent");
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_scalar<T>(text.substr(0, comma), what));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  if (out.empty()) usage("empty list for " + std::string(what));
  return out;
}

json exponent_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

double exponent_from_json(const json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  return j.get<double>();
}

json flow_to_json(const flow::FlowConfig& f) {
  return {
      {"epsilon", f.epsilon},
      {"dt", f.dt},
      {"t_end", f.t_end},
      {"scheme", std::string(flow::to_string(f.scheme))},
      {"monitor_every", f.monitor_every},
      {"k_monitor", f.k_monitor ? json(*f.k_monitor) : json(nullptr)},
      {"blowup_threshold", f.blowup_threshold},
      {"midpoint_tol", f.midpoint_tol},
      {"midpoint_max_iter", f.midpoint_max_iter},
      {"cfl_factor", f.cfl_factor},
      {"unsafe_dt", f.unsafe_dt},
  };
}

void flow_from_json(const json& j, flow::FlowConfig& f) {
  if (j.contains("epsilon")) f.epsilon = j["epsilon"].get<double>();
  if (j.contains("dt")) f.dt = j["dt"].get<double>();
  if (j.contains("t_end")) f.t_end = j["t_end"].get<double>();
  if (j.contains("scheme")) f.scheme = flow::scheme_from_string(j["scheme"].get<std::string>());
  if (j.contains("monitor_every")) f.monitor_every = j["monitor_every"].get<int>();
  if (j.contains("k_monitor")) {
    f.k_monitor = j["k_monitor"].is_null() ? std::nullopt
                                           : std::optional<int>(j["k_monitor"].get<int>());
  }
  if (j.contains("blowup_threshold")) f.blowup_threshold = j["blowup_threshold"].get<double>();
  if (j.contains("midpoint_tol")) f.midpoint_tol = j["midpoint_tol"].get<double>();
  if (j.contains("midpoint_max_iter")) f.midpoint_max_iter = j["midpoint_max_iter"].get<int>();
  if (j.contains("cfl_factor")) f.cfl_factor = j["cfl_factor"].get<double>();
  if (j.contains("unsafe_dt")) f.unsafe_dt = j["unsafe_dt"].get<bool>();
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::SweepEpsilon: return "sweep-epsilon";
    case Command::ProbeSingularity: return "probe-singularity";
    case Command::CheckNorms: return "check-norms";
    case Command::GnSweep: return "gn-sweep";
    case Command::Dispersion: return "dispersion";
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  for (auto c : {Command::Simulate, Command::SweepEpsilon, Command::ProbeSingularity,
                 Command::CheckNorms, Command::GnSweep, Command::Dispersion}) {
    if (to_string(c) == name) return c;
  }
  usage("unknown command '" + std::string(name) + "'");
}

int exit_code_for(flow::ExitStatus status) {
  switch (status) {
    case flow::ExitStatus::Completed: return exit_code::completed;
    case flow::ExitStatus::BlowUp: return exit_code::blowup;
    case flow::ExitStatus::SolverFailure: return exit_code::solver_failure;
  }
  return exit_code::solver_failure;
}

DomainGrid DomainSpec::make_grid() const {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto length = [&](std::size_t a) {
    if (lengths.empty()) return two_pi;
    return a < lengths.size() ? lengths[a] : lengths.front();
  };
  if (kind == "s1") {
    if (sizes.size() != 1) usage("--n for domain s1 takes one size");
    if (lengths.size() > 1) usage("--length for domain s1 takes one period");
    return DomainGrid::circle(sizes[0], length(0));
  }
  if (kind == "t2") {
    if (sizes.empty() || sizes.size() > 2) usage("--n for domain t2 takes one or two sizes");
    if (lengths.size() > 2) usage("--length for domain t2 takes at most two periods");
    const int n1 = sizes.size() == 2 ? sizes[1] : sizes[0];
    return DomainGrid::torus(sizes[0], n1, length(0), length(1));
  }
  usage("unknown domain '" + kind + "' (expected s1 or t2)");
}

norms::InterpolationParams parse_interpolation_params(std::string_view text) {
  norms::InterpolationParams P;
  bool seen[6] = {};
  const std::string_view keys[6] = {"j", "n", "p", "q", "r", "a"};
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) usage("expected key=value in '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    int slot = -1;
    for (int s = 0; s < 6; ++s) {
      if (keys[s] == key) slot = s;
    }
    if (slot < 0) usage("unknown interpolation parameter '" + std::string(key) + "'");
    seen[slot] = true;
    switch (slot) {
      case 0: P.j = parse_scalar<int>(value, "j"); break;
      case 1: P.n = parse_scalar<int>(value, "n"); break;
      case 2: P.p = parse_exponent(value); break;
      case 3: P.q = parse_exponent(value); break;
      case 4: P.r = parse_exponent(value); break;
      case 5: P.a = parse_scalar<double>(value, "a"); break;
    }
  }
  for (int s = 0; s < 6; ++s) {
    if (!seen[s]) usage("interpolation parameter '" + std::string(keys[s]) + "' missing");
  }
  return P;
}

std::string format_interpolation_params(const norms::InterpolationParams& P) {
  const auto e = [](double v) { return std::isinf(v) ? std::string("inf") : io::format_double(v); };
  return "j=" + std::to_string(P.j) + ",n=" + std::to_string(P.n) + ",p=" + e(P.p) +
         ",q=" + e(P.q) + ",r=" + e(P.r) + ",a=" + io::format_double(P.a);
}

std::string to_json(const RunManifest& m) {
  json gn = json::array();
  for (const auto& P : m.gn_params) {
    gn.push_back({{"j", P.j}, {"n", P.n}, {"p", exponent_json(P.p)}, {"q", exponent_json(P.q)},
                  {"r", exponent_json(P.r)}, {"a", P.a}});
  }
  json domain = {{"kind", m.domain.kind}, {"sizes", m.domain.sizes}};
  domain["lengths"] = m.domain.lengths;
  const json j = {
      {"command", std::string(to_string(m.command))},
      {"domain", domain},
      {"target", m.target},
      {"init", m.init.to_string()},
      {"flow", flow_to_json(m.flow)},
      {"output_dir", m.output_dir},
      {"seed", m.seed},
      {"eps_list", m.eps_list},
      {"refinements", m.refinements},
      {"growth_tol", m.growth_tol},
      {"norm_order", m.norm_order},
      {"field_count", m.field_count},
      {"gn_params", gn},
      {"dispersion_k", m.dispersion_k},
      {"dispersion_theta", m.dispersion_theta},
  };
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) usage("manifest must be a JSON object");
    if (j.contains("command")) m.command = command_from_string(j["command"].get<std::string>());
    if (j.contains("domain")) {
      const auto& d = j["domain"];
      if (d.contains("kind")) m.domain.kind = d["kind"].get<std::string>();
      if (d.contains("sizes")) m.domain.sizes = d["sizes"].get<std::vector<int>>();
      if (d.contains("lengths")) m.domain.lengths = d["lengths"].get<std::vector<double>>();
    }
    if (j.contains("target")) m.target = j["target"].get<std::string>();
    if (j.contains("init")) m.init = InitSpec::parse(j["init"].get<std::string>());
    if (j.contains("flow")) flow_from_json(j["flow"], m.flow);
    if (j.contains("output_dir")) m.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("eps_list")) m.eps_list = j["eps_list"].get<std::vector<double>>();
    if (j.contains("refinements")) m.refinements = j["refinements"].get<std::vector<int>>();
    if (j.contains("growth_tol")) m.growth_tol = j["growth_tol"].get<double>();
    if (j.contains("norm_order")) m.norm_order = j["norm_order"].get<int>();
    if (j.contains("field_count")) m.field_count = j["field_count"].get<int>();
    if (j.contains("gn_params")) {
      m.gn_params.clear();
      for (const auto& g : j["gn_params"]) {
        norms::InterpolationParams P;
        P.j = g.at("j").get<int>();
        P.n = g.at("n").get<int>();
        P.p = exponent_from_json(g.at("p"));
        P.q = exponent_from_json(g.at("q"));
        P.r = exponent_from_json(g.at("r"));
        P.a = g.at("a").get<double>();
        m.gn_params.push_back(P);
      }
    }
    if (j.contains("dispersion_k")) m.dispersion_k = j["dispersion_k"].get<std::vector<double>>();
    if (j.contains("dispersion_theta")) {
      m.dispersion_theta = j["dispersion_theta"].get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    usage(std::string("malformed manifest: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) throw;
    usage(e.what());
  }
  return m;
}

void validate(const RunManifest& m) {
  try {
    const auto grid = m.domain.make_grid();
    const auto target = TargetManifold::from_name(m.target);
    validate_initializer(m.init, target);
    flow::validate(grid, m.flow);
    const int dim = grid.dim();
    switch (m.command) {
      case Command::Simulate: break;
      case Command::SweepEpsilon:
        if (m.eps_list.empty()) usage("--eps-list must not be empty");
        for (double e : m.eps_list) {
          if (!(e > 0.0)) usage("--eps-list entries must be positive");
        }
        break;
      case Command::ProbeSingularity:
        if (dim != 2) usage("probe-singularity needs --domain t2");
        if (m.refinements.empty()) usage("--refinements must not be empty");
        for (std::size_t i = 0; i < m.refinements.size(); ++i) {
          if (m.refinements[i] < DomainGrid::min_nodes_per_axis) {
            usage("--refinements entries must be at least 8");
          }
          if (i > 0 && m.refinements[i] <= m.refinements[i - 1]) {
            usage("--refinements must be increasing");
          }
        }
        break;
      case Command::CheckNorms:
        if (2 * m.norm_order <= dim) usage("--k must exceed m/2");
        norms::require_resolution(grid, m.norm_order - 1);
        if (m.field_count < 1) usage("--fields must be >= 1");
        break;
      case Command::GnSweep:
        if (m.gn_params.empty()) usage("gn-sweep needs at least one --gn parameter set");
        for (const auto& P : m.gn_params) {
          norms::validate_interpolation(dim, P);
          norms::require_resolution(grid, std::max(P.j, P.n));
        }
        if (m.field_count < 1) usage("--fields must be >= 1");
        break;
      case Command::Dispersion:
        if (m.domain.kind != "s1" || target.kind() != TargetKind::Sphere) {
          usage("dispersion needs --domain s1 --target s2");
        }
        if (m.dispersion_k.empty() || m.dispersion_theta.empty()) {
          usage("dispersion needs nonempty --dispersion-k and --dispersion-theta");
        }
        break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) throw;
    usage(e.what());
  }
}

std::optional<RunManifest> parse_and_validate(int argc, const char* const* argv,
                                              std::ostream& help) {
  CLI::App app{"Schrödinger flows into S^2 and H(-1) on periodic grids", "schroflow"};
  app.require_subcommand(1);

  std::optional<std::string> config, domain, sizes, lengths, target, init, scheme, output_dir;
  std::optional<std::string> eps_list, refinements, disp_k, disp_theta;
  std::optional<double> epsilon, dt, t_end, blowup, mid_tol, cfl, growth_tol;
  std::optional<int> monitor_every, k_monitor, mid_iter, norm_order, fields;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> gn;
  bool unsafe_dt = false;

  const std::pair<Command, const char*> commands[] = {
      {Command::Simulate, "Integrate one flow and record norms"},
      {Command::SweepEpsilon, "Compare epsilon-regularized runs with the epsilon = 0 flow"},
      {Command::ProbeSingularity, "Track sup|grad u| across grid refinements on T^2"},
      {Command::CheckNorms, "Compare ambient and bundle-valued Sobolev norms"},
      {Command::GnSweep, "Evaluate interpolation-inequality ratios"},
      {Command::Dispersion, "Measure the magnon dispersion relation"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, desc] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), desc);
    sub->add_option("--config", config, "JSON manifest; explicit flags override it");
    sub->add_option("--domain", domain, "s1 or t2");
    sub->add_option("--n", sizes, "nodes per axis, e.g. 256 or 128,128");
    sub->add_option("--length", lengths, "period per axis (default 2 pi)");
    sub->add_option("--target", target, "s2 or h2");
    sub->add_option("--init", init, "initial condition, e.g. magnon:k=2,theta=0.785");
    sub->add_option("--epsilon", epsilon, "parabolic regularization epsilon >= 0");
    sub->add_option("--dt", dt, "time step");
    sub->add_option("--t-end", t_end, "final time");
    sub->add_option("--scheme", scheme, "implicit-midpoint or explicit-rk4-projected");
    sub->add_option("--monitor-every", monitor_every, "steps between norm reports");
    sub->add_option("--k-monitor", k_monitor, "monitored norm order");
    sub->add_option("--blowup-threshold", blowup, "sup|grad u| abort level");
    sub->add_option("--midpoint-tol", mid_tol, "fixed-point tolerance");
    sub->add_option("--midpoint-max-iter", mid_iter, "fixed-point iteration cap");
    sub->add_option("--cfl-factor", cfl, "dt <= cfl_factor * h^2");
    sub->add_flag("--unsafe-dt", unsafe_dt, "skip the CFL check");
    sub->add_option("--output-dir", output_dir, "directory for outputs");
    sub->add_option("--seed", seed, "seed for random initial data");
    sub->add_option("--eps-list", eps_list, "decreasing epsilons, e.g. 0.1,0.05");
    sub->add_option("--refinements", refinements, "increasing T^2 sizes, e.g. 32,64,128");
    sub->add_option("--growth-tol", growth_tol, "relative peak growth marking a refinement as growing");
    sub->add_option("--k", norm_order, "comparison order k > m/2");
    sub->add_option("--fields", fields, "number of random-smooth sample fields");
    sub->add_option("--gn", gn, "interpolation parameters j=,n=,p=,q=,r=,a= (repeatable)");
    sub->add_option("--dispersion-k", disp_k, "wavenumbers, e.g. 1,2,3");
    sub->add_option("--dispersion-theta", disp_theta, "cone angles in radians");
    subs.emplace_back(cmd, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    help << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  RunManifest m;
  if (config) {
    std::ifstream in(*config);
    if (!in) usage("--config: cannot read " + *config);
    std::stringstream buf;
    buf << in.rdbuf();
    m = manifest_from_json(buf.str());
  }
  for (const auto& [cmd, sub] : subs) {
    if (sub->parsed()) m.command = cmd;
  }

  try {
    if (domain) {
      m.domain.kind = *domain;
      if (!sizes && m.domain.kind == "t2" && m.domain.sizes.size() == 1) {
        m.domain.sizes = {m.domain.sizes[0], m.domain.sizes[0]};
      }
    }
    if (sizes) m.domain.sizes = parse_list<int>(*sizes, "--n");
    if (lengths) m.domain.lengths = parse_list<double>(*lengths, "--length");
    if (target) m.target = *target;
    if (init) m.init = InitSpec::parse(*init);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) throw;
    usage(std::string("--init: ") + e.what());
  }
  if (epsilon) m.flow.epsilon = *epsilon;
  if (dt) m.flow.dt = *dt;
  if (t_end) m.flow.t_end = *t_end;
  if (scheme) {
    try {
      m.flow.scheme = flow::scheme_from_string(*scheme);
    } catch (const Error& e) {
      usage(std::string("--scheme: ") + e.what());
    }
  }
  if (monitor_every) m.flow.monitor_every = *monitor_every;
  if (k_monitor) m.flow.k_monitor = *k_monitor;
  if (blowup) m.flow.blowup_threshold = *blowup;
  if (mid_tol) m.flow.midpoint_tol = *mid_tol;
  if (mid_iter) m.flow.midpoint_max_iter = *mid_iter;
  if (cfl) m.flow.cfl_factor = *cfl;
  if (unsafe_dt) m.flow.unsafe_dt = true;
  if (output_dir) m.output_dir = *output_dir;
  if (seed) m.seed = *seed;
  if (eps_list) m.eps_list = parse_list<double>(*eps_list, "--eps-list");
  if (refinements) m.refinements = parse_list<int>(*refinements, "--refinements");
  if (growth_tol) m.growth_tol = *growth_tol;
  if (norm_order) m.norm_order = *norm_order;
  if (fields) m.field_count = *fields;
  if (!gn.empty()) {
    m.gn_params.clear();
    for (const auto& g : gn) m.gn_params.push_back(parse_interpolation_params(g));
  }
  if (disp_k) m.dispersion_k = parse_list<double>(*disp_k, "--dispersion-k");
  if (disp_theta) m.dispersion_theta = parse_list<double>(*disp_theta, "--dispersion-theta");

  validate(m);
  return m;
}

RunManifest parse_and_validate(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"schroflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream help;
  auto m = parse_and_validate(int(argv.size()), argv.data(), help);
  if (!m) usage("help requested");
  return *m;
}

}  // namespace schroflow::cli
