#include "schroflow/init.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "schroflow/error.hpp"

namespace schroflow {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidArgument, "malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::string format_number(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"constant", {}},
      {"greatcircle", {"w"}},
      {"magnon", {"k", "theta"}},
      {"random-smooth", {"seed", "modes", "amp"}},
      {"bump", {"amp", "width"}},
  };
  return keys;
}

// Lifts tangent-plane coordinates at the base point (0,0,1) onto the target.
Vec3 lift(const TargetManifold& target, double a, double b, double c) {
  if (target.kind() == TargetKind::Hyperbolic) return {a, b, std::sqrt(1.0 + a * a + b * b)};
  return target.project_point({a, b, 1.0 + c});
}

struct Mode {
  std::array<int, 2> k;
  double weight;
};

std::vector<Mode> low_modes(int dim, int modes) {
  std::vector<Mode> out;
  if (dim == 1) {
    for (int k = 1; k <= modes; ++k) out.push_back({{k, 0}, 1.0 / k});
    return out;
  }
  for (int k0 = 0; k0 <= modes; ++k0) {
    for (int k1 = -modes; k1 <= modes; ++k1) {
      if (k0 == 0 && k1 <= 0) continue;
      out.push_back({{k0, k1}, 1.0 / std::hypot(double(k0), double(k1))});
    }
  }
  return out;
}

}  // namespace

InitSpec InitSpec::parse(std::string_view text) {
  InitSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (spec.name.empty()) throw Error(ErrorKind::InvalidArgument, "empty initializer name");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) throw Error(ErrorKind::InvalidArgument, "empty initializer argument");
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      spec.positional.push_back(parse_number(item));
    } else {
      spec.params[std::string(item.substr(0, eq))] = parse_number(item.substr(eq + 1));
    }
  }
  return spec;
}

std::string InitSpec::to_string() const {
  std::string out = name;
  bool first = true;
  const auto sep = [&] {
    out += first ? ":" : ",";
    first = false;
  };
  for (double v : positional) {
    sep();
    out += format_number(v);
  }
  for (const auto& [key, v] : params) {
    sep();
    out += key + "=" + format_number(v);
  }
  return out;
}

double InitSpec::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<std::string> initializer_names() {
  std::vector<std::string> names;
  for (const auto& [name, keys] : known_keys()) names.push_back(name);
  return names;
}

void validate_initializer(const InitSpec& spec, const TargetManifold& target) {
  const auto it = known_keys().find(spec.name);
  if (it == known_keys().end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown initializer '" + spec.name + "'");
  }
  for (const auto& [key, value] : spec.params) {
    if (!it->second.contains(key)) {
      throw Error(ErrorKind::InvalidArgument,
                  "initializer '" + spec.name + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::InvalidArgument, "parameter '" + key + "' must be finite");
    }
  }
  if (spec.name == "constant") {
    if (!spec.positional.empty() && spec.positional.size() != 3) {
      throw Error(ErrorKind::InvalidArgument, "constant takes three coordinates");
    }
  } else if (!spec.positional.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "initializer '" + spec.name + "' takes key=value arguments only");
  }
  if (spec.name == "greatcircle" && target.kind() != TargetKind::Sphere) {
    throw Error(ErrorKind::InvalidArgument, "greatcircle is only defined for target s2");
  }
  if (spec.name == "random-smooth") {
    const double modes = spec.get("modes", 4);
    if (modes < 1 || modes != std::floor(modes)) {
      throw Error(ErrorKind::InvalidArgument, "random-smooth modes must be a positive integer");
    }
    const double seed = spec.get("seed", 0);
    if (seed < 0 || seed != std::floor(seed)) {
      throw Error(ErrorKind::InvalidArgument, "random-smooth seed must be a nonnegative integer");
    }
  }
  if (spec.name == "bump" && !(spec.get("width", 0.4) > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "bump width must be positive");
  }
}

double magnon_frequency(const TargetManifold& target, double k, double theta) {
  return k * k * (target.kind() == TargetKind::Sphere ? std::cos(theta) : std::cosh(theta));
}

Field make_initial(const DomainGrid& grid, const TargetManifold& target, const InitSpec& spec,
                   std::uint64_t default_seed) {
  validate_initializer(spec, target);
  const std::size_t n = grid.node_count();
  std::vector<Vec3> raw(n);
  std::array<double, 2> kappa{2.0 * std::numbers::pi / grid.length(0), 0.0};
  if (grid.dim() == 2) kappa[1] = 2.0 * std::numbers::pi / grid.length(1);

  if (spec.name == "constant") {
    const Vec3 p = spec.positional.empty()
                       ? Vec3{0.0, 0.0, 1.0}
                       : Vec3{spec.positional[0], spec.positional[1], spec.positional[2]};
    std::fill(raw.begin(), raw.end(), p);
  } else if (spec.name == "greatcircle") {
    const double w = spec.get("w", 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = w * kappa[0] * grid.coordinate(i, 0);
      raw[i] = {std::cos(phase), std::sin(phase), 0.0};
    }
  } else if (spec.name == "magnon") {
    const double k = spec.get("k", 1.0);
    const double theta = spec.get("theta", std::numbers::pi / 4);
    const bool sphere = target.kind() == TargetKind::Sphere;
    const double radius = sphere ? std::sin(theta) : std::sinh(theta);
    const double height = sphere ? std::cos(theta) : std::cosh(theta);
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = k * kappa[0] * grid.coordinate(i, 0);
      raw[i] = {radius * std::cos(phase), radius * std::sin(phase), height};
    }
  } else if (spec.name == "random-smooth") {
    const auto seed = spec.params.contains("seed") ? std::uint64_t(spec.get("seed", 0))
                                                   : default_seed;
    const int modes = int(spec.get("modes", 4));
    const double amp = spec.get("amp", 0.3);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const auto wavevectors = low_modes(grid.dim(), modes);
    std::vector<std::array<double, 6>> c(wavevectors.size());
    for (auto& row : c) {
      for (auto& v : row) v = coeff(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 3> p{};
      for (std::size_t m = 0; m < wavevectors.size(); ++m) {
        double phase = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
          phase += wavevectors[m].k[a] * kappa[a] * grid.coordinate(i, a);
        }
        const double cs = std::cos(phase);
        const double sn = std::sin(phase);
        for (int comp = 0; comp < 3; ++comp) {
          p[comp] += wavevectors[m].weight * (c[m][2 * comp] * cs + c[m][2 * comp + 1] * sn);
        }
      }
      raw[i] = lift(target, amp * p[0], amp * p[1], amp * p[2]);
    }
  } else if (spec.name == "bump") {
    const double amp = spec.get("amp", 4.0);
    const double width = spec.get("width", 0.4);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 2> tilt{};
      double rho2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        const double s = kappa[a] * (grid.coordinate(i, a) - 0.5 * grid.length(a));
        rho2 += 2.0 * (1.0 - std::cos(s)) / (kappa[a] * kappa[a]);
        tilt[a] = std::sin(s) / kappa[a];
      }
      const double g = amp * std::exp(-rho2 / (2.0 * width * width));
      raw[i] = lift(target, g * tilt[0], g * tilt[1], 0.0);
    }
  }
  return Field::projected(grid, target, std::move(raw));
}

}  // namespace schroflow
