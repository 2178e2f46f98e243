#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "skew_euler/errors.hpp"
#include "skew_euler/grid.hpp"
#include "skew_euler/manufactured.hpp"
#include "skew_euler/sbp.hpp"
#include "skew_euler/solver.hpp"

namespace skew_euler {

enum class InitialKind { constant, density_bump, manufactured, file };

inline const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::constant: return "constant";
    case InitialKind::density_bump: return "density-bump";
    case InitialKind::manufactured: return "manufactured";
    default: return "file";
  }
}

/// Everything needed to reproduce a run. Parsed from a sectioned key/value file:
///
///   [grid]     nx ny x_min x_max y_min y_max topology_x topology_y
///   [gas]      gamma alpha2
///   [scheme]   order cfl dt t_end sigma wall_flux_cancel a12 a14 b13 b14 sample_stride
///   [initial]  kind rho u v p amplitude pressure_amplitude width x_center y_center file
///   [output]   dir snapshot_times
///   [verify]   seed
///
/// grid.nx, grid.ny and gas.gamma are mandatory.
struct RunConfig {
  Grid2D grid;
  GasModel gas;
  int order = 4;
  double cfl = 0.5;
  double dt = 0.0;
  double t_end = 1.0;
  double sigma = 1.0;
  bool wall_flux_cancel = true;
  FreeParams free_params;
  std::size_t sample_stride = 1;

  InitialKind initial = InitialKind::density_bump;
  PhysicalState background{1.0, 0.0, 0.0, 1.0};
  double amplitude = 0.2;
  double pressure_amplitude = 0.0;
  double width = 0.1;
  double x_center = 0.5;
  double y_center = 0.5;
  std::string initial_file;

  std::string output_dir = "out";
  std::vector<double> snapshot_times;
  std::uint64_t seed = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v + "'", line);
  }
  if (pos != v.size()) throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

inline long long parse_int(const std::string& v, int line) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + v + "'", line);
  }
  if (pos != v.size()) throw ConfigError("expected an integer, got '" + v + "'", line);
  return x;
}

inline std::size_t parse_count(const std::string& v, int line) {
  const long long x = parse_int(v, line);
  if (x < 0) throw ConfigError("expected a non-negative integer, got '" + v + "'", line);
  return static_cast<std::size_t>(x);
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + v + "'", line);
}

inline Topology parse_topology(const std::string& v, int line) {
  if (v == "bounded") return Topology::bounded;
  if (v == "periodic") return Topology::periodic;
  throw ConfigError("expected bounded/periodic, got '" + v + "'", line);
}

inline InitialKind parse_kind(const std::string& v, int line) {
  if (v == "constant") return InitialKind::constant;
  if (v == "density-bump") return InitialKind::density_bump;
  if (v == "manufactured") return InitialKind::manufactured;
  if (v == "file") return InitialKind::file;
  throw ConfigError("unknown initial kind '" + v + "'", line);
}

inline std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(parse_double(cell, line));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.nx", [](RunConfig& c, const std::string& v, int l) { c.grid.nx = parse_count(v, l); }},
      {"grid.ny", [](RunConfig& c, const std::string& v, int l) { c.grid.ny = parse_count(v, l); }},
      {"grid.x_min", [](RunConfig& c, const std::string& v, int l) { c.grid.x_min = parse_double(v, l); }},
      {"grid.x_max", [](RunConfig& c, const std::string& v, int l) { c.grid.x_max = parse_double(v, l); }},
      {"grid.y_min", [](RunConfig& c, const std::string& v, int l) { c.grid.y_min = parse_double(v, l); }},
      {"grid.y_max", [](RunConfig& c, const std::string& v, int l) { c.grid.y_max = parse_double(v, l); }},
      {"grid.topology_x", [](RunConfig& c, const std::string& v, int l) { c.grid.topo_x = parse_topology(v, l); }},
      {"grid.topology_y", [](RunConfig& c, const std::string& v, int l) { c.grid.topo_y = parse_topology(v, l); }},
      {"gas.gamma", [](RunConfig& c, const std::string& v, int l) { c.gas.gamma = parse_double(v, l); }},
      {"gas.alpha2", [](RunConfig& c, const std::string& v, int l) { c.gas.alpha2 = parse_double(v, l); }},
      {"scheme.order", [](RunConfig& c, const std::string& v, int l) { c.order = static_cast<int>(parse_int(v, l)); }},
      {"scheme.cfl", [](RunConfig& c, const std::string& v, int l) { c.cfl = parse_double(v, l); }},
      {"scheme.dt", [](RunConfig& c, const std::string& v, int l) { c.dt = parse_double(v, l); }},
      {"scheme.t_end", [](RunConfig& c, const std::string& v, int l) { c.t_end = parse_double(v, l); }},
      {"scheme.sigma", [](RunConfig& c, const std::string& v, int l) { c.sigma = parse_double(v, l); }},
      {"scheme.wall_flux_cancel", [](RunConfig& c, const std::string& v, int l) { c.wall_flux_cancel = parse_bool(v, l); }},
      {"scheme.a12", [](RunConfig& c, const std::string& v, int l) { c.free_params.a12 = parse_double(v, l); }},
      {"scheme.a14", [](RunConfig& c, const std::string& v, int l) { c.free_params.a14 = parse_double(v, l); }},
      {"scheme.b13", [](RunConfig& c, const std::string& v, int l) { c.free_params.b13 = parse_double(v, l); }},
      {"scheme.b14", [](RunConfig& c, const std::string& v, int l) { c.free_params.b14 = parse_double(v, l); }},
      {"scheme.sample_stride", [](RunConfig& c, const std::string& v, int l) { c.sample_stride = parse_count(v, l); }},
      {"initial.kind", [](RunConfig& c, const std::string& v, int l) { c.initial = parse_kind(v, l); }},
      {"initial.rho", [](RunConfig& c, const std::string& v, int l) { c.background.rho = parse_double(v, l); }},
      {"initial.u", [](RunConfig& c, const std::string& v, int l) { c.background.u = parse_double(v, l); }},
      {"initial.v", [](RunConfig& c, const std::string& v, int l) { c.background.v = parse_double(v, l); }},
      {"initial.p", [](RunConfig& c, const std::string& v, int l) { c.background.p = parse_double(v, l); }},
      {"initial.amplitude", [](RunConfig& c, const std::string& v, int l) { c.amplitude = parse_double(v, l); }},
      {"initial.pressure_amplitude", [](RunConfig& c, const std::string& v, int l) { c.pressure_amplitude = parse_double(v, l); }},
      {"initial.width", [](RunConfig& c, const std::string& v, int l) { c.width = parse_double(v, l); }},
      {"initial.x_center", [](RunConfig& c, const std::string& v, int l) { c.x_center = parse_double(v, l); }},
      {"initial.y_center", [](RunConfig& c, const std::string& v, int l) { c.y_center = parse_double(v, l); }},
      {"initial.file", [](RunConfig& c, const std::string& v, int) { c.initial_file = v; }},
      {"output.dir", [](RunConfig& c, const std::string& v, int) { c.output_dir = v; }},
      {"output.snapshot_times", [](RunConfig& c, const std::string& v, int l) { c.snapshot_times = parse_list(v, l); }},
      {"verify.seed", [](RunConfig& c, const std::string& v, int l) {
         const long long s = parse_int(v, l);
         if (s < 0) throw ConfigError("seed must be non-negative", l);
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace detail

/// Checks value ranges. `lines` maps "section.key" to the line it was read from.
inline void validate_config(const RunConfig& c, const std::map<std::string, int>& lines = {}) {
  auto at = [&](const char* key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  if (!(c.gas.gamma > 1.0 && c.gas.gamma < 2.0))
    throw ConfigError("gas.gamma must lie in (1, 2); gamma = 1 degenerates the norm", at("gas.gamma"));
  if (!(c.gas.alpha2 > 0.0)) throw ConfigError("gas.alpha2 must be positive", at("gas.alpha2"));
  if (c.order != 2 && c.order != 4) throw ConfigError("scheme.order must be 2 or 4", at("scheme.order"));
  if (c.grid.nx < sbp_min_size(c.order))
    throw ConfigError("grid.nx too small for the operator order", at("grid.nx"));
  if (c.grid.ny < sbp_min_size(c.order))
    throw ConfigError("grid.ny too small for the operator order", at("grid.ny"));
  if (!(c.grid.x_max > c.grid.x_min)) throw ConfigError("grid.x_max must exceed grid.x_min", at("grid.x_max"));
  if (!(c.grid.y_max > c.grid.y_min)) throw ConfigError("grid.y_max must exceed grid.y_min", at("grid.y_max"));
  if (!(c.cfl > 0.0)) throw ConfigError("scheme.cfl must be positive", at("scheme.cfl"));
  if (!(c.dt >= 0.0)) throw ConfigError("scheme.dt must be >= 0 (0 selects it from cfl)", at("scheme.dt"));
  if (!(c.t_end > 0.0)) throw ConfigError("scheme.t_end must be positive", at("scheme.t_end"));
  if (!(c.sigma >= 0.0)) throw ConfigError("scheme.sigma must be >= 0", at("scheme.sigma"));
  if (c.sample_stride < 1) throw ConfigError("scheme.sample_stride must be >= 1", at("scheme.sample_stride"));
  if (!(c.background.rho > 0.0)) throw ConfigError("initial.rho must be positive", at("initial.rho"));
  if (!(c.background.p > 0.0)) throw ConfigError("initial.p must be positive", at("initial.p"));
  if (!(c.amplitude > -1.0)) throw ConfigError("initial.amplitude must exceed -1", at("initial.amplitude"));
  if (!(c.pressure_amplitude > -1.0))
    throw ConfigError("initial.pressure_amplitude must exceed -1", at("initial.pressure_amplitude"));
  if (!(c.width > 0.0)) throw ConfigError("initial.width must be positive", at("initial.width"));
  if (c.initial == InitialKind::file && c.initial_file.empty())
    throw ConfigError("initial.kind = file needs initial.file", at("initial.kind"));
  for (double t : c.snapshot_times)
    if (!(t >= 0.0)) throw ConfigError("snapshot times must be >= 0", at("output.snapshot_times"));
}

inline RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::map<std::string, int> lines;
  std::string section;
  std::string raw;
  int line = 0;
  bool x_center_set = false, y_center_set = false;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find_first_of("#;"); hash != std::string::npos) s.erase(hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", line);
      section = detail::trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (section.empty()) throw ConfigError("key outside of any [section]", line);
    const std::string key = section + "." + detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    const auto& table = detail::setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'", line);
    if (lines.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    it->second(c, value, line);
    lines[key] = line;
    if (key == "initial.x_center") x_center_set = true;
    if (key == "initial.y_center") y_center_set = true;
  }
  for (const char* req : {"grid.nx", "grid.ny", "gas.gamma"})
    if (!lines.count(req)) throw ConfigError(std::string("missing mandatory key '") + req + "'", 0);
  if (!x_center_set) c.x_center = 0.5 * (c.grid.x_min + c.grid.x_max);
  if (!y_center_set) c.y_center = 0.5 * (c.grid.y_min + c.grid.y_max);
  validate_config(c, lines);
  return c;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(is);
}

/// Writes every key with its resolved value; parse_config of the output
/// reproduces the same RunConfig.
inline void dump_config(std::ostream& os, const RunConfig& c) {
  const auto d = [](double x) { return format_double(x); };
  os << "[grid]\n"
     << "nx = " << c.grid.nx << "\nny = " << c.grid.ny << "\n"
     << "x_min = " << d(c.grid.x_min) << "\nx_max = " << d(c.grid.x_max) << "\n"
     << "y_min = " << d(c.grid.y_min) << "\ny_max = " << d(c.grid.y_max) << "\n"
     << "topology_x = " << to_string(c.grid.topo_x) << "\ntopology_y = " << to_string(c.grid.topo_y)
     << "\n\n[gas]\n"
     << "gamma = " << d(c.gas.gamma) << "\nalpha2 = " << d(c.gas.alpha2) << "\n\n[scheme]\n"
     << "order = " << c.order << "\ncfl = " << d(c.cfl) << "\ndt = " << d(c.dt) << "\n"
     << "t_end = " << d(c.t_end) << "\nsigma = " << d(c.sigma) << "\n"
     << "wall_flux_cancel = " << (c.wall_flux_cancel ? "true" : "false") << "\n"
     << "a12 = " << d(c.free_params.a12) << "\na14 = " << d(c.free_params.a14) << "\n"
     << "b13 = " << d(c.free_params.b13) << "\nb14 = " << d(c.free_params.b14) << "\n"
     << "sample_stride = " << c.sample_stride << "\n\n[initial]\n"
     << "kind = " << to_string(c.initial) << "\n"
     << "rho = " << d(c.background.rho) << "\nu = " << d(c.background.u) << "\n"
     << "v = " << d(c.background.v) << "\np = " << d(c.background.p) << "\n"
     << "amplitude = " << d(c.amplitude) << "\npressure_amplitude = " << d(c.pressure_amplitude)
     << "\nwidth = " << d(c.width) << "\n"
     << "x_center = " << d(c.x_center) << "\ny_center = " << d(c.y_center) << "\n";
  if (!c.initial_file.empty()) os << "file = " << c.initial_file << "\n";
  os << "\n[output]\n"
     << "dir = " << c.output_dir << "\nsnapshot_times = ";
  for (std::size_t k = 0; k < c.snapshot_times.size(); ++k)
    os << (k ? ", " : "") << d(c.snapshot_times[k]);
  os << "\n\n[verify]\nseed = " << c.seed << "\n";
}

inline SchemeConfig to_scheme_config(const RunConfig& c) {
  SchemeConfig s;
  s.grid = c.grid;
  s.gas = c.gas;
  s.order = c.order;
  s.free_params = c.free_params;
  s.sigma = c.sigma;
  s.wall_flux_cancel = c.wall_flux_cancel;
  s.cfl = c.cfl;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.sample_stride = c.sample_stride;
  s.snapshot_times = c.snapshot_times;
  if (c.initial == InitialKind::manufactured) {
    ManufacturedSolution mms(c.grid, c.gas);
    s.source = [mms](double x, double y, double t) { return mms.source(x, y, t); };
  }
  return s;
}

/// Smooth bump exp(-(sin^2(pi dx / Lx) + sin^2(pi dy / Ly)) / (pi w)^2), periodic
/// over the domain and close to a Gaussian of relative width w near its center.
inline double periodic_bump(const RunConfig& c, double x, double y) {
  const double pi = std::numbers::pi;
  const double sx = std::sin(pi * (x - c.x_center) / (c.grid.x_max - c.grid.x_min));
  const double sy = std::sin(pi * (y - c.y_center) / (c.grid.y_max - c.grid.y_min));
  return std::exp(-(sx * sx + sy * sy) / (pi * pi * c.width * c.width));
}

inline Field initial_field(const RunConfig& c) {
  switch (c.initial) {
    case InitialKind::constant: {
      const SkewState s = to_skew(c.background);
      return sample_field(c.grid, [&](double, double) { return s; });
    }
    case InitialKind::density_bump:
      return sample_field(c.grid, [&](double x, double y) {
        const double b = periodic_bump(c, x, y);
        PhysicalState q = c.background;
        q.rho *= 1.0 + c.amplitude * b;
        q.p *= 1.0 + c.pressure_amplitude * b;
        return to_skew(q);
      });
    case InitialKind::manufactured:
      return ManufacturedSolution(c.grid, c.gas).sample(c.grid, 0.0);
    default:
      return read_field_csv(c.initial_file, c.grid);
  }
}

}  // namespace skew_euler
