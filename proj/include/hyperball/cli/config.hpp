#ifndef HYPERBALL_CLI_CONFIG_HPP
#define HYPERBALL_CLI_CONFIG_HPP

// Flat "key = value" experiment configuration.

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyperball::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AtomFamily {
  int n = 3;
  double p = 1.0;
  std::string p_text = "1";
};

/// Every key is optional; commands fill in their own defaults for the
/// sweep-shaped ones (dims, families).
struct ExperimentConfig {
  std::optional<int> n;             // restricts a sweep to one dimension
  std::vector<int> dims;            // dimensions to sweep
  int max_degree = 8;               // highest spherical-harmonic degree in test data
  int quad_degree = 16;             // exact degree of the pairing quadrature
  int r_points = 24;                // radii in profile grids (>= 20)
  double r_gap_min = 1e-4;          // smallest 1 - r in profile grids
  double tolerance = 1e-9;          // relative bound for D residuals
  std::uint64_t seed = 20240601;    // base seed for all random test data
  std::string out;                  // CSV path; empty means stdout
  bool corrupt_radial = false;      // test hook: Euclidean radial factor in verify-dirichlet
  int atom_seeds = 3;               // seeds per cap scale in atom-bound
  std::vector<AtomFamily> atom_families;
  bool negative_control = true;     // include the moment-free atom family
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

/// Reals, with "a/b" fractions accepted.
inline double parse_real(const std::string& key, const std::string& v) {
  try {
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
      return parse_real(key, v.substr(0, slash)) / parse_real(key, v.substr(slash + 1));
    }
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> parts;
  std::istringstream is(v);
  std::string p;
  while (std::getline(is, p, sep)) {
    p = trim(p);
    if (!p.empty()) parts.push_back(p);
  }
  return parts;
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  auto dim_ok = [](int n) { return n >= 3 && n <= 6; };
  if (c.n && !dim_ok(*c.n)) throw ConfigError("n must lie in [3, 6]");
  for (int d : c.dims)
    if (!dim_ok(d)) throw ConfigError("dims entries must lie in [3, 6]");
  if (c.max_degree < 0 || c.max_degree > 16) throw ConfigError("max_degree must lie in [0, 16]");
  if (c.quad_degree < 1 || c.quad_degree > 60) throw ConfigError("quad_degree must lie in [1, 60]");
  if (c.r_points < 20 || c.r_points > 400) throw ConfigError("r_points must lie in [20, 400]");
  if (!(c.r_gap_min > 0.0 && c.r_gap_min <= 1e-3)) throw ConfigError("r_gap_min must lie in (0, 1e-3]");
  if (!(c.tolerance > 0.0 && c.tolerance < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  if (c.atom_seeds < 1 || c.atom_seeds > 16) throw ConfigError("atom_seeds must lie in [1, 16]");
  for (const auto& f : c.atom_families) {
    if (f.n < 3 || f.n > 4) throw ConfigError("atom families support n in {3, 4}");
    if (!(f.p > 0.0 && f.p <= 1.0)) throw ConfigError("atom family p must lie in (0, 1]");
  }
}

inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "n") {
    c.n = static_cast<int>(parse_int(key, value));
  } else if (key == "dims") {
    c.dims.clear();
    for (const auto& p : split(value, ',')) c.dims.push_back(static_cast<int>(parse_int(key, p)));
  } else if (key == "max_degree") {
    c.max_degree = static_cast<int>(parse_int(key, value));
  } else if (key == "quad_degree") {
    c.quad_degree = static_cast<int>(parse_int(key, value));
  } else if (key == "r_points") {
    c.r_points = static_cast<int>(parse_int(key, value));
  } else if (key == "r_gap_min") {
    c.r_gap_min = parse_real(key, value);
  } else if (key == "tolerance") {
    c.tolerance = parse_real(key, value);
  } else if (key == "seed") {
    const long long s = parse_int(key, value);
    if (s < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "corrupt_radial") {
    c.corrupt_radial = parse_bool(key, value);
  } else if (key == "atom_seeds") {
    c.atom_seeds = static_cast<int>(parse_int(key, value));
  } else if (key == "atom_families") {
    c.atom_families.clear();
    for (const auto& f : split(value, ',')) {
      const auto colon = f.find(':');
      if (colon == std::string::npos) throw ConfigError("atom_families entries look like n:p, got '" + f + "'");
      AtomFamily fam;
      fam.n = static_cast<int>(parse_int(key, trim(f.substr(0, colon))));
      fam.p_text = trim(f.substr(colon + 1));
      fam.p = parse_real(key, fam.p_text);
      c.atom_families.push_back(fam);
    }
  } else if (key == "negative_control") {
    c.negative_control = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/// Lines are "key = value"; '#' starts a comment; blank lines are ignored.
inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace hyperball::cli

#endif  // HYPERBALL_CLI_CONFIG_HPP
