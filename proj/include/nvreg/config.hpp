#pragma once

// INI-style run configuration.
//
//   [disk]    refractive_index, wavelength, azimuthal_number, radius,
//             thickness (optional), rows = "m:R, m:R, ..."
//   [chain]   spacing or spacing_ratio, bloch_phase, ratios = "2.01, 2.11",
//             columns = "m:R, ...", bloch_points
//   [gate]    omega_a0, g1, g2, delta_max, tolerance, phase_tolerance,
//             sample_points, initial = "a00, a01, a10, a11"
//   [pulses]  guard_gap (units of T1), sync_parking, control_area, target_area
//
// Lengths take um or nm (bare numbers are um), frequencies rad_s or eV (bare
// numbers are rad/s), angles a bare number of radians or a multiple of pi
// such as "17pi/40". Every key is optional; missing keys keep the built-in
// defaults, which reproduce the published design tables and gate parameters.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nvreg/chain.hpp"
#include "nvreg/core.hpp"
#include "nvreg/dynamics.hpp"
#include "nvreg/reference_tables.hpp"
#include "nvreg/wgm.hpp"

namespace nvreg::config {

struct DiskRow {
  int m = 0;
  double radius = 0.0;  // um
};

struct Config {
  wgm::DiskGeometry disk{3.0, std::nullopt, core::PhysicalConstants::diamond_index, 40};
  double wavelength = core::PhysicalConstants::zpl_wavelength;  // um
  std::vector<DiskRow> rows;

  chain::ChainGeometry chain;  // disk mirrors `disk`
  std::optional<double> spacing_ratio = 2.2;
  std::vector<double> ratios;
  std::vector<DiskRow> columns;
  int bloch_points = 65;

  dynamics::GateParams gate;
  int sample_points = 401;
  std::array<double, 4> initial{0.5, 0.5, 0.5, 0.5};  // as written; see initial_state()

  double spacing() const { return chain.spacing; }

  std::array<double, 4> initial_state() const {
    double norm = 0.0;
    for (double a : initial) norm += a * a;
    auto out = initial;
    for (double& a : out) a /= std::sqrt(norm);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Leading number and the remaining suffix.
inline std::pair<double, std::string> number_and_suffix(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) throw ConfigError(field, "expected a number, got '" + text + "'");
  if (!std::isfinite(value)) throw ConfigError(field, "value must be finite");
  return {value, trim(std::string(end))};
}

inline double parse_plain(const std::string& field, const std::string& text) {
  const auto [value, suffix] = number_and_suffix(field, text);
  if (!suffix.empty()) throw ConfigError(field, "unexpected unit '" + suffix + "'");
  return value;
}

inline int parse_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError(field, "expected an integer, got '" + text + "'");
  return value;
}

inline double parse_length(const std::string& field, const std::string& text) {
  const auto [value, suffix] = number_and_suffix(field, text);
  if (suffix.empty() || suffix == "um") return value;
  if (suffix == "nm") return value * 1e-3;
  throw ConfigError(field, "length unit must be um or nm, got '" + suffix + "'");
}

inline double parse_frequency(const std::string& field, const std::string& text) {
  const auto [value, suffix] = number_and_suffix(field, text);
  if (suffix.empty() || suffix == "rad_s") return value;
  if (suffix == "eV") return core::energy_to_freq(value);
  throw ConfigError(field, "frequency unit must be rad_s or eV, got '" + suffix + "'");
}

// "1.3", "pi", "0.5pi", "17pi/40", "pi/2".
inline double parse_angle(const std::string& field, const std::string& text) {
  std::string t = trim(text);
  const auto pi_at = t.find("pi");
  if (pi_at == std::string::npos) return parse_plain(field, t);
  const std::string head = trim(t.substr(0, pi_at));
  std::string tail = trim(t.substr(pi_at + 2));
  double factor = head.empty() ? 1.0 : parse_plain(field, head);
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError(field, "malformed angle '" + text + "'");
    const double divisor = parse_plain(field, tail.substr(1));
    if (divisor == 0.0) throw ConfigError(field, "division by zero in angle");
    factor /= divisor;
  }
  return factor * std::numbers::pi;
}

inline bool parse_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(field, "expected true or false, got '" + text + "'");
}

inline std::vector<DiskRow> parse_rows(const std::string& field, const std::string& text) {
  std::vector<DiskRow> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(field, "expected m:R entries, got '" + item + "'");
    out.push_back({parse_int(field, parts[0]), parse_length(field, parts[1])});
  }
  if (out.empty()) throw ConfigError(field, "at least one m:R entry required");
  return out;
}

inline std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_plain(field, item));
  if (out.empty()) throw ConfigError(field, "at least one value required");
  return out;
}

inline std::string format_number(double x) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

}  // namespace detail

inline std::vector<DiskRow> default_rows() {
  std::vector<DiskRow> out;
  for (const auto& row : reference::kDiskThickness) out.push_back({row.m, row.radius});
  return out;
}

inline std::vector<DiskRow> default_columns() {
  std::vector<DiskRow> out;
  for (const auto& c : reference::kHopping) out.push_back({c.m, c.radius});
  return out;
}

inline void validate(Config& c) {
  c.disk.validate();
  if (!(c.wavelength > 0.0)) throw ConfigError("wavelength", "wavelength > 0 required");
  for (const auto& row : c.rows) {
    wgm::DiskGeometry{row.radius, std::nullopt, c.disk.refractive_index, row.m}.validate();
  }
  for (const auto& col : c.columns) {
    wgm::DiskGeometry{col.radius, std::nullopt, c.disk.refractive_index, col.m}.validate();
  }
  for (double r : c.ratios) {
    if (!(r >= 2.0)) throw ConfigError("ratios", "L/R >= 2 required (disks may not overlap)");
  }
  c.chain.disk = c.disk;
  if (c.spacing_ratio) c.chain.spacing = *c.spacing_ratio * c.disk.radius;
  c.chain.validate();
  if (c.bloch_points < 2) throw ConfigError("bloch_points", "at least 2 points required");
  c.gate.validate();
  if (c.sample_points < 2) throw ConfigError("sample_points", "at least 2 samples required");
  double norm = 0.0;
  for (double a : c.initial) norm += a * a;
  if (!(norm > 0.0)) throw ConfigError("initial", "initial amplitudes must not all vanish");
}

inline Config default_config() {
  Config c;
  c.rows = default_rows();
  c.ratios.assign(reference::kSpacingRatios.begin(), reference::kSpacingRatios.end());
  c.columns = default_columns();
  validate(c);
  return c;
}

inline Config parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  if (tree.empty()) throw ParseError("configuration is empty");

  Config c = default_config();
  const std::map<std::string, std::set<std::string>> known{
      {"disk", {"refractive_index", "wavelength", "azimuthal_number", "radius", "thickness", "rows"}},
      {"chain", {"spacing", "spacing_ratio", "bloch_phase", "ratios", "columns", "bloch_points"}},
      {"gate", {"omega_a0", "g1", "g2", "delta_max", "tolerance", "phase_tolerance", "sample_points", "initial"}},
      {"pulses", {"guard_gap", "sync_parking", "control_area", "target_area"}},
  };
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end()) {
      throw ParseError(body.empty() ? "key '" + section + "' outside any section" : "unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      const std::string field = section + "." + key;
      const std::string v = value.data();
      using namespace detail;
      if (section == "disk") {
        if (key == "refractive_index") c.disk.refractive_index = parse_plain(field, v);
        else if (key == "wavelength") c.wavelength = parse_length(field, v);
        else if (key == "azimuthal_number") c.disk.azimuthal_number = parse_int(field, v);
        else if (key == "radius") c.disk.radius = parse_length(field, v);
        else if (key == "thickness") c.disk.thickness = parse_length(field, v);
        else if (key == "rows") c.rows = parse_rows(field, v);
      } else if (section == "chain") {
        if (key == "spacing") {
          c.chain.spacing = parse_length(field, v);
          c.spacing_ratio.reset();
        } else if (key == "spacing_ratio") c.spacing_ratio = parse_plain(field, v);
        else if (key == "bloch_phase") c.chain.bloch_phase = parse_angle(field, v);
        else if (key == "ratios") c.ratios = parse_list(field, v);
        else if (key == "columns") c.columns = parse_rows(field, v);
        else if (key == "bloch_points") c.bloch_points = parse_int(field, v);
      } else if (section == "gate") {
        if (key == "omega_a0") c.gate.omega_a0 = parse_frequency(field, v);
        else if (key == "g1") c.gate.g1 = parse_frequency(field, v);
        else if (key == "g2") c.gate.g2 = parse_frequency(field, v);
        else if (key == "delta_max") c.gate.delta_max = parse_frequency(field, v);
        else if (key == "tolerance") c.gate.tolerance = parse_plain(field, v);
        else if (key == "phase_tolerance") c.gate.phase_tolerance = parse_angle(field, v);
        else if (key == "sample_points") c.sample_points = parse_int(field, v);
        else if (key == "initial") {
          const auto a = parse_list(field, v);
          if (a.size() != 4) throw ConfigError(field, "exactly four amplitudes required");
          std::copy(a.begin(), a.end(), c.initial.begin());
        }
      } else if (section == "pulses") {
        if (key == "guard_gap") c.gate.guard_gap = parse_plain(field, v);
        else if (key == "sync_parking") c.gate.sync_parking = parse_bool(field, v);
        else if (key == "control_area") c.gate.control_area = parse_angle(field, v);
        else if (key == "target_area") c.gate.target_area = parse_angle(field, v);
      }
    }
  }
  validate(c);
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

// The effective configuration as INI text; feeding it back to parse_config
// reproduces the same run.
inline std::string to_ini(const Config& c) {
  using detail::format_number;
  auto rows = [](const std::vector<DiskRow>& rs) {
    std::string s;
    for (const auto& r : rs) s += (s.empty() ? "" : ", ") + std::to_string(r.m) + ":" + format_number(r.radius);
    return s;
  };
  auto list = [](auto begin, auto end) {
    std::string s;
    for (auto it = begin; it != end; ++it) s += (s.empty() ? "" : ", ") + format_number(*it);
    return s;
  };
  std::ostringstream o;
  o << "[disk]\n"
    << "refractive_index = " << format_number(c.disk.refractive_index) << "\n"
    << "wavelength = " << format_number(c.wavelength) << "um\n"
    << "azimuthal_number = " << c.disk.azimuthal_number << "\n"
    << "radius = " << format_number(c.disk.radius) << "um\n";
  if (c.disk.thickness) o << "thickness = " << format_number(*c.disk.thickness) << "um\n";
  o << "rows = " << rows(c.rows) << "\n"
    << "[chain]\n";
  if (c.spacing_ratio) o << "spacing_ratio = " << format_number(*c.spacing_ratio) << "\n";
  else o << "spacing = " << format_number(c.chain.spacing) << "um\n";
  o << "bloch_phase = " << format_number(c.chain.bloch_phase) << "\n"
    << "ratios = " << list(c.ratios.begin(), c.ratios.end()) << "\n"
    << "columns = " << rows(c.columns) << "\n"
    << "bloch_points = " << c.bloch_points << "\n"
    << "[gate]\n"
    << "omega_a0 = " << format_number(c.gate.omega_a0) << "rad_s\n"
    << "g1 = " << format_number(c.gate.g1) << "rad_s\n"
    << "g2 = " << format_number(c.gate.g2) << "rad_s\n"
    << "delta_max = " << format_number(c.gate.delta_max) << "rad_s\n"
    << "tolerance = " << format_number(c.gate.tolerance) << "\n"
    << "phase_tolerance = " << format_number(c.gate.phase_tolerance) << "\n"
    << "sample_points = " << c.sample_points << "\n"
    << "initial = " << list(c.initial.begin(), c.initial.end()) << "\n"
    << "[pulses]\n"
    << "guard_gap = " << format_number(c.gate.guard_gap) << "\n"
    << "sync_parking = " << (c.gate.sync_parking ? "true" : "false") << "\n"
    << "control_area = " << format_number(c.gate.control_area) << "\n"
    << "target_area = " << format_number(c.gate.target_area) << "\n";
  return o.str();
}

}  // namespace nvreg::config
