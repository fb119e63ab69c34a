#pragma once

// Physical constants, unit conversions and the error types shared by the
// whole library.
//
// Internal units: lengths in micrometres, angular frequencies in rad/s,
// energies in eV, hbar = 1 inside the dynamics. Every quoted NV-centre
// "frequency" (omega, g, delta) is an angular frequency.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nvreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A root or mode that the caller asked for does not exist.
class NoSolution : public Error {
 public:
  using Error::Error;
};

// Quadrature or time-step refinement failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration text or a violated parameter invariant.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The configuration text itself could not be read.
class ParseError : public ConfigError {
 public:
  explicit ParseError(const std::string& what) : ConfigError("", "parse error: " + what) {}
};

namespace core {

struct PhysicalConstants {
  static constexpr double speed_of_light = 2.99792458e14;  // um/s
  static constexpr double hbar_ev_s = 6.582119569e-16;     // eV*s
  static constexpr double zpl_wavelength = 0.637;          // um
  static constexpr double zpl_energy = 1.945;              // eV
  static constexpr double diamond_index = 2.4;
  static constexpr double zero_field_splitting_hz = 2.87e9;  // Hz (cycles/s)
  static constexpr double zpl_angular_frequency = 2.95e15;   // rad/s, as quoted
};

// Plot/export unit conventions.
struct UnitSystem {
  static constexpr const char* length_unit = "um";
  static constexpr const char* frequency_unit = "rad/s";
  static constexpr const char* energy_unit = "eV";
  // Times are exported in units of 1/omega_a(0).
  static constexpr double time_unit_s = 1.0 / PhysicalConstants::zpl_angular_frequency;
};

inline double freq_to_energy(double omega) {
  if (!(omega >= 0.0)) throw DomainError("freq_to_energy: angular frequency must be >= 0");
  return PhysicalConstants::hbar_ev_s * omega;
}

inline double energy_to_freq(double energy_ev) {
  if (!(energy_ev >= 0.0)) throw DomainError("energy_to_freq: energy must be >= 0");
  return energy_ev / PhysicalConstants::hbar_ev_s;
}

// Signed variant for quantities such as a hopping rate that may be negative.
inline double signed_freq_to_energy(double omega) {
  return PhysicalConstants::hbar_ev_s * omega;
}

inline double wavelength_to_freq(double wavelength_um) {
  if (!(wavelength_um > 0.0)) throw DomainError("wavelength_to_freq: wavelength must be > 0");
  return 2.0 * std::numbers::pi * PhysicalConstants::speed_of_light / wavelength_um;
}

inline double freq_to_wavelength(double omega) {
  if (!(omega > 0.0)) throw DomainError("freq_to_wavelength: angular frequency must be > 0");
  return 2.0 * std::numbers::pi * PhysicalConstants::speed_of_light / omega;
}

// Vacuum wavevector k = omega/c in 1/um.
inline double vacuum_wavevector(double wavelength_um) {
  if (!(wavelength_um > 0.0)) throw DomainError("vacuum_wavevector: wavelength must be > 0");
  return 2.0 * std::numbers::pi / wavelength_um;
}

// Angular frequency equivalent of an ordinary frequency.
inline constexpr double hz_to_rad_s(double hz) { return 2.0 * std::numbers::pi * hz; }

inline double zero_field_splitting_rad_s() {
  return hz_to_rad_s(PhysicalConstants::zero_field_splitting_hz);
}

}  // namespace core
}  // namespace nvreg
