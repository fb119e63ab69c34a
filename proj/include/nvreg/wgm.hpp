#pragma once

// TM whispering-gallery modes of a single dielectric microdisk.
//
// The disk is reduced to a 2D problem with an effective index ñ: the slab
// condition fixes the axial wavevector β = k·sqrt(n_c² − ñ²) from the
// thickness, and the radial matching of J_m inside to H_m^(1) outside fixes
// ñ from the radius. For a prescribed vacuum wavelength the radial equation
// does not involve h, so solve_disk roots it for ñ first and then inverts the
// slab condition for h in closed form.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "nvreg/core.hpp"
#include "nvreg/specfun.hpp"

namespace nvreg::wgm {

struct DiskGeometry {
  double radius = 0.0;                 // um
  std::optional<double> thickness;     // um; unset until solved
  double refractive_index = core::PhysicalConstants::diamond_index;
  int azimuthal_number = 1;

  // Throws ConfigError naming the offending field.
  void validate() const {
    if (!(radius > 0.0)) throw ConfigError("radius", "R > 0 required");
    if (thickness && !(*thickness > 0.0)) throw ConfigError("thickness", "h > 0 required");
    if (!(refractive_index > 1.0)) throw ConfigError("refractive_index", "n_c > 1 required");
    if (azimuthal_number < 1) throw ConfigError("azimuthal_number", "m >= 1 required");
  }

  double thickness_or_throw() const {
    if (!thickness) throw Error("disk thickness has not been solved");
    return *thickness;
  }
};

struct WgmMode {
  double k = 0.0;       // vacuum wavevector, 1/um
  double n_eff = 0.0;   // ñ
  double beta = 0.0;    // axial wavevector, 1/um
  DiskGeometry geometry;
  // |Im(H_{m+1}/H_m)| / |H_{m+1}/H_m| at kR: the part of the radial equation a
  // real ñ cannot satisfy. Small in the high-Q limit.
  double radiative_ratio = 0.0;

  int m() const { return geometry.azimuthal_number; }
  double radius() const { return geometry.radius; }
  double thickness() const { return geometry.thickness_or_throw(); }
  double index() const { return geometry.refractive_index; }
  // Evanescent decay constant above/below the slab.
  double axial_decay() const { return k * std::sqrt(n_eff * n_eff - 1.0); }
};

namespace detail {

inline double fundamental_slab_phase(double n_eff, double n_c) {
  return std::atan(n_c * n_c * std::sqrt(n_eff * n_eff - 1.0) / std::sqrt(n_c * n_c - n_eff * n_eff));
}

template <typename F>
double bracket_root(F&& f, double lo, double hi) {
  boost::uintmax_t iterations = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
  return 0.5 * (a + b);
}

}  // namespace detail

// Left minus right side of the TM slab condition
// sqrt(n_c² − ñ²)·tan(βh/2) = n_c²·sqrt(ñ² − 1).
inline double slab_residual(double k, double h, double n_c, double n_eff) {
  const double root = std::sqrt(n_c * n_c - n_eff * n_eff);
  return root * std::tan(k * root * h / 2.0) - n_c * n_c * std::sqrt(n_eff * n_eff - 1.0);
}

// Fundamental-branch (βh/2 in (0, π/2)) effective index of a TM slab.
inline double slab_effective_index(double k, double h, double n_c) {
  if (!(k > 0.0)) throw DomainError("slab_effective_index: k > 0 required");
  if (!(h > 0.0)) throw NoSolution("slab_effective_index: below cutoff (h <= 0)");
  if (!(n_c > 1.0)) throw DomainError("slab_effective_index: n_c > 1 required");
  // Monotone decreasing in ñ: positive at ñ = 1, -π/2 at ñ = n_c.
  auto phase_mismatch = [&](double n) {
    return k * std::sqrt(n_c * n_c - n * n) * h / 2.0 - detail::fundamental_slab_phase(n, n_c);
  };
  const double n = detail::bracket_root(phase_mismatch, 1.0, n_c);
  if (n - 1.0 < 1e-12) throw NoSolution("slab_effective_index: below cutoff, mode not confined");
  return n;
}

// Thickness for which the fundamental slab mode has effective index ñ.
inline double slab_thickness(double k, double n_eff, double n_c) {
  if (!(n_eff > 1.0 && n_eff < n_c)) throw DomainError("slab_thickness: 1 < ñ < n_c required");
  const double beta = k * std::sqrt(n_c * n_c - n_eff * n_eff);
  return 2.0 * detail::fundamental_slab_phase(n_eff, n_c) / beta;
}

// LHS − RHS of ñ J_{m+1}(kñR)/J_m(kñR) = H_{m+1}(kR)/H_m(kR). Near a zero of
// J_m the reciprocal form J_m/(ñ J_{m+1}) − H_m/H_{m+1} is returned instead.
inline std::complex<double> radial_residual(int m, double k, double n_eff, double radius) {
  const auto j = specfun::bessel_j_pair(m, k * n_eff * radius);
  const auto [hm, hm1] = specfun::hankel1_pair(m, k * radius);
  if (std::abs(j.m) >= 1e-3 * std::abs(j.m_plus_1)) {
    return n_eff * j.m_plus_1 / j.m - hm1 / hm;
  }
  return j.m / (n_eff * j.m_plus_1) - hm / hm1;
}

// Pole-free real form used for root finding:
// ñ J_{m+1}(kñR) − J_m(kñR)·Re(H_{m+1}(kR)/H_m(kR)).
inline double radial_characteristic(int m, double k, double n_eff, double radius, double rhs_real) {
  const auto j = specfun::bessel_j_pair(m, k * n_eff * radius);
  return n_eff * j.m_plus_1 - j.m * rhs_real;
}

// Fundamental radial TM_{m,1} mode at the given wavelength: returns the mode
// with ñ and the thickness h that makes the disk resonant.
inline WgmMode solve_disk(double radius, int m, double wavelength, double n_c) {
  DiskGeometry geometry{radius, std::nullopt, n_c, m};
  geometry.validate();
  const double k = core::vacuum_wavevector(wavelength);
  if (!(k * radius * n_c > m)) {
    throw NoSolution("solve_disk: k R n_c <= m, no whispering-gallery solution for R=" +
                     std::to_string(radius) + " m=" + std::to_string(m));
  }
  const auto [hm, hm1] = specfun::hankel1_pair(m, k * radius);
  const std::complex<double> rhs = hm1 / hm;
  auto characteristic = [&](double n) { return radial_characteristic(m, k, n, radius, rhs.real()); };

  // Grid step of π/8 in kñR separates consecutive zeros of J_m and J_{m+1}.
  const double span = (n_c - 1.0) * k * radius;
  const int cells = std::max(64, static_cast<int>(std::ceil(span / (std::numbers::pi / 8.0))));
  const double lo_edge = 1.0 + 1e-9;
  const double hi_edge = n_c - 1e-9;
  const double step = (hi_edge - lo_edge) / cells;
  double prev_n = lo_edge;
  double prev_f = characteristic(prev_n);
  for (int i = 1; i <= cells; ++i) {
    const double n = lo_edge + i * step;
    const double f = characteristic(n);
    if (prev_f == 0.0 || (prev_f < 0.0) != (f < 0.0)) {
      const double n_eff = prev_f == 0.0 ? prev_n : detail::bracket_root(characteristic, prev_n, n);
      geometry.thickness = slab_thickness(k, n_eff, n_c);
      WgmMode mode;
      mode.k = k;
      mode.n_eff = n_eff;
      mode.beta = k * std::sqrt(n_c * n_c - n_eff * n_eff);
      mode.geometry = geometry;
      mode.radiative_ratio = std::abs(rhs.imag()) / std::abs(rhs);
      return mode;
    }
    prev_n = n;
    prev_f = f;
  }
  throw NoSolution("solve_disk: no radial root for R=" + std::to_string(radius) +
                   " m=" + std::to_string(m));
}

// Mode of a disk with a known thickness: ñ from the slab condition at the
// given wavelength. The radial condition is not enforced; radial_residual
// tells how far the disk is from resonance.
inline WgmMode mode_from_geometry(const DiskGeometry& geometry, double wavelength) {
  geometry.validate();
  const double k = core::vacuum_wavevector(wavelength);
  const double n_c = geometry.refractive_index;
  const double n_eff = slab_effective_index(k, geometry.thickness_or_throw(), n_c);
  WgmMode mode;
  mode.k = k;
  mode.n_eff = n_eff;
  mode.beta = k * std::sqrt(n_c * n_c - n_eff * n_eff);
  mode.geometry = geometry;
  const auto [hm, hm1] = specfun::hankel1_pair(geometry.azimuthal_number, k * geometry.radius);
  mode.radiative_ratio = std::abs((hm1 / hm).imag()) / std::abs(hm1 / hm);
  return mode;
}

// E_z(ρ, z, φ) = F(ρ)·Z(z)·exp(imφ), normalised so F(R) = 1.
//   F = J_m(kñρ)/J_m(kñR) for ρ <= R,  H_m(kρ)/H_m(kR) for ρ > R.
//   Z = cos(βz) for |z| <= h/2, cos(βh/2)·exp(−k sqrt(ñ²−1)(|z|−h/2)) beyond.
// The even standing wave in z is the fundamental slab branch.
class FieldProfile {
 public:
  explicit FieldProfile(WgmMode mode)
      : mode_(std::move(mode)),
        rim_interior_(specfun::bessel_j(mode_.m(), mode_.k * mode_.n_eff * mode_.radius())),
        rim_exterior_(specfun::hankel1(mode_.m(), mode_.k * mode_.radius())) {}

  const WgmMode& mode() const { return mode_; }

  double interior(double rho) const {
    return specfun::bessel_j(mode_.m(), mode_.k * mode_.n_eff * rho) / rim_interior_;
  }

  std::complex<double> exterior(double rho) const {
    return specfun::hankel1(mode_.m(), mode_.k * rho) / rim_exterior_;
  }

  std::complex<double> radial(double rho) const {
    if (rho < 0.0) throw DomainError("FieldProfile: rho >= 0 required");
    return rho <= mode_.radius() ? std::complex<double>(interior(rho)) : exterior(rho);
  }

  // Real standing-wave radial factor Re F(ρ), as used by the overlap integrals.
  double standing(double rho) const {
    if (rho <= mode_.radius()) return interior(rho);
    const int m = mode_.m();
    const double x = mode_.k * rho;
    const double j = specfun::detail::miller_j(m, x).m;
    const double y = specfun::detail::forward_y(m, x).m;
    const double jr = rim_exterior_.real(), yr = rim_exterior_.imag();
    return (j * jr + y * yr) / (jr * jr + yr * yr);
  }

  double axial(double z) const {
    const double half = mode_.thickness() / 2.0;
    const double az = std::abs(z);
    if (az <= half) return std::cos(mode_.beta * z);
    return std::cos(mode_.beta * half) * std::exp(-mode_.axial_decay() * (az - half));
  }

  // ∫ Z² dz over the slab interior |z| <= h/2.
  double axial_norm_interior() const {
    const double h = mode_.thickness();
    return h / 2.0 + std::sin(mode_.beta * h) / (2.0 * mode_.beta);
  }

  std::complex<double> operator()(double rho, double z, double phi) const {
    return radial(rho) * axial(z) *
           std::exp(std::complex<double>(0.0, mode_.m() * phi));
  }

 private:
  WgmMode mode_;
  double rim_interior_;
  std::complex<double> rim_exterior_;
};

inline std::complex<double> field_profile(const WgmMode& mode, double rho, double z, double phi) {
  return FieldProfile(mode)(rho, z, phi);
}

}  // namespace nvreg::wgm
