#pragma once

// Tight-binding description of a straight chain of identical microdisks.
//
// Fields are the real standing-wave modes E = Re F(ρ)·cos(mφ)·Z(z) of each
// disk, rigidly translated to the disk centres (pL, 0). With E0 the mode of
// the disk at the origin and E1 that of its neighbour, and all integrals taken
// over the interior cylinder of one disk (the index contrast vanishes
// elsewhere):
//
//   N00 = ∫_disk0 E0²     I0 = ∫_disk0 E0·E1     D1 = ∫_disk1 E0²
//   I1  = ∫_disk1 E0·E1
//   β₀ = n_c²·N00         β₁ = I0 + n_c²·I1      α₁ = n_c²·(I0 + I1)
//   Δα = 2(n_c² − 1)·D1   ζ  = α₁ − β₁ = (n_c² − 1)·I0
//
// Δα counts the disks at ±L. Reflection through the midplane x = L/2 maps
// disk 1 onto disk 0 and swaps E0 and E1 (each picks up (−1)^m), so I1 = I0
// and D1 = ∫_disk0 E1²; every transverse integral is therefore evaluated on
// disk 0 alone. The axial factor is the same slab integral for all terms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "nvreg/core.hpp"
#include "nvreg/parallel.hpp"
#include "nvreg/quadrature.hpp"
#include "nvreg/wgm.hpp"

namespace nvreg::chain {

inline constexpr double kValidityRatio = 0.1;

struct ChainGeometry {
  wgm::DiskGeometry disk;
  double spacing = 0.0;      // L, um
  double bloch_phase = 0.0;  // KL, rad

  void validate() const {
    disk.validate();
    if (!(spacing >= 2.0 * disk.radius)) throw ConfigError("spacing", "L >= 2R required (disks may not overlap)");
    if (!(std::abs(bloch_phase) <= std::numbers::pi)) throw ConfigError("bloch_phase", "KL must lie in [-pi, pi]");
  }
};

struct OverlapIntegrals {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double alpha1 = 0.0;
  double delta_alpha = 0.0;
  double zeta = 0.0;

  double max_ratio() const {
    return std::max({std::abs(alpha1), std::abs(beta1), std::abs(delta_alpha)}) / beta0;
  }
  bool within_validity() const { return max_ratio() <= kValidityRatio; }
};

struct OverlapOptions {
  double tolerance = 1e-4;  // relative change between successive refinements
  int max_level = 3;
  double field_scale = 1.0;
};

struct OverlapReport {
  OverlapIntegrals integrals;
  int level = 0;              // refinement level that met the tolerance
  double relative_change = 0.0;
};

namespace detail {

struct TransverseSums {
  double self = 0.0;       // ∫ E0²
  double cross = 0.0;      // ∫ E0·E1
  double neighbour = 0.0;  // ∫ E1²
};

// Polar Gauss-Legendre over disk 0; the integrand is even in y so φ runs over
// [0, π] and the result is doubled.
inline TransverseSums transverse_sums(const wgm::FieldProfile& field, double spacing, int level,
                                      double scale) {
  const int m = field.mode().m();
  const double radius = field.mode().radius();
  const int scale_up = 1 << level;
  const auto rho_nodes = quadrature::composite_gauss(0.0, radius, 8 * scale_up);
  const auto phi_nodes = quadrature::composite_gauss(0.0, std::numbers::pi, m * scale_up);

  std::vector<double> cos_m_phi(phi_nodes.size());
  for (std::size_t j = 0; j < phi_nodes.size(); ++j) cos_m_phi[j] = std::cos(m * phi_nodes[j].x);

  TransverseSums sums;
  for (const auto& r : rho_nodes) {
    const double f0 = scale * field.interior(r.x);
    for (std::size_t j = 0; j < phi_nodes.size(); ++j) {
      const double x = r.x * std::cos(phi_nodes[j].x);
      const double y = r.x * std::sin(phi_nodes[j].x);
      const double dx = x - spacing;
      const double rho1 = std::hypot(dx, y);
      const double e0 = f0 * cos_m_phi[j];
      const double e1 = scale * field.standing(rho1) * std::cos(m * std::atan2(y, dx));
      const double w = 2.0 * r.w * phi_nodes[j].w * r.x;
      sums.self += w * e0 * e0;
      sums.cross += w * e0 * e1;
      sums.neighbour += w * e1 * e1;
    }
  }
  return sums;
}

inline OverlapIntegrals assemble(const TransverseSums& s, double n_c, double axial) {
  const double n2 = n_c * n_c;
  OverlapIntegrals out;
  out.beta0 = n2 * s.self * axial;
  out.beta1 = (1.0 + n2) * s.cross * axial;
  out.alpha1 = 2.0 * n2 * s.cross * axial;
  out.delta_alpha = 2.0 * (n2 - 1.0) * s.neighbour * axial;
  out.zeta = out.alpha1 - out.beta1;
  return out;
}

inline double relative_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace detail

// Nearest-neighbour overlap integrals for a neighbour at signed displacement L
// along x. Refines until every integral moves by less than options.tolerance.
inline OverlapReport overlap_report(const wgm::WgmMode& mode, double spacing,
                                    const OverlapOptions& options = {}) {
  if (!(std::abs(spacing) >= 2.0 * mode.radius())) throw DomainError("overlap_integrals: |L| >= 2R required");
  if (!(options.tolerance > 0.0)) throw DomainError("overlap_integrals: tolerance > 0 required");
  const wgm::FieldProfile field(mode);
  const double axial = field.axial_norm_interior();
  // The integrals are even in L (mirror x -> -x), so only |L| is used.
  const double distance = std::abs(spacing);

  auto previous = detail::transverse_sums(field, distance, 0, options.field_scale);
  double change = 0.0;
  for (int level = 1; level <= options.max_level; ++level) {
    const auto current = detail::transverse_sums(field, distance, level, options.field_scale);
    change = std::max({detail::relative_change(current.self, previous.self),
                       detail::relative_change(current.cross, previous.cross),
                       detail::relative_change(current.neighbour, previous.neighbour)});
    if (change < options.tolerance) {
      return {detail::assemble(current, mode.index(), axial), level, change};
    }
    previous = current;
  }
  throw ConvergenceError("overlap_integrals: relative change " + std::to_string(change) +
                         " above tolerance at refinement cap");
}

inline OverlapIntegrals overlap_integrals(const wgm::WgmMode& mode, double spacing,
                                          const OverlapOptions& options = {}) {
  return overlap_report(mode, spacing, options).integrals;
}

// κ = ζ·ω/β₀ in rad/s.
inline double coupling_kappa(const OverlapIntegrals& integrals, double omega) {
  if (!(integrals.beta0 > 0.0)) throw DomainError("coupling_kappa: beta0 > 0 required");
  return integrals.zeta * omega / integrals.beta0;
}

inline double dispersion(double omega, const OverlapIntegrals& integrals, double bloch_phase) {
  if (!(std::abs(bloch_phase) <= std::numbers::pi * (1.0 + 1e-12))) {
    throw DomainError("dispersion: KL must lie in [-pi, pi]");
  }
  if (!(integrals.beta0 > 0.0)) throw DomainError("dispersion: beta0 > 0 required");
  return omega * (1.0 - integrals.delta_alpha / (2.0 * integrals.beta0) -
                  integrals.zeta / integrals.beta0 * std::cos(bloch_phase));
}

struct CouplingResult {
  OverlapIntegrals integrals;
  double omega = 0.0;      // single-disk mode frequency, rad/s
  double kappa = 0.0;      // rad/s
  double kappa_ev = 0.0;
  int quadrature_level = 0;

  double kappa_table() const { return kappa_ev * 1e3; }  // units of 1e-3 eV
  bool validity_warning() const { return !integrals.within_validity(); }
};

inline CouplingResult coupling(const wgm::WgmMode& mode, double spacing, const OverlapOptions& options = {}) {
  const auto report = overlap_report(mode, spacing, options);
  CouplingResult out;
  out.integrals = report.integrals;
  out.omega = mode.k * core::PhysicalConstants::speed_of_light;
  out.kappa = coupling_kappa(report.integrals, out.omega);
  out.kappa_ev = core::signed_freq_to_energy(out.kappa);
  out.quadrature_level = report.level;
  return out;
}

// E_Ω(r) = Σ_p exp(iKLp)·E_ω(r − pL eₓ). With no explicit truncation, P grows
// until both boundary terms fall below 1e-3 of the largest term.
inline std::complex<double> chain_field(const wgm::WgmMode& mode, double spacing, double bloch_phase,
                                        double x, double y, double z,
                                        std::optional<int> truncation = std::nullopt) {
  if (!(spacing >= 2.0 * mode.radius())) throw DomainError("chain_field: L >= 2R required");
  if (truncation && *truncation < 0) throw DomainError("chain_field: P >= 0 required");
  const wgm::FieldProfile field(mode);
  auto term = [&](int p) {
    const double dx = x - p * spacing;
    return std::polar(1.0, bloch_phase * p) * field(std::hypot(dx, y), z, std::atan2(y, dx));
  };
  std::complex<double> sum = term(0);
  double peak = std::abs(sum);
  constexpr int kCap = 100000;
  const int limit = truncation.value_or(kCap);
  for (int p = 1; p <= limit; ++p) {
    if (mode.k * (std::abs(x) + p * spacing) >= specfun::kMaxArgument) {
      throw ConvergenceError("chain_field: truncation needs disks beyond the field evaluation range");
    }
    const auto plus = term(p);
    const auto minus = term(-p);
    sum += plus + minus;
    peak = std::max({peak, std::abs(plus), std::abs(minus)});
    if (!truncation && std::max(std::abs(plus), std::abs(minus)) < 1e-3 * peak) return sum;
  }
  if (!truncation) throw ConvergenceError("chain_field: truncation did not converge");
  return sum;
}

struct SweepRow {
  double spacing = 0.0;  // um
  double ratio = 0.0;    // L/R
  CouplingResult result;
  double log10_relative = 0.0;  // log10(κ/ω), i.e. κ over the photon energy
};

struct SweepResult {
  wgm::WgmMode mode;
  std::vector<SweepRow> rows;
  bool monotone_decreasing = true;  // κ strictly decreasing with L
};

inline wgm::WgmMode resolve_mode(const wgm::DiskGeometry& disk, double wavelength) {
  if (disk.thickness) return wgm::mode_from_geometry(disk, wavelength);
  return wgm::solve_disk(disk.radius, disk.azimuthal_number, wavelength, disk.refractive_index);
}

inline SweepResult coupling_sweep(const wgm::DiskGeometry& disk, double wavelength,
                                  const std::vector<double>& spacings, const OverlapOptions& options = {},
                                  unsigned threads = 1) {
  disk.validate();
  for (double L : spacings) {
    if (!(L >= 2.0 * disk.radius)) throw ConfigError("spacing", "L >= 2R required for every sweep point");
  }
  SweepResult out;
  out.mode = resolve_mode(disk, wavelength);
  out.rows.resize(spacings.size());
  parallel_for(spacings.size(), threads, [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    row.spacing = spacings[i];
    row.ratio = spacings[i] / disk.radius;
    row.result = coupling(out.mode, spacings[i], options);
    row.log10_relative = std::log10(std::abs(row.result.kappa) / row.result.omega);
  });
  std::vector<const SweepRow*> sorted;
  for (const auto& row : out.rows) sorted.push_back(&row);
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->spacing < b->spacing; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(std::abs(sorted[i]->result.kappa) < std::abs(sorted[i - 1]->result.kappa))) {
      out.monotone_decreasing = false;
    }
  }
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares fit of log10|κ| against L.
inline LineFit log_linear_fit(const std::vector<SweepRow>& rows) {
  if (rows.size() < 2) throw DomainError("log_linear_fit: at least two rows required");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    const double x = row.spacing, y = std::log10(std::abs(row.result.kappa));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
  LineFit fit;
  fit.slope = cxy / cxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = cyy == 0.0 ? 1.0 : cxy * cxy / (cxx * cyy);
  return fit;
}

}  // namespace nvreg::chain
