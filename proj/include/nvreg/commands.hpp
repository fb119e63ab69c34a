#pragma once

// The five CLI commands as library functions returning report tables.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nvreg/acceptance.hpp"
#include "nvreg/chain.hpp"
#include "nvreg/config.hpp"
#include "nvreg/dynamics.hpp"
#include "nvreg/reference_tables.hpp"
#include "nvreg/result_table.hpp"
#include "nvreg/wgm.hpp"

namespace nvreg::commands {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kAcceptance = 3 };

struct RunOptions {
  std::optional<double> tolerance;  // quadrature tolerance, or gate error tolerance for gate-sim
  unsigned threads = 1;
};

struct CommandResult {
  output::Report report;
  int exit_code = kOk;
  std::vector<std::string> messages;  // human-readable summary for stderr
};

namespace detail {

using output::Cell;
using output::format_double;

inline output::Report start(const std::string& command, const config::Config& cfg) {
  output::Report r;
  r.command = command;
  r.config_ini = config::to_ini(cfg);
  return r;
}

inline std::optional<double> published_thickness(int m, double radius) {
  for (const auto& row : reference::kDiskThickness) {
    if (row.m == m && row.radius == radius) return row.thickness;
  }
  return std::nullopt;
}

inline Cell optional_cell(const std::optional<double>& x) {
  return x ? Cell{*x} : Cell{};
}

inline chain::OverlapOptions overlap_options(const RunOptions& options) {
  chain::OverlapOptions o;
  if (options.tolerance) o.tolerance = *options.tolerance;
  return o;
}

}  // namespace detail

inline CommandResult disk_solve(const config::Config& cfg, const RunOptions& = {}) {
  using detail::Cell;
  CommandResult out;
  out.report = detail::start("disk-solve", cfg);
  output::ResultTable t;
  t.name = "disk_solve";
  t.metadata = {{"wavelength_um", detail::format_double(cfg.wavelength)},
                {"refractive_index", detail::format_double(cfg.disk.refractive_index)}};
  t.columns = {"m", "R_um", "n_eff", "h_um", "beta_per_um", "radial_residual", "radiative_ratio", "h_published_um", "status"};
  int failures = 0;
  for (const auto& row : cfg.rows) {
    const auto published = detail::published_thickness(row.m, row.radius);
    try {
      const auto mode = wgm::solve_disk(row.radius, row.m, cfg.wavelength, cfg.disk.refractive_index);
      const double residual = wgm::radial_residual(row.m, mode.k, mode.n_eff, row.radius).real();
      t.add_row({Cell{static_cast<long long>(row.m)}, row.radius, mode.n_eff, mode.thickness(), mode.beta, residual,
                 mode.radiative_ratio, detail::optional_cell(published), std::string("ok")});
    } catch (const NoSolution&) {
      ++failures;
      t.add_row({Cell{static_cast<long long>(row.m)}, row.radius, {}, {}, {}, {}, {}, detail::optional_cell(published),
                 std::string("no solution")});
    }
  }
  out.report.tables.push_back(std::move(t));
  out.messages.push_back(std::to_string(cfg.rows.size() - failures) + " of " + std::to_string(cfg.rows.size()) +
                         " disks solved");
  return out;
}

inline CommandResult coupling_sweep(const config::Config& cfg, const RunOptions& options = {}) {
  using detail::Cell;
  CommandResult out;
  out.report = detail::start("coupling-sweep", cfg);
  const auto overlap = detail::overlap_options(options);
  out.report.metadata = {{"quadrature_tolerance", detail::format_double(overlap.tolerance)},
                         {"kappa_table_unit", "1e-3 eV (inferred unit of the published hopping tables)"}};

  output::ResultTable rows;
  rows.name = "coupling_sweep";
  rows.columns = {"m", "R_um", "L_over_R", "L_um", "kappa_rad_s", "kappa_eV", "kappa_table", "log10_kappa_over_E0",
                  "max_overlap_ratio", "quadrature_level", "status"};
  output::ResultTable fits;
  fits.name = "log_linear_fit";
  fits.columns = {"m", "R_um", "slope_per_um", "intercept", "r_squared", "monotone_decreasing"};

  int warnings = 0, failures = 0;
  for (const auto& col : cfg.columns) {
    wgm::WgmMode mode;
    try {
      mode = wgm::solve_disk(col.radius, col.m, cfg.wavelength, cfg.disk.refractive_index);
    } catch (const NoSolution&) {
      ++failures;
      for (double q : cfg.ratios) {
        rows.add_row({Cell{static_cast<long long>(col.m)}, col.radius, q, q * col.radius, {}, {}, {}, {}, {}, {},
                      std::string("no disk solution")});
      }
      continue;
    }
    struct Slot {
      std::optional<chain::CouplingResult> result;
      std::string error;
    };
    std::vector<Slot> slots(cfg.ratios.size());
    parallel_for(cfg.ratios.size(), options.threads, [&](std::size_t i) {
      try {
        slots[i].result = chain::coupling(mode, cfg.ratios[i] * col.radius, overlap);
      } catch (const ConvergenceError& e) {
        slots[i].error = e.what();
      }
    });
    std::vector<chain::SweepRow> good;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const double q = cfg.ratios[i];
      if (!slots[i].result) {
        ++failures;
        rows.add_row({Cell{static_cast<long long>(col.m)}, col.radius, q, q * col.radius, {}, {}, {}, {}, {}, {},
                      "quadrature failure: " + slots[i].error});
        continue;
      }
      const auto& r = *slots[i].result;
      const bool warn = r.validity_warning();
      warnings += warn;
      const double log_rel = std::log10(std::abs(r.kappa) / r.omega);
      rows.add_row({Cell{static_cast<long long>(col.m)}, col.radius, q, q * col.radius, r.kappa, r.kappa_ev,
                    r.kappa_table(), log_rel, r.integrals.max_ratio(), Cell{static_cast<long long>(r.quadrature_level)},
                    std::string(warn ? "tight-binding validity warning" : "ok")});
      good.push_back({q * col.radius, q, r, log_rel});
    }
    if (good.size() >= 2) {
      const auto fit = chain::log_linear_fit(good);
      bool monotone = true;
      auto sorted = good;
      std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.spacing < b.spacing; });
      for (std::size_t i = 1; i < sorted.size(); ++i) {
        monotone = monotone && std::abs(sorted[i].result.kappa) < std::abs(sorted[i - 1].result.kappa);
      }
      fits.add_row({Cell{static_cast<long long>(col.m)}, col.radius, fit.slope, fit.intercept, fit.r_squared,
                    std::string(monotone ? "true" : "false")});
    }
  }
  out.report.tables.push_back(std::move(rows));
  if (!fits.rows.empty()) out.report.tables.push_back(std::move(fits));
  if (warnings) out.messages.push_back(std::to_string(warnings) + " sweep point(s) carry a tight-binding validity warning");
  if (failures) {
    out.messages.push_back(std::to_string(failures) + " sweep point(s) failed");
    out.exit_code = kNumerical;
  }
  return out;
}

inline CommandResult dispersion(const config::Config& cfg, const RunOptions& options = {}) {
  CommandResult out;
  out.report = detail::start("dispersion", cfg);
  const auto mode = chain::resolve_mode(cfg.disk, cfg.wavelength);
  const double L = cfg.chain.spacing;
  const auto c = chain::coupling(mode, L, detail::overlap_options(options));
  out.report.metadata = {{"h_um", detail::format_double(mode.thickness())},
                         {"n_eff", detail::format_double(mode.n_eff)},
                         {"L_um", detail::format_double(L)},
                         {"omega_rad_s", detail::format_double(c.omega)},
                         {"kappa_rad_s", detail::format_double(c.kappa)},
                         {"kappa_eV", detail::format_double(c.kappa_ev)},
                         {"beta0", detail::format_double(c.integrals.beta0)},
                         {"beta1", detail::format_double(c.integrals.beta1)},
                         {"alpha1", detail::format_double(c.integrals.alpha1)},
                         {"delta_alpha", detail::format_double(c.integrals.delta_alpha)},
                         {"zeta", detail::format_double(c.integrals.zeta)},
                         {"validity", c.validity_warning() ? "tight-binding validity warning" : "ok"}};
  output::ResultTable band;
  band.name = "dispersion";
  band.columns = {"KL", "Omega_rad_s", "Omega_minus_omega_rad_s", "Omega_minus_omega_eV"};
  const int n = cfg.bloch_points;
  for (int i = 0; i < n; ++i) {
    const double q = -std::numbers::pi + 2.0 * std::numbers::pi * i / (n - 1);
    const double qq = i == n - 1 ? std::numbers::pi : q;
    const double omega = chain::dispersion(c.omega, c.integrals, qq);
    band.add_row({qq, omega, omega - c.omega, core::signed_freq_to_energy(omega - c.omega)});
  }
  out.report.tables.push_back(std::move(band));

  // Bloch field around the rim of the central disk at the configured KL.
  output::ResultTable rim;
  rim.name = "rim_field";
  rim.metadata = {{"KL", detail::format_double(cfg.chain.bloch_phase)}};
  rim.columns = {"phi", "re_E", "im_E", "abs_E"};
  const double radius = mode.radius();
  constexpr int kRimSamples = 720;
  for (int i = 0; i < kRimSamples; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / kRimSamples;
    const auto e = chain::chain_field(mode, L, cfg.chain.bloch_phase, radius * std::cos(phi), radius * std::sin(phi), 0.0);
    rim.add_row({phi, e.real(), e.imag(), std::abs(e)});
  }
  out.report.tables.push_back(std::move(rim));
  out.messages.push_back("kappa = " + detail::format_double(c.kappa) + " rad/s, band width " +
                         detail::format_double(2.0 * std::abs(c.kappa)) + " rad/s");
  return out;
}

inline CommandResult gate_sim(const config::Config& cfg, const RunOptions& options = {}) {
  using detail::Cell;
  using namespace dynamics;
  CommandResult out;
  GateParams params = cfg.gate;
  if (options.tolerance) params.tolerance = *options.tolerance;
  params.validate();
  out.report = detail::start("gate-sim", cfg);
  const auto timing = cz_timing(params);
  out.report.metadata = {{"time_unit", "1/omega_a0 = " + detail::format_double(1.0 / params.omega_a0) + " s"},
                         {"frame", "rotating at omega_w on photon and excitations, D_g removed from |+> states"},
                         {"T1_s", detail::format_double(timing.t1)},
                         {"T2_s", detail::format_double(timing.t2)},
                         {"parked_window_s", detail::format_double(timing.park)},
                         {"gate_tolerance", detail::format_double(params.tolerance)},
                         {"phase_tolerance", detail::format_double(params.phase_tolerance)}};

  const auto a = cfg.initial_state();
  const auto initial = RegisterState::logical({a[0], a[1], a[2], a[3]});
  const auto run = run_cz(initial, params, {cfg.sample_points});
  output::ResultTable traj;
  traj.name = "trajectory";
  traj.metadata = {{"step_s", detail::format_double(run.evolution.step)},
                   {"steps", std::to_string(run.evolution.steps)},
                   {"step_halving_change", detail::format_double(run.evolution.halving_change)},
                   {"fidelity", detail::format_double(run.fidelity)},
                   {"leakage", detail::format_double(run.leakage)},
                   {"diagnostics", run.diagnostics}};
  traj.columns = {"t", "p00", "p01", "p10", "p11", "p_aux", "phase00", "phase01", "phase10", "phase11",
                  "delta_c_rad_s", "delta_t_rad_s"};
  for (std::size_t i = 0; i < run.evolution.trajectory.size(); ++i) {
    const auto& point = run.evolution.trajectory[i];
    const auto& phase = run.phases[i];
    std::vector<Cell> row{point.t * params.omega_a0};
    for (int k = 0; k < 4; ++k) row.push_back(point.state.population(k));
    row.push_back(point.state.aux_population());
    for (int k = 0; k < 4; ++k) row.push_back(detail::optional_cell(phase[k]));
    row.push_back(point.detuning[0]);
    row.push_back(point.detuning[1]);
    traj.add_row(std::move(row));
  }
  out.report.tables.push_back(std::move(traj));

  output::ResultTable truth;
  truth.name = "truth_table";
  truth.columns = {"state", "phase", "phase_error", "population_error", "leakage", "fidelity", "status"};
  const auto table = truth_table(params, {0}, options.threads);
  bool ok = run.passed;
  for (int i = 0; i < 4; ++i) {
    const auto& g = table[i];
    ok = ok && g.passed;
    truth.add_row({std::string(kLogicalLabels[i]), detail::optional_cell(g.final_phase[i]),
                   detail::optional_cell(g.phase_error[i]), g.population_error, g.leakage, g.fidelity, g.diagnostics});
    out.messages.push_back(std::string("|") + kLogicalLabels[i] + ">: " + g.diagnostics);
  }
  out.report.tables.push_back(std::move(truth));
  if (!run.passed) out.messages.push_back("configured initial state: " + run.diagnostics);
  if (!ok) {
    out.exit_code = kNumerical;
    out.messages.push_back("gate failure");
  }
  return out;
}

inline CommandResult reproduce_tables(const config::Config& cfg, const acceptance::BesselOracle& oracle,
                                      const RunOptions& options = {}) {
  using detail::Cell;
  CommandResult out;
  out.report = detail::start("reproduce-tables", cfg);
  acceptance::Runner runner(cfg, oracle, options.threads);
  output::ResultTable summary;
  summary.name = "acceptance";
  summary.columns = {"criterion", "name", "result", "measured", "required"};
  output::ResultTable details;
  details.name = "details";
  details.columns = {"criterion", "detail"};
  bool all = true;
  for (const auto& r : runner.run_all()) {
    all = all && r.passed;
    out.messages.push_back(r.line());
    summary.add_row({Cell{static_cast<long long>(r.id)}, r.name, std::string(r.passed ? "PASS" : "FAIL"), r.measured,
                     r.expected});
    for (const auto& d : r.details) details.add_row({Cell{static_cast<long long>(r.id)}, d});
  }
  out.report.tables.push_back(std::move(summary));
  out.report.tables.push_back(std::move(details));
  if (!all) out.exit_code = kAcceptance;
  return out;
}

}  // namespace nvreg::commands
