#pragma once

// Reference checks against the published design tables and the CZ protocol.
// Shared by `nvreg reproduce-tables` and the acceptance test binary.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nvreg/chain.hpp"
#include "nvreg/config.hpp"
#include "nvreg/dynamics.hpp"
#include "nvreg/reference_tables.hpp"
#include "nvreg/result_table.hpp"
#include "nvreg/specfun.hpp"
#include "nvreg/wgm.hpp"

namespace nvreg::acceptance {

inline constexpr int kCriteria = 9;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
  std::vector<std::string> details;

  std::string line() const {
    std::ostringstream o;
    o << (passed ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << measured << " | required "
      << expected << " [" << output::format_double(std::round(seconds * 1000.0) / 1000.0) << " s]";
    return o.str();
  }
};

// High-precision reference for J_m(x) and Y_m(x), independent of specfun.
struct BesselOracle {
  std::function<double(int, double)> j;
  std::function<double(int, double)> y;
};

namespace detail {

inline std::string fmt(double x, int digits = 4) {
  std::ostringstream o;
  o.precision(digits);
  o << x;
  return o.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

class Runner {
 public:
  Runner(config::Config cfg, BesselOracle oracle, unsigned threads = 1)
      : cfg_(std::move(cfg)), oracle_(std::move(oracle)), threads_(threads) {}

  CriterionResult run(int id) {
    detail::Stopwatch clock;
    CriterionResult r;
    switch (id) {
      case 1: r = thickness_table(); break;
      case 2: r = hopping_ratios(); break;
      case 3: r = log_linearity(); break;
      case 4: r = orderings(); break;
      case 5: r = cz_truth_table(clock); break;
      case 6: r = oracle_equivalence(); break;
      case 7: r = conservation(); break;
      case 8: r = special_functions(); break;
      case 9: r = normalisation(); break;
      default: throw DomainError("acceptance: no criterion " + std::to_string(id));
    }
    r.id = id;
    r.seconds = clock.seconds();
    return r;
  }

  std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) out.push_back(run(id));
    return out;
  }

 private:
  struct Column {
    int m;
    double radius;
    std::array<double, 6> published;
    std::vector<double> kappa;  // rad/s at kSpacingRatios
    std::vector<chain::SweepRow> rows;
  };

  double n_c() const { return cfg_.disk.refractive_index; }

  // The published Table 2/3 grid, computed once and shared by criteria 2-4.
  const std::vector<Column>& grid() {
    if (grid_) return *grid_;
    grid_.emplace();
    const std::vector<double> ratios(reference::kSpacingRatios.begin(), reference::kSpacingRatios.end());
    for (const auto& col : reference::kHopping) {
      std::vector<double> spacings;
      for (double q : ratios) spacings.push_back(q * col.radius);
      chain::OverlapOptions options;
      const auto sweep = chain::coupling_sweep({col.radius, std::nullopt, n_c(), col.m}, cfg_.wavelength, spacings,
                                               options, threads_);
      Column c{col.m, col.radius, col.kappa_mev, {}, sweep.rows};
      for (const auto& row : sweep.rows) c.kappa.push_back(row.result.kappa);
      grid_->push_back(std::move(c));
    }
    return *grid_;
  }

  const Column& column(int m, double radius) {
    for (const auto& c : grid()) {
      if (c.m == m && c.radius == radius) return c;
    }
    throw DomainError("acceptance: column not in grid");
  }

  CriterionResult thickness_table() {
    CriterionResult r;
    r.name = "disk thickness table";
    r.expected = "14 rows within max(5%, 0.005 um), < 10 s";
    detail::Stopwatch clock;
    int ok = 0;
    double worst = 0.0;
    for (const auto& row : reference::kDiskThickness) {
      const double band = std::max(0.05 * row.thickness, 0.005);
      std::string note = "m=" + std::to_string(row.m) + " R=" + detail::fmt(row.radius) + ": ";
      try {
        const double h = wgm::solve_disk(row.radius, row.m, cfg_.wavelength, n_c()).thickness();
        const bool good = std::abs(h - row.thickness) <= band;
        ok += good;
        worst = std::max(worst, std::abs(h - row.thickness) / row.thickness);
        note += "h=" + detail::fmt(h, 5) + " um (published " + detail::fmt(row.thickness) + ")" + (good ? "" : " OUT OF BAND");
      } catch (const NoSolution&) {
        note += "no solution";
      }
      r.details.push_back(note);
    }
    const double elapsed = clock.seconds();
    r.passed = ok == static_cast<int>(reference::kDiskThickness.size()) && elapsed < 10.0;
    r.measured = std::to_string(ok) + "/14 rows in band, worst relative deviation " + detail::fmt(worst, 3);
    return r;
  }

  CriterionResult hopping_ratios() {
    CriterionResult r;
    r.name = "hopping ratios and decay span";
    r.expected = "kappa(2.11)/kappa(2.21) within 30% and kappa(2.01)/kappa(2.49) within one decade of the tables, < 300 s";
    detail::Stopwatch clock;
    int ok = 0;
    double worst_ratio = 0.0, worst_span = 0.0;
    for (const auto& c : grid()) {
      const double ratio = c.kappa[1] / c.kappa[2];
      const double published_ratio = c.published[1] / c.published[2];
      const double span = c.kappa[0] / c.kappa[5];
      const double published_span = c.published[0] / c.published[5];
      const double ratio_dev = std::abs(ratio / published_ratio - 1.0);
      const double span_dev = std::abs(std::log10(span / published_span));
      const bool good = ratio_dev <= 0.3 && span_dev <= 1.0;
      ok += good;
      worst_ratio = std::max(worst_ratio, ratio_dev);
      worst_span = std::max(worst_span, span_dev);
      std::string absolute;
      for (std::size_t i = 0; i < c.kappa.size(); ++i) {
        absolute += (i ? " " : "") + detail::fmt(c.rows[i].result.kappa_table() / c.published[i], 3);
      }
      r.details.push_back("m=" + std::to_string(c.m) + " R=" + detail::fmt(c.radius) + ": ratio " + detail::fmt(ratio) +
                          " (published " + detail::fmt(published_ratio) + "), span " + detail::fmt(span, 3) +
                          " (published " + detail::fmt(published_span, 3) + "), computed/published in 1e-3 eV: " +
                          absolute);
    }
    r.passed = ok == static_cast<int>(grid().size()) && clock.seconds() < 300.0;
    r.measured = std::to_string(ok) + "/" + std::to_string(grid().size()) + " columns; worst ratio deviation " +
                 detail::fmt(worst_ratio, 3) + ", worst span deviation " + detail::fmt(worst_span, 3) + " decades";
    return r;
  }

  CriterionResult log_linearity() {
    CriterionResult r;
    r.name = "log-linear decay of kappa with L";
    r.expected = "R^2 > 0.99 and slope < 0 per column; |slope| decreasing with R at fixed m";
    int ok = 0;
    double worst_r2 = 1.0;
    std::map<int, std::vector<std::pair<double, double>>> slopes;
    for (const auto& c : grid()) {
      const auto fit = chain::log_linear_fit(c.rows);
      const bool good = fit.r_squared > 0.99 && fit.slope < 0.0;
      ok += good;
      worst_r2 = std::min(worst_r2, fit.r_squared);
      slopes[c.m].push_back({c.radius, fit.slope});
      r.details.push_back("m=" + std::to_string(c.m) + " R=" + detail::fmt(c.radius) + ": slope " +
                          detail::fmt(fit.slope) + " /um, R^2 " + detail::fmt(fit.r_squared, 5) + (good ? "" : " BELOW 0.99"));
    }
    bool ordered = true;
    for (auto& [m, list] : slopes) {
      std::sort(list.begin(), list.end());
      for (std::size_t i = 1; i < list.size(); ++i) ordered = ordered && std::abs(list[i].second) < std::abs(list[i - 1].second);
    }
    r.passed = ok == static_cast<int>(grid().size()) && ordered;
    r.measured = std::to_string(ok) + "/" + std::to_string(grid().size()) + " columns pass, min R^2 " +
                 detail::fmt(worst_r2, 5) + ", slope ordering " + (ordered ? "holds" : "violated");
    return r;
  }

  CriterionResult orderings() {
    CriterionResult r;
    r.name = "orderings in m and R";
    r.expected = "kappa(m=50) < kappa(m=40) at shared (R, L/R); kappa increasing in R at fixed L/R";
    int checks = 0, ok = 0;
    auto expect_less = [&](const Column& a, const Column& b, std::size_t i) {
      ++checks;
      const bool good = a.kappa[i] < b.kappa[i];
      ok += good;
      if (!good) {
        r.details.push_back("violated at L/R=" + detail::fmt(reference::kSpacingRatios[i]) + ": m=" + std::to_string(a.m) +
                            " R=" + detail::fmt(a.radius) + " vs m=" + std::to_string(b.m) + " R=" + detail::fmt(b.radius));
      }
    };
    for (std::size_t i = 0; i < reference::kSpacingRatios.size(); ++i) {
      for (double radius : {2.5, 3.0}) expect_less(column(50, radius), column(40, radius), i);
      expect_less(column(40, 2.0), column(40, 2.5), i);
      expect_less(column(40, 2.5), column(40, 3.0), i);
      expect_less(column(50, 2.5), column(50, 3.0), i);
      expect_less(column(50, 3.0), column(50, 3.5), i);
    }
    r.passed = ok == checks;
    r.measured = std::to_string(ok) + "/" + std::to_string(checks) + " pairwise orderings hold";
    return r;
  }

  dynamics::GateParams gate() const { return cfg_.gate; }

  CriterionResult cz_truth_table(const detail::Stopwatch& clock) {
    CriterionResult r;
    r.name = "controlled-Z truth table";
    const auto p = gate();
    r.expected = "phases (pi, pi, pi, 0) within " + detail::fmt(p.phase_tolerance) + " rad, population return and leakage < " +
                 detail::fmt(p.tolerance) + ", < 10 s";
    const auto table = dynamics::truth_table(p, {0}, threads_);
    bool ok = true;
    double worst_phase = 0.0, worst_leak = 0.0, worst_pop = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto& g = table[i];
      const double phase_error = g.phase_error[i] ? std::abs(*g.phase_error[i]) : std::numbers::pi;
      const bool good = phase_error < p.phase_tolerance && g.population_error < p.tolerance && g.leakage < p.tolerance;
      ok = ok && good;
      worst_phase = std::max(worst_phase, phase_error);
      worst_leak = std::max(worst_leak, g.leakage);
      worst_pop = std::max(worst_pop, g.population_error);
      r.details.push_back(std::string("|") + dynamics::kLogicalLabels[i] + ">: phase " +
                          (g.final_phase[i] ? detail::fmt(*g.final_phase[i], 6) : std::string("undefined")) +
                          " rad, leakage " + detail::fmt(g.leakage, 3) + ", population error " +
                          detail::fmt(g.population_error, 3));
    }
    const double elapsed = clock.seconds();
    r.passed = ok && elapsed < 10.0;
    r.measured = "max phase error " + detail::fmt(worst_phase, 3) + " rad, max leakage " + detail::fmt(worst_leak, 3) +
                 ", max population error " + detail::fmt(worst_pop, 3);
    return r;
  }

  CriterionResult oracle_equivalence() {
    using namespace dynamics;
    CriterionResult r;
    r.name = "integrator vs exact propagators";
    const auto p = gate();
    const double g_over_delta = std::max(p.g1, p.g2) / p.delta_max;
    const double dispersive_bound = 4.0 * g_over_delta * g_over_delta;
    r.expected = "segment deviation < 1e-6; resonant blocks vs rotation matrix < 1e-6; parked blocks vs Stark phase < " +
                 detail::fmt(dispersive_bound, 3);
    const auto schedule = make_cz_schedule(p);
    double segment = 0.0;
    for (int i = 0; i < 4; ++i) segment = std::max(segment, max_segment_deviation(RegisterState::basis(i), schedule, p));
    segment = std::max(segment, max_segment_deviation(RegisterState::logical({0.5, 0.5, 0.5, 0.5}), schedule, p));

    // Closed two-level blocks: {|g1+2,1>, |e1+2,0>} feels only qubit 1 and
    // {|+1g2,1>, |+1e2,0>} only qubit 2. Integrate each constant segment from
    // both block basis states and compare with the closed forms.
    const double h_max = max_step(p, 1.0 / 20.0);
    double resonant = 0.0, dispersive = 0.0;
    const std::array<std::array<int, 2>, 2> blocks{{{1, 6}, {2, 7}}};
    const auto edges = schedule.edges();
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      const double a = edges[s], b = edges[s + 1], tau = b - a;
      const Matrix8 h = rotating_hamiltonian(0.5 * (a + b), p, schedule);
      for (int k = 0; k < 2; ++k) {
        const double g = k == 0 ? p.g1 : p.g2;
        const double delta = schedule.detuning(k, 0.5 * (a + b));
        Matrix2 numeric;
        for (int col = 0; col < 2; ++col) {
          long steps = 0;
          const Vector8 out = dynamics::detail::propagate_interval(RegisterState::basis(blocks[k][col]).c, h, tau, h_max, steps);
          numeric(0, col) = out(blocks[k][0]);
          numeric(1, col) = out(blocks[k][1]);
        }
        if (delta == 0.0) {
          resonant = std::max(resonant, (numeric - propagator_resonant(g * tau)).cwiseAbs().maxCoeff());
        } else {
          // Diagonal of Eq. (4); |e,0> also carries the bare detuning phase.
          const Matrix2 u = propagator_dispersive(stark_angle(g, delta, tau));
          dispersive = std::max(dispersive, std::abs(numeric(0, 0) - u(0, 0)));
          dispersive = std::max(dispersive, std::abs(numeric(1, 1) * std::polar(1.0, -delta * tau) - u(1, 1)));
        }
      }
    }
    r.passed = segment < 1e-6 && resonant < 1e-6 && dispersive < dispersive_bound;
    r.measured = "segment " + detail::fmt(segment, 3) + ", resonant " + detail::fmt(resonant, 3) + ", dispersive " +
                 detail::fmt(dispersive, 3);
    return r;
  }

  CriterionResult conservation() {
    using namespace dynamics;
    CriterionResult r;
    r.name = "conservation along the gate";
    r.expected = "norm and excitation drift < 1e-9, |+1+2,1> population flat to 1e-12";
    const auto p = gate();
    const auto initial = RegisterState::logical({0.5, cd(0.0, 0.5), -0.5, cd(0.3, 0.4)});
    const auto result = evolve(initial, make_cz_schedule(p), p, {4001});
    double norm = 0.0, excitation = 0.0, flat = 0.0;
    const double p11 = initial.population(3);
    for (const auto& point : result.trajectory) {
      norm = std::max(norm, std::abs(point.state.norm() - 1.0));
      excitation = std::max(excitation, std::abs(point.state.excitation_number() - 1.0));
      flat = std::max(flat, std::abs(point.state.population(3) - p11));
    }
    r.passed = norm < 1e-9 && excitation < 1e-9 && flat < 1e-12;
    r.measured = "norm drift " + detail::fmt(norm, 3) + ", excitation drift " + detail::fmt(excitation, 3) +
                 ", |+1+2,1> drift " + detail::fmt(flat, 3) + " over " + std::to_string(result.trajectory.size()) + " samples";
    return r;
  }

  CriterionResult special_functions() {
    CriterionResult r;
    r.name = "Bessel identities and spot values";
    r.expected = "Wronskian and recurrences to 1e-9 relative on m in {0,10,40,50}, x in [1,100]; spot values to 1e-10 relative";
    double wronskian = 0.0, recurrence = 0.0;
    for (int m : {0, 10, 40, 50}) {
      for (int step = 0; step <= 396; ++step) {
        const double x = 1.0 + 0.25 * step;
        const auto j = specfun::bessel_j_pair(m, x);
        const auto y = specfun::bessel_y_pair(m, x);
        const double w = 2.0 / (std::numbers::pi * x);
        wronskian = std::max(wronskian, std::abs(j.m_plus_1 * y.m - j.m * y.m_plus_1 - w) / w);
        const int n = std::max(m, 1);
        auto check = [&](double below, double here, double above) {
          const double scale = std::max({std::abs(below), std::abs(above), std::abs(2.0 * n / x * here)});
          recurrence = std::max(recurrence, std::abs(below + above - 2.0 * n / x * here) / scale);
        };
        check(specfun::bessel_j(n - 1, x), specfun::bessel_j(n, x), specfun::bessel_j(n + 1, x));
        check(specfun::bessel_y(n - 1, x), specfun::bessel_y(n, x), specfun::bessel_y(n + 1, x));
      }
    }
    double spot = 0.0;
    const std::array<std::pair<int, double>, 10> points{
        {{0, 1.0}, {1, 2.5}, {10, 10.0}, {10, 37.3}, {40, 30.0}, {40, 55.5}, {50, 45.0}, {50, 71.2}, {40, 99.0}, {0, 17.5}}};
    for (const auto& [m, x] : points) {
      const double jr = oracle_.j(m, x), yr = oracle_.y(m, x);
      spot = std::max(spot, std::abs(specfun::bessel_j(m, x) - jr) / std::abs(jr));
      spot = std::max(spot, std::abs(specfun::bessel_y(m, x) - yr) / std::abs(yr));
    }
    r.passed = wronskian < 1e-9 && recurrence < 1e-9 && spot < 1e-10;
    r.measured = "Wronskian " + detail::fmt(wronskian, 3) + ", recurrence " + detail::fmt(recurrence, 3) + ", spot " +
                 detail::fmt(spot, 3);
    return r;
  }

  CriterionResult normalisation() {
    CriterionResult r;
    r.name = "field normalisation invariance";
    r.expected = "kappa, Omega(K) and Delta alpha/beta0 unchanged to 1e-10 relative under field scaling";
    double worst = 0.0;
    for (auto [m, radius, ratio] : {std::tuple{40, 2.0, 2.21}, std::tuple{50, 3.0, 2.11}}) {
      const auto mode = wgm::solve_disk(radius, m, cfg_.wavelength, n_c());
      const auto base = chain::coupling(mode, ratio * radius);
      for (double scale : {1e-3, 3.7, 250.0}) {
        chain::OverlapOptions options;
        options.field_scale = scale;
        const auto scaled = chain::coupling(mode, ratio * radius, options);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
        worst = std::max(worst, rel(base.kappa, scaled.kappa));
        worst = std::max(worst, rel(base.integrals.delta_alpha / base.integrals.beta0,
                                    scaled.integrals.delta_alpha / scaled.integrals.beta0));
        for (double q : {0.0, 0.7, std::numbers::pi / 2, std::numbers::pi}) {
          worst = std::max(worst, rel(chain::dispersion(base.omega, base.integrals, q),
                                      chain::dispersion(scaled.omega, scaled.integrals, q)));
        }
      }
    }
    r.details.push_back("gate: parameterised by g directly; no disk-field input, so field scaling cannot reach it");
    r.passed = worst < 1e-10;
    r.measured = "max relative change " + detail::fmt(worst, 3);
    return r;
  }

  config::Config cfg_;
  BesselOracle oracle_;
  unsigned threads_;
  std::optional<std::vector<Column>> grid_;
};

}  // namespace nvreg::acceptance
