#pragma once

// Two NV centres sharing one cavity photon, single-excitation sector.
//
// Basis order:
//   0 |g1 g2,1>  1 |g1 +2,1>  2 |+1 g2,1>  3 |+1 +2,1>
//   4 |e1 g2,0>  5 |g1 e2,0>  6 |e1 +2,0>  7 |+1 e2,0>
// Each qubit is |g> (couples to the photon), |+> (spectator, logical 1) or
// |e> (optically excited). Detunings δ_k = ω_w − ω_{a,k}(t) are 0 inside a
// qubit's pulse window and δ_max outside it.
//
// Amplitudes are stored in the frame of H_ref = ω_w·N + D_g·Σ_k |+_k><+_k|,
// where N counts excitations (photon or |e>). H_ref commutes with H, so the
// rotating-frame Hamiltonian is H − H_ref: −δ_k(t) on the |e_k> states plus the
// couplings g_k. The phase of |+1 +2,1> is then identically zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvreg/core.hpp"
#include "nvreg/parallel.hpp"

namespace nvreg::dynamics {

using cd = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix8 = Eigen::Matrix<cd, 8, 8>;
using Vector8 = Eigen::Matrix<cd, 8, 1>;

inline constexpr int kDim = 8;
inline constexpr std::array<const char*, kDim> kBasisLabels{
    "g1g2,1", "g1+2,1", "+1g2,1", "+1+2,1", "e1g2,0", "g1e2,0", "e1+2,0", "+1e2,0"};
inline constexpr std::array<const char*, 4> kLogicalLabels{"00", "01", "10", "11"};
inline constexpr double kPhaseFloor = 1e-6;
inline constexpr double kNormTolerance = 1e-9;

struct Coupling {
  int ground;   // photon-carrying state
  int excited;  // state with qubit `qubit` in |e>
  int qubit;
};
inline constexpr std::array<Coupling, 4> kCouplings{{{0, 4, 0}, {1, 6, 0}, {0, 5, 1}, {2, 7, 1}}};

// Qubit k is excited in these states.
inline constexpr std::array<std::array<int, 2>, 2> kExcited{{{4, 6}, {5, 7}}};
// Qubit k is in |+> in these states.
inline constexpr std::array<std::array<int, 3>, 2> kPlus{{{2, 3, 7}, {1, 3, 6}}};

struct NvParams {
  double omega_a0 = core::PhysicalConstants::zpl_angular_frequency;  // rad/s
  double g = 0.0;                                                     // rad/s
  double zero_field = core::zero_field_splitting_rad_s();             // rad/s
  double delta_max = 0.0;                                             // rad/s

  double omega_w() const { return omega_a0 + delta_max; }

  void validate(const std::string& coupling_field) const {
    if (!(omega_a0 > 0.0)) throw ConfigError("omega_a0", "omega_a0 > 0 required");
    if (!(g > 0.0)) throw ConfigError(coupling_field, "g > 0 required");
    if (!(g / omega_w() < 1e-3)) throw ConfigError(coupling_field, "|g|/omega_w < 1e-3 required (rotating-wave regime)");
    if (!(delta_max >= 10.0 * g)) throw ConfigError("delta_max", "delta_max >= 10 g required");
  }
};

struct GateParams {
  double omega_a0 = core::PhysicalConstants::zpl_angular_frequency;
  double g1 = 1.0e10;
  double g2 = 0.9e10;
  double delta_max = 1.0e12;
  double zero_field = core::zero_field_splitting_rad_s();
  double tolerance = 1e-2;        // gate error and leakage
  double phase_tolerance = 0.05;  // rad
  double guard_gap = 0.0;         // units of T1
  bool sync_parking = true;
  double control_area = std::numbers::pi / 2.0;  // g1·T1
  double target_area = std::numbers::pi;         // g2·T2

  NvParams qubit(int k) const { return {omega_a0, k == 0 ? g1 : g2, zero_field, delta_max}; }
  double omega_w() const { return omega_a0 + delta_max; }

  void validate() const {
    qubit(0).validate("g1");
    qubit(1).validate("g2");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance", "tolerance > 0 required");
    if (!(phase_tolerance > 0.0)) throw ConfigError("phase_tolerance", "phase_tolerance > 0 required");
    if (!(guard_gap >= 0.0)) throw ConfigError("guard_gap", "guard_gap >= 0 required");
    if (!(control_area > 0.0)) throw ConfigError("control_area", "control_area > 0 required");
    if (!(target_area > 0.0)) throw ConfigError("target_area", "target_area > 0 required");
  }
};

// ---------------------------------------------------------------------------
// Two-level propagators in the {|g,1>, |e,0>} basis.

struct TwoLevelState {
  cd ground{1.0, 0.0};
  cd excited{0.0, 0.0};
  double norm() const { return std::sqrt(std::norm(ground) + std::norm(excited)); }
};

inline Matrix2 propagator_resonant(double theta) {
  const cd c(std::cos(theta), 0.0), s(0.0, -std::sin(theta));
  Matrix2 u;
  u << c, s, s, c;
  return u;
}

inline Matrix2 propagator_dispersive(double theta) {
  Matrix2 u = Matrix2::Zero();
  u(0, 0) = std::polar(1.0, theta);
  u(1, 1) = std::polar(1.0, -theta);
  return u;
}

// Angle for propagator_dispersive after time t at detuning δ = ω_w − ω_a.
// The dispersive shift pushes |g,1> up by g²/δ, so the angle is −g²t/δ.
inline double stark_angle(double g, double delta, double t) {
  if (!(std::abs(delta) >= 10.0 * std::abs(g))) throw DomainError("stark_angle: |delta| >= 10|g| required");
  return -g * g * t / delta;
}

inline TwoLevelState apply_two_level(const Matrix2& u, const TwoLevelState& s) {
  return {u(0, 0) * s.ground + u(0, 1) * s.excited, u(1, 0) * s.ground + u(1, 1) * s.excited};
}

// ---------------------------------------------------------------------------
// Pulses.

struct DetuningPulse {
  int qubit = 0;
  double t_on = 0.0;
  double t_off = 0.0;
  bool contains(double t) const { return t >= t_on && t < t_off; }
};

struct PulseSchedule {
  std::vector<DetuningPulse> pulses;
  double t_end = 0.0;
  double delta_max = 0.0;

  void validate() const {
    if (!(t_end > 0.0)) throw ConfigError("schedule", "t_end > 0 required");
    for (std::size_t i = 0; i < pulses.size(); ++i) {
      const auto& p = pulses[i];
      if (p.qubit < 0 || p.qubit > 1) throw ConfigError("schedule", "pulse qubit must be 0 or 1");
      if (!(p.t_off > p.t_on)) throw ConfigError("schedule", "t_off > t_on required");
      if (p.t_on < 0.0 || p.t_off > t_end) throw ConfigError("schedule", "pulse outside [0, t_end]");
      for (std::size_t j = 0; j < i; ++j) {
        const auto& q = pulses[j];
        if (q.qubit == p.qubit && p.t_on < q.t_off && q.t_on < p.t_off) {
          throw ConfigError("schedule", "pulses on the same qubit overlap");
        }
      }
    }
  }

  // δ_k(t) with half-open windows [t_on, t_off).
  double detuning(int qubit, double t) const {
    for (const auto& p : pulses) {
      if (p.qubit == qubit && p.contains(t)) return 0.0;
    }
    return delta_max;
  }

  std::vector<double> edges() const {
    std::vector<double> out{0.0, t_end};
    for (const auto& p : pulses) {
      out.push_back(p.t_on);
      out.push_back(p.t_off);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct CzTiming {
  double t1 = 0.0;    // control pulse
  double t2 = 0.0;    // target pulse
  double gap = 0.0;   // guard gap
  double park = 0.0;  // control qubit parked between its two pulses
};

inline CzTiming cz_timing(const GateParams& p) {
  CzTiming t;
  t.t1 = p.control_area / p.g1;
  t.t2 = p.target_area / p.g2;
  t.gap = p.guard_gap * t.t1;
  t.park = t.t2 + 2.0 * t.gap;
  if (p.sync_parking) {
    // While parked, |e1,0> runs at the Stark-shifted −(δ + g²/δ) relative to
    // |g1,1>; round the window up to whole periods of that beat.
    const double beat = p.delta_max + p.g1 * p.g1 / p.delta_max;
    const double periods = std::ceil(beat * t.park / (2.0 * std::numbers::pi) - 1e-9);
    t.park = 2.0 * std::numbers::pi * periods / beat;
  }
  return t;
}

// Control π/2, target π, control π/2. The target pulse is centred in the
// control qubit's parked window.
inline PulseSchedule make_cz_schedule(const GateParams& p) {
  p.validate();
  const CzTiming t = cz_timing(p);
  PulseSchedule s;
  s.delta_max = p.delta_max;
  const double target_on = t.t1 + 0.5 * (t.park - t.t2);
  s.pulses = {{0, 0.0, t.t1}, {1, target_on, target_on + t.t2}, {0, t.t1 + t.park, 2.0 * t.t1 + t.park}};
  s.t_end = 2.0 * t.t1 + t.park;
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Register state and Hamiltonians.

struct RegisterState {
  Vector8 c = Vector8::Zero();

  static RegisterState basis(int i) {
    RegisterState s;
    s.c(i) = 1.0;
    return s;
  }
  // Amplitudes on |g1g2,1>, |g1+2,1>, |+1g2,1>, |+1+2,1>.
  static RegisterState logical(const std::array<cd, 4>& a) {
    RegisterState s;
    for (int i = 0; i < 4; ++i) s.c(i) = a[i];
    return s;
  }

  double norm() const { return c.norm(); }
  double population(int i) const { return std::norm(c(i)); }
  double aux_population() const { return c.tail<4>().squaredNorm(); }
  // Photon number plus excited-state populations; every basis state carries
  // exactly one excitation.
  double excitation_number() const { return c.head<4>().squaredNorm() + c.tail<4>().squaredNorm(); }
  double plus_population(int qubit) const {
    double sum = 0.0;
    for (int i : kPlus[qubit]) sum += population(i);
    return sum;
  }
};

inline Matrix8 rotating_hamiltonian(double t, const GateParams& p, const PulseSchedule& s) {
  Matrix8 h = Matrix8::Zero();
  for (int k = 0; k < 2; ++k) {
    for (int i : kExcited[k]) h(i, i) = -s.detuning(k, t);
  }
  for (const auto& c : kCouplings) {
    const double g = c.qubit == 0 ? p.g1 : p.g2;
    h(c.ground, c.excited) = g;
    h(c.excited, c.ground) = g;
  }
  return h;
}

// H_ref = ω_w·N + D_g·(number of qubits in |+>).
inline Matrix8 reference_hamiltonian(const GateParams& p) {
  Matrix8 h = Matrix8::Zero();
  for (int i = 0; i < kDim; ++i) h(i, i) = p.omega_w();
  for (int k = 0; k < 2; ++k) {
    for (int i : kPlus[k]) h(i, i) += p.zero_field;
  }
  return h;
}

// Lab-frame Hamiltonian: ω_w a†a + Σ_k ω_{a,k}(t)|e_k><e_k| + D_g|+_k><+_k| +
// g_k(a|e_k><g_k| + h.c.), in the 8-state basis.
inline Matrix8 build_hamiltonian(double t, const GateParams& p, const PulseSchedule& s) {
  Matrix8 h = Matrix8::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = p.omega_w();
  for (int k = 0; k < 2; ++k) {
    for (int i : kExcited[k]) h(i, i) = p.omega_w() - s.detuning(k, t);
  }
  for (int k = 0; k < 2; ++k) {
    for (int i : kPlus[k]) h(i, i) += p.zero_field;
  }
  for (const auto& c : kCouplings) {
    const double g = c.qubit == 0 ? p.g1 : p.g2;
    h(c.ground, c.excited) = g;
    h(c.excited, c.ground) = g;
  }
  return h;
}

// exp(−iHt) for constant Hermitian H.
inline Matrix8 exact_propagator(const Matrix8& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix8> eig(h);
  Eigen::Matrix<cd, 8, 1> phases;
  for (int i = 0; i < kDim; ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Time evolution.

struct EvolveOptions {
  int sample_points = 401;        // including both ends; 0 or 1 keeps only the final state
  double step_fraction = 1.0 / 20.0;
  bool check_step_halving = true;
  double halving_tolerance = 1e-8;
};

struct TrajectoryPoint {
  double t = 0.0;
  RegisterState state;
  std::array<double, 2> detuning{};
};

struct EvolveResult {
  std::vector<TrajectoryPoint> trajectory;
  RegisterState final_state;
  double step = 0.0;
  long steps = 0;
  double halving_change = 0.0;  // max |Δc| against the half-step run
};

inline double max_step(const GateParams& p, double fraction) {
  return std::min(1.0 / (100.0 * std::max(p.g1, p.g2)), 1.0 / (10.0 * p.delta_max)) * fraction;
}

namespace detail {

// Classical RK4 for ψ' = −iHψ with H constant over the step; for a linear
// autonomous system the four stages collapse to the degree-4 Taylor
// polynomial of exp(−iHh), applied once per step.
inline Matrix8 rk4_step_matrix(const Matrix8& h, double step) {
  const Matrix8 a = cd(0.0, -step) * h;
  const Matrix8 a2 = a * a;
  const Matrix8 a3 = a2 * a;
  return Matrix8::Identity() + a + a2 / 2.0 + a3 / 6.0 + a3 * a / 24.0;
}

inline Vector8 propagate_interval(const Vector8& psi, const Matrix8& h, double duration, double h_max,
                                  long& steps) {
  if (duration <= 0.0) return psi;
  const long n = static_cast<long>(std::ceil(duration / h_max - 1e-9));
  const Matrix8 m = rk4_step_matrix(h, duration / n);
  Vector8 out = psi;
  for (long i = 0; i < n; ++i) out = m * out;
  steps += n;
  return out;
}

inline std::vector<double> sample_times(double t_end, int points) {
  std::vector<double> out;
  if (points < 2) return out;
  for (int i = 0; i < points; ++i) out.push_back(t_end * i / (points - 1));
  out.back() = t_end;
  return out;
}

inline EvolveResult run_rk4(const RegisterState& initial, const PulseSchedule& s, const GateParams& p,
                            double fraction, int sample_points) {
  EvolveResult r;
  r.step = max_step(p, fraction);
  const auto samples = sample_times(s.t_end, sample_points);
  std::vector<double> breaks = s.edges();
  breaks.insert(breaks.end(), samples.begin(), samples.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto record = [&](double t, const Vector8& psi) {
    r.trajectory.push_back({t, RegisterState{psi}, {s.detuning(0, t), s.detuning(1, t)}});
  };
  Vector8 psi = initial.c;
  std::size_t next_sample = 0;
  if (!samples.empty()) {
    record(0.0, psi);
    next_sample = 1;
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const Matrix8 h = rotating_hamiltonian(0.5 * (a + b), p, s);
    psi = propagate_interval(psi, h, b - a, r.step, r.steps);
    if (next_sample < samples.size() && b == samples[next_sample]) {
      record(b, psi);
      ++next_sample;
    }
  }
  r.final_state.c = psi;
  return r;
}

}  // namespace detail

inline EvolveResult evolve(const RegisterState& initial, const PulseSchedule& schedule, const GateParams& params,
                           const EvolveOptions& options = {}) {
  schedule.validate();
  if (std::abs(initial.norm() - 1.0) > kNormTolerance) throw DomainError("evolve: initial state must be normalised");
  EvolveResult r = detail::run_rk4(initial, schedule, params, options.step_fraction, options.sample_points);
  if (options.check_step_halving) {
    const auto half = detail::run_rk4(initial, schedule, params, options.step_fraction / 2.0, 0);
    r.halving_change = (half.final_state.c - r.final_state.c).cwiseAbs().maxCoeff();
    if (r.halving_change > options.halving_tolerance) {
      throw ConvergenceError("evolve: step halving changed amplitudes by " + std::to_string(r.halving_change));
    }
  }
  return r;
}

// Piecewise-exact evolution: one matrix exponential per constant segment.
inline RegisterState evolve_exact(const RegisterState& initial, const PulseSchedule& s, const GateParams& p) {
  const auto edges = s.edges();
  Vector8 psi = initial.c;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    psi = exact_propagator(rotating_hamiltonian(0.5 * (a + b), p, s), b - a) * psi;
  }
  return {psi};
}

// Largest amplitude difference between the integrator and the exact
// propagator over each constant-detuning segment, both started from the
// exact state at the segment's start.
inline double max_segment_deviation(const RegisterState& initial, const PulseSchedule& s, const GateParams& p,
                                    double fraction = 1.0 / 20.0) {
  const auto edges = s.edges();
  const double h_max = max_step(p, fraction);
  Vector8 psi = initial.c;
  double worst = 0.0;
  long steps = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const Matrix8 h = rotating_hamiltonian(0.5 * (a + b), p, s);
    const Vector8 exact = exact_propagator(h, b - a) * psi;
    const Vector8 numeric = detail::propagate_interval(psi, h, b - a, h_max, steps);
    worst = std::max(worst, (exact - numeric).cwiseAbs().maxCoeff());
    psi = exact;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Phases and the controlled-Z gate.

using PhaseSample = std::array<std::optional<double>, 4>;

// Unwrapped arg(c_i) of the four logical amplitudes along a trajectory.
// Samples with |c_i| below kPhaseFloor are gaps; unwrapping resumes from the
// last defined value.
inline std::vector<PhaseSample> extract_phases(const std::vector<TrajectoryPoint>& trajectory) {
  std::vector<PhaseSample> out;
  out.reserve(trajectory.size());
  std::array<std::optional<double>, 4> last;
  for (const auto& point : trajectory) {
    PhaseSample sample;
    for (int i = 0; i < 4; ++i) {
      const cd c = point.state.c(i);
      if (std::abs(c) < kPhaseFloor) continue;
      double phase = std::arg(c);
      if (last[i]) {
        phase += 2.0 * std::numbers::pi * std::round((*last[i] - phase) / (2.0 * std::numbers::pi));
      }
      sample[i] = phase;
      last[i] = phase;
    }
    out.push_back(sample);
  }
  return out;
}

inline double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x <= -std::numbers::pi ? x + 2.0 * std::numbers::pi : x;
}

inline constexpr std::array<double, 4> kCzSigns{-1.0, -1.0, -1.0, 1.0};

struct GateReport {
  RegisterState initial;
  RegisterState final_state;
  RegisterState ideal;
  EvolveResult evolution;
  std::vector<PhaseSample> phases;
  PhaseSample final_phase;  // arg(c_final / c_initial), gaps where the input amplitude vanishes
  PhaseSample phase_error;  // against the ideal sign, wrapped to (−π, π]
  double fidelity = 0.0;    // |<ideal|final>|²
  double leakage = 0.0;     // auxiliary-state population at the end
  double population_error = 0.0;
  double max_phase_error = 0.0;
  bool passed = false;
  std::string diagnostics;

  double gate_error() const { return 1.0 - fidelity; }
};

inline GateReport run_cz(const RegisterState& initial, const GateParams& params, const EvolveOptions& options = {}) {
  if (initial.aux_population() > 0.0) throw DomainError("run_cz: initial state must lie in the logical subspace");
  const PulseSchedule schedule = make_cz_schedule(params);
  GateReport r;
  r.initial = initial;
  r.evolution = evolve(initial, schedule, params, options);
  r.final_state = r.evolution.final_state;
  for (int i = 0; i < 4; ++i) r.ideal.c(i) = kCzSigns[i] * initial.c(i);
  r.phases = extract_phases(r.evolution.trajectory);
  r.fidelity = std::norm(r.ideal.c.dot(r.final_state.c));
  r.leakage = r.final_state.aux_population();
  for (int i = 0; i < 4; ++i) {
    r.population_error = std::max(r.population_error, std::abs(r.final_state.population(i) - initial.population(i)));
    if (std::abs(initial.c(i)) < kPhaseFloor || std::abs(r.final_state.c(i)) < kPhaseFloor) continue;
    r.final_phase[i] = std::arg(r.final_state.c(i) / initial.c(i));
    r.phase_error[i] = wrap_phase(*r.final_phase[i] - std::arg(kCzSigns[i]));
    r.max_phase_error = std::max(r.max_phase_error, std::abs(*r.phase_error[i]));
  }
  std::string why;
  if (r.gate_error() >= params.tolerance) why += "gate error " + std::to_string(r.gate_error()) + " >= tolerance; ";
  if (r.leakage >= params.tolerance) why += "auxiliary leakage " + std::to_string(r.leakage) + " >= tolerance; ";
  if (r.population_error >= params.tolerance) why += "logical population error " + std::to_string(r.population_error) + " >= tolerance; ";
  if (r.max_phase_error >= params.phase_tolerance) why += "phase error " + std::to_string(r.max_phase_error) + " rad >= phase tolerance; ";
  r.passed = why.empty();
  r.diagnostics = why.empty() ? "ok" : why.substr(0, why.size() - 2);
  return r;
}

// One run per logical basis state.
inline std::array<GateReport, 4> truth_table(const GateParams& params, const EvolveOptions& options = {},
                                             unsigned threads = 1) {
  std::array<GateReport, 4> out;
  parallel_for(4, threads, [&](std::size_t i) { out[i] = run_cz(RegisterState::basis(static_cast<int>(i)), params, options); });
  return out;
}

}  // namespace nvreg::dynamics
