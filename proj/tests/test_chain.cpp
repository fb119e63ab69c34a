#include "nvreg/chain.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "nvreg/reference_tables.hpp"
#include "oracles.hpp"

using namespace nvreg;
using namespace nvreg::chain;

namespace {

constexpr double kLambda = 0.637;
constexpr double kIndex = 2.4;
constexpr double kPi = std::numbers::pi;

const wgm::WgmMode& mode_of(int m, double radius) {
  static std::map<std::pair<int, double>, wgm::WgmMode> cache;
  auto it = cache.find({m, radius});
  if (it == cache.end()) it = cache.emplace(std::pair{m, radius}, wgm::solve_disk(radius, m, kLambda, kIndex)).first;
  return it->second;
}

// Iterated Cartesian Gauss-Legendre over the disk centred at (cx, 0): x panels
// across the diameter, y panels between the chord ends. Independent of the
// polar scheme in the library. Returns ∫ f(x, y) dA.
template <typename F>
double cartesian_disk_integral(double cx, double radius, int panels, F&& f) {
  double total = 0.0;
  for (const auto& nx : quadrature::composite_gauss(-radius, radius, panels)) {
    const double half = std::sqrt(std::max(0.0, radius * radius - nx.x * nx.x));
    for (const auto& ny : quadrature::composite_gauss(-half, half, panels)) {
      total += nx.w * ny.w * f(cx + nx.x, ny.x);
    }
  }
  return total;
}

// Standing-wave field of a disk centred at (cx, 0), evaluated independently
// of FieldProfile::standing via the complex Hankel branch.
double standing_field(const wgm::FieldProfile& field, double cx, double x, double y) {
  const double dx = x - cx;
  const double rho = std::hypot(dx, y);
  return field.radial(rho).real() * std::cos(field.mode().m() * std::atan2(y, dx));
}

struct OracleIntegrals {
  double self, cross_here, cross_there, neighbour;
};

// Neighbour at signed displacement L; integrals over both disk interiors.
OracleIntegrals oracle_integrals(const wgm::WgmMode& mode, double L, int panels) {
  const double R = mode.radius();
  const wgm::FieldProfile field(mode);
  auto e0 = [&](double x, double y) { return standing_field(field, 0.0, x, y); };
  auto e1 = [&](double x, double y) { return standing_field(field, L, x, y); };
  OracleIntegrals out;
  out.self = cartesian_disk_integral(0.0, R, panels, [&](double x, double y) { return e0(x, y) * e0(x, y); });
  out.cross_here = cartesian_disk_integral(0.0, R, panels, [&](double x, double y) { return e0(x, y) * e1(x, y); });
  out.cross_there = cartesian_disk_integral(L, R, panels, [&](double x, double y) { return e0(x, y) * e1(x, y); });
  out.neighbour = cartesian_disk_integral(L, R, panels, [&](double x, double y) { return e0(x, y) * e0(x, y); });
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(chain, overlap_integrals_match_cartesian_oracle) {
  const auto& mode = mode_of(40, 2.0);
  const double L = 2.21 * 2.0;
  const double n2 = kIndex * kIndex;
  const double axial = wgm::FieldProfile(mode).axial_norm_interior();
  const auto lib = overlap_integrals(mode, L);
  for (double signed_L : {L, -L}) {
    const auto o = oracle_integrals(mode, signed_L, 96);
    EXPECT_LT(rel(lib.beta0, n2 * o.self * axial), 1e-4) << signed_L;
    EXPECT_LT(rel(lib.alpha1, n2 * (o.cross_here + o.cross_there) * axial), 1e-3) << signed_L;
    EXPECT_LT(rel(lib.beta1, (o.cross_here + n2 * o.cross_there) * axial), 1e-3) << signed_L;
    EXPECT_LT(rel(lib.delta_alpha, 2.0 * (n2 - 1.0) * o.neighbour * axial), 1e-3) << signed_L;
    EXPECT_LT(rel(lib.zeta, (n2 - 1.0) * o.cross_here * axial), 1e-3) << signed_L;
  }
}

TEST(chain, integrals_symmetric_in_displacement_sign) {
  const auto& mode = mode_of(50, 3.0);
  for (double ratio : {2.01, 2.3}) {
    const auto plus = overlap_integrals(mode, ratio * 3.0);
    const auto minus = overlap_integrals(mode, -ratio * 3.0);
    EXPECT_LT(rel(plus.alpha1, minus.alpha1), 1e-12);
    EXPECT_LT(rel(plus.beta1, minus.beta1), 1e-12);
    EXPECT_LT(rel(plus.delta_alpha, minus.delta_alpha), 1e-12);
  }
}

TEST(chain, overlap_vanishes_at_large_separation) {
  const auto& mode = mode_of(40, 2.0);
  const auto near = coupling(mode, 2.01 * 2.0);
  const auto far = coupling(mode, 6.0 * 2.0);
  EXPECT_LT(std::abs(far.kappa) / far.omega, 1e-12);
  EXPECT_LT(std::abs(far.integrals.alpha1) / far.integrals.beta0, 1e-12);
  EXPECT_LT(std::abs(far.integrals.delta_alpha) / far.integrals.beta0, 1e-12);
  EXPECT_GT(std::abs(near.kappa), 1e6 * std::abs(far.kappa));
}

TEST(chain, kappa_is_proportional_to_zeta) {
  OverlapIntegrals o;
  o.beta0 = 3.0;
  EXPECT_EQ(coupling_kappa(o, 2.95e15), 0.0);
  o.zeta = o.beta0 * 1e-5;
  EXPECT_NEAR(coupling_kappa(o, 2.95e15), 2.95e10, 1e-3);
  o.beta0 = 0.0;
  EXPECT_THROW(coupling_kappa(o, 2.95e15), DomainError);
}

TEST(chain, adjacent_row_ratio_matches_table) {
  const auto& mode = mode_of(40, 2.0);
  const double ratio = coupling(mode, 2.11 * 2.0).kappa / coupling(mode, 2.21 * 2.0).kappa;
  const double published = 0.19195095 / 8.4024303e-3;
  EXPECT_NEAR(published, 22.8, 0.05);
  EXPECT_NEAR(ratio / published, 1.0, 0.3);
}

TEST(chain, dispersion_band_properties) {
  const auto result = coupling(mode_of(40, 3.0), 2.2 * 3.0);
  const auto& o = result.integrals;
  const double w = result.omega;
  EXPECT_DOUBLE_EQ(dispersion(w, o, kPi / 2), w * (1.0 - o.delta_alpha / (2.0 * o.beta0)));
  const double width = dispersion(w, o, kPi) - dispersion(w, o, 0.0);
  EXPECT_NEAR(width, 2.0 * result.kappa, 1e-6 * std::abs(result.kappa));
  EXPECT_NEAR(dispersion(w, o, 0.0) - dispersion(w, o, kPi), -2.0 * w * o.zeta / o.beta0,
              1e-6 * std::abs(result.kappa));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> kl(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const double q = kl(rng);
    EXPECT_DOUBLE_EQ(dispersion(w, o, q), dispersion(w, o, -q));
    EXPECT_LE(std::abs(dispersion(w, o, q) - dispersion(w, o, kPi / 2)), std::abs(result.kappa) * (1 + 1e-9));
  }
  EXPECT_THROW(dispersion(w, o, 3.2), DomainError);
}

TEST(chain, validity_ratios_small_on_table_grid) {
  for (const auto& column : reference::kHopping) {
    const auto& mode = mode_of(column.m, column.radius);
    for (double ratio : reference::kSpacingRatios) {
      const auto o = overlap_integrals(mode, ratio * column.radius);
      EXPECT_GT(o.beta0, 0.0);
      EXPECT_LT(o.max_ratio(), kValidityRatio) << column.m << " " << column.radius << " " << ratio;
      EXPECT_TRUE(o.within_validity());
    }
  }
}

TEST(chain, kappa_invariant_under_field_normalisation) {
  const auto& mode = mode_of(40, 2.5);
  OverlapOptions scaled;
  scaled.field_scale = 3.7;
  const auto a = coupling(mode, 2.11 * 2.5);
  const auto b = coupling(mode, 2.11 * 2.5, scaled);
  EXPECT_NEAR(b.integrals.beta0 / a.integrals.beta0, 3.7 * 3.7, 1e-9);
  EXPECT_LT(rel(a.kappa, b.kappa), 1e-12);
}

TEST(chain, quadrature_converged_under_doubling) {
  const auto& mode = mode_of(50, 2.5);
  OverlapOptions tight;
  tight.tolerance = 1e-9;
  tight.max_level = 4;
  for (double ratio : {2.01, 2.49}) {
    const auto fine = overlap_report(mode, ratio * 2.5, tight);
    const auto coarse = overlap_report(mode, ratio * 2.5);
    EXPECT_LT(rel(fine.integrals.zeta, coarse.integrals.zeta), 5e-3);
    EXPECT_LT(rel(fine.integrals.delta_alpha, coarse.integrals.delta_alpha), 5e-3);
    EXPECT_LT(coarse.relative_change, 1e-4);
  }
  OverlapOptions capped;
  capped.tolerance = 1e-300;
  capped.max_level = 1;
  EXPECT_THROW(overlap_report(mode, 2.2 * 2.5, capped), ConvergenceError);
}

TEST(chain, orderings_across_table_columns) {
  std::map<std::pair<int, double>, std::vector<double>> kappa;
  for (const auto& column : reference::kHopping) {
    std::vector<double> spacings;
    for (double ratio : reference::kSpacingRatios) spacings.push_back(ratio * column.radius);
    const auto sweep = coupling_sweep({column.radius, std::nullopt, kIndex, column.m}, kLambda, spacings);
    EXPECT_TRUE(sweep.monotone_decreasing);
    for (const auto& row : sweep.rows) kappa[{column.m, column.radius}].push_back(row.result.kappa);
  }
  for (std::size_t i = 0; i < reference::kSpacingRatios.size(); ++i) {
    // Weaker for the higher azimuthal order at the same (R, L/R).
    for (double radius : {2.5, 3.0}) EXPECT_LT((kappa[{50, radius}][i]), (kappa[{40, radius}][i])) << radius << " " << i;
    // Stronger for larger disks at fixed L/R.
    EXPECT_LT((kappa[{40, 2.0}][i]), (kappa[{40, 2.5}][i])) << i;
    EXPECT_LT((kappa[{40, 2.5}][i]), (kappa[{40, 3.0}][i])) << i;
    EXPECT_LT((kappa[{50, 2.5}][i]), (kappa[{50, 3.0}][i])) << i;
    EXPECT_LT((kappa[{50, 3.0}][i]), (kappa[{50, 3.5}][i])) << i;
  }
}

TEST(chain, sweep_spans_table_orders_of_magnitude) {
  for (auto [m, radius, published] : {std::tuple{40, 2.0, 5.4162318 / 3.5948418e-6},
                                      std::tuple{50, 2.5, 3.7089467 / 7.0305704e-8}}) {
    std::vector<double> spacings;
    for (double ratio : reference::kSpacingRatios) spacings.push_back(ratio * radius);
    const auto sweep = coupling_sweep({radius, std::nullopt, kIndex, m}, kLambda, spacings);
    const double span = sweep.rows.front().result.kappa / sweep.rows.back().result.kappa;
    EXPECT_NEAR(std::log10(span), std::log10(published), 0.5) << m;
    for (const auto& row : sweep.rows) {
      EXPECT_NEAR(row.log10_relative, std::log10(row.result.kappa / row.result.omega), 1e-12);
      EXPECT_NEAR(row.result.kappa_table(), row.result.kappa_ev * 1e3, 1e-18);
    }
  }
}

TEST(chain, sweep_is_thread_count_independent) {
  std::vector<double> spacings{4.2, 4.02, 4.6, 4.4};
  const wgm::DiskGeometry disk{2.0, std::nullopt, kIndex, 40};
  const auto serial = coupling_sweep(disk, kLambda, spacings, {}, 1);
  const auto threaded = coupling_sweep(disk, kLambda, spacings, {}, 3);
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    EXPECT_EQ(serial.rows[i].spacing, spacings[i]);
    EXPECT_EQ(serial.rows[i].result.kappa, threaded.rows[i].result.kappa);
  }
  EXPECT_TRUE(serial.monotone_decreasing);
  EXPECT_THROW(coupling_sweep(disk, kLambda, {3.9}), ConfigError);
}

TEST(chain, log_linear_fit_matches_oracle) {
  std::vector<double> spacings;
  for (double ratio : reference::kSpacingRatios) spacings.push_back(ratio * 2.5);
  const auto sweep = coupling_sweep({2.5, std::nullopt, kIndex, 50}, kLambda, spacings);
  std::vector<double> x, y;
  for (const auto& row : sweep.rows) {
    x.push_back(row.spacing);
    y.push_back(std::log10(row.result.kappa));
  }
  const auto expected = oracle::linear_fit(x.data(), y.data(), static_cast<int>(x.size()));
  const auto fit = log_linear_fit(sweep.rows);
  EXPECT_NEAR(fit.slope, expected.slope, 1e-9 * std::abs(expected.slope));
  EXPECT_NEAR(fit.r_squared, expected.r2, 1e-9);
  EXPECT_LT(fit.slope, 0.0);
}

TEST(chain, rejects_overlapping_disks) {
  const auto& mode = mode_of(40, 2.0);
  EXPECT_THROW(overlap_integrals(mode, 3.99), DomainError);
  EXPECT_THROW(chain_field(mode, 3.0, 0.0, 0.0, 0.0, 0.0), DomainError);
  ChainGeometry g{{2.0, std::nullopt, kIndex, 40}, 3.9, 0.0};
  EXPECT_THROW(g.validate(), ConfigError);
  g.spacing = 4.0;
  EXPECT_NO_THROW(g.validate());
  g.bloch_phase = 4.0;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(chain, single_disk_limit_of_chain_field) {
  const auto& mode = mode_of(40, 3.0);
  for (auto [x, y, z] : {std::tuple{2.9, 0.4, 0.0}, std::tuple{-1.0, 2.2, 0.03}, std::tuple{4.0, -0.5, 0.1}}) {
    const auto chain = chain_field(mode, 6.6, 0.7, x, y, z, 0);
    const auto single = wgm::field_profile(mode, std::hypot(x, y), z, std::atan2(y, x));
    EXPECT_EQ(chain, single);
  }
}

TEST(chain, zone_centre_field_is_periodic) {
  const auto& mode = mode_of(40, 3.0);
  const double L = 2.2 * 3.0;
  for (auto [x, y] : {std::pair{2.95, 0.3}, std::pair{0.4, -2.9}, std::pair{2.9, 0.6}}) {
    const auto here = chain_field(mode, L, 0.0, x, y, 0.0);
    const auto next = chain_field(mode, L, 0.0, x + L, y, 0.0);
    EXPECT_LT(std::abs(here - next), 1e-3 * std::abs(here)) << x << " " << y;
  }
  // In the gap the local field is weak and the radiating tails of distant
  // disks never drop below 1e-3 of it inside the evaluation range.
  EXPECT_THROW(chain_field(mode, L, 0.0, 3.3, 0.0, 0.0), ConvergenceError);
}

TEST(chain, rim_shows_m_antinodes_in_bloch_landscape) {
  const auto& mode = mode_of(40, 3.0);
  const double L = 2.2 * 3.0;
  const double q = 17.0 * kPi / 40.0;
  const int samples = 4000;
  std::vector<double> values(samples);
  for (int i = 0; i < samples; ++i) {
    const double phi = 2.0 * kPi * i / samples;
    values[i] = chain_field(mode, L, q, 3.0 * std::cos(phi), 3.0 * std::sin(phi), 0.0).real();
  }
  int maxima = 0;
  for (int i = 0; i < samples; ++i) {
    const double prev = values[(i + samples - 1) % samples], next = values[(i + 1) % samples];
    if (values[i] > prev && values[i] >= next) ++maxima;
  }
  EXPECT_EQ(maxima, 40);
}
