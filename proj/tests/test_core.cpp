#include "nvreg/core.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace nvreg::core;
using C = PhysicalConstants;

TEST(core, zero_frequency_is_zero_energy) { EXPECT_EQ(freq_to_energy(0.0), 0.0); }

TEST(core, zpl_wavelength_energy) {
  const double omega = wavelength_to_freq(C::zpl_wavelength);
  EXPECT_NEAR(freq_to_energy(omega), 1.946, 5e-4);
  EXPECT_NEAR(freq_to_energy(C::zpl_angular_frequency), 1.942, 5e-4);
}

TEST(core, quoted_constants_are_consistent) {
  const double omega = wavelength_to_freq(C::zpl_wavelength);
  EXPECT_NEAR(omega / C::zpl_angular_frequency, 1.0, 5e-3);
  EXPECT_NEAR(freq_to_energy(omega) / C::zpl_energy, 1.0, 5e-3);
  EXPECT_NEAR(freq_to_energy(C::zpl_angular_frequency) / C::zpl_energy, 1.0, 5e-3);
}

TEST(core, round_trips_are_identity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(6.0, 17.0);
  for (int i = 0; i < 1000; ++i) {
    const double omega = std::pow(10.0, exponent(rng));
    const double back = energy_to_freq(freq_to_energy(omega));
    EXPECT_LT(std::abs(back - omega) / omega, 1e-12);
    const double via_wavelength = wavelength_to_freq(freq_to_wavelength(omega));
    EXPECT_LT(std::abs(via_wavelength - omega) / omega, 1e-12);
  }
}

TEST(core, rejects_negative_input) {
  EXPECT_THROW(freq_to_energy(-1.0), nvreg::DomainError);
  EXPECT_THROW(energy_to_freq(-1e-3), nvreg::DomainError);
  EXPECT_THROW(wavelength_to_freq(0.0), nvreg::DomainError);
  EXPECT_DOUBLE_EQ(signed_freq_to_energy(-2.0e12), -freq_to_energy(2.0e12));
}

TEST(core, zero_field_splitting_is_angular) {
  EXPECT_NEAR(zero_field_splitting_rad_s(), 2.0 * std::numbers::pi * 2.87e9, 1.0);
  EXPECT_NEAR(UnitSystem::time_unit_s * C::zpl_angular_frequency, 1.0, 1e-15);
}
