#pragma once

// Reference design data for 637 nm diamond microdisks (n_c = 2.4) and the
// nearest-neighbour hopping of disk chains. Hopping values are in units of
// 1e-3 eV; that unit is inferred (it is the only reading that places the
// recommended spacings in the 1e-4..1e-5 eV operating window) and is not
// part of the source tables.

#include <array>

namespace nvreg::reference {

struct ThicknessRow {
  int m;
  double radius;     // um
  double thickness;  // um
};

inline constexpr std::array<ThicknessRow, 14> kDiskThickness{{
    {40, 2.0, 0.469}, {40, 2.5, 0.185}, {40, 3.0, 0.143}, {40, 3.3, 0.128},
    {40, 3.5, 0.118}, {40, 3.7, 0.108}, {40, 4.0, 0.088},
    {50, 2.5, 0.397}, {50, 3.0, 0.194}, {50, 3.5, 0.153}, {50, 3.7, 0.143},
    {50, 4.0, 0.130}, {50, 4.5, 0.111}, {50, 5.0, 0.085},
}};

inline constexpr std::array<double, 6> kSpacingRatios{2.01, 2.11, 2.21, 2.31, 2.41, 2.49};

struct HoppingColumn {
  int m;
  double radius;                    // um
  std::array<double, 6> kappa_mev;  // at kSpacingRatios
};

inline constexpr std::array<HoppingColumn, 6> kHopping{{
    {40, 2.0, {5.4162318, 0.19195095, 8.4024303e-3, 4.4752246e-4, 2.8629954e-5, 3.5948418e-6}},
    {40, 2.5, {6.1629656, 0.31170879, 2.0020717e-2, 1.6128662e-3, 1.6140768e-4, 2.9785056e-5}},
    {40, 3.0, {7.3221493, 0.60936661, 6.8041825e-2, 1.0331791e-2, 2.0305286e-3, 8.0271189e-4}},
    {50, 2.5, {3.7089467, 5.7043459e-2, 1.1423516e-3, 2.9232764e-5, 9.4061343e-7, 7.0305704e-8}},
    {50, 3.0, {4.1999312, 9.0470660e-2, 2.6025582e-3, 9.8328396e-5, 4.8134632e-6, 5.1537858e-7}},
    {50, 3.5, {4.7383159, 0.15825279, 7.3626257e-3, 4.7248165e-4, 4.1644441e-5, 7.5212790e-6}},
}};

// Two-qubit gate defaults (rad/s).
inline constexpr double kCouplingControl = 1.0e10;
inline constexpr double kCouplingTarget = 0.9e10;
inline constexpr double kParkedDetuning = 1.0e12;

}  // namespace nvreg::reference
