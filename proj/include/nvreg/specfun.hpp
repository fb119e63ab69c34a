#pragma once

// Cylinder functions J_m, Y_m and H_m^(1) = J_m + iY_m for integer order
// m >= 0 and real argument.
//
// J_m: Miller backward recurrence normalised by J_0 + 2*sum J_2k = 1. Stable
// for every (m, x) in range, in particular the whispering-gallery regime
// m > x where forward recurrence loses all digits.
// Y_m: Y_0 and Y_1 from the ascending series (x < 17, long double) or the
// Hankel asymptotic expansion (x >= 17), then forward recurrence in m, which
// is stable because Y_m grows with m.
//
// Precision budget: about 1e-13 relative for J_m away from its zeros,
// 1e-12 for Y_m with x <= 100; at x ~ 1e4 the phase reduction limits Y to
// ~1e-11 relative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "nvreg/core.hpp"

namespace nvreg::specfun {

inline constexpr double kMaxArgument = 1.0e4;
inline constexpr int kMaxOrder = 4096;

struct CylinderFnValue {
  int order = 0;
  double argument = 0.0;
  std::complex<double> value;
};

// Values of two consecutive orders, m and m + 1.
struct OrderPair {
  double m;
  double m_plus_1;
};

namespace detail {

inline void check_order(int m, const char* who) {
  if (m < 0 || m > kMaxOrder) throw DomainError(std::string(who) + ": order out of range");
}

inline void check_argument(double x, bool allow_zero, const char* who) {
  if (std::isnan(x) || x < 0.0 || x > kMaxArgument || (!allow_zero && x == 0.0)) {
    throw DomainError(std::string(who) + ": argument out of range");
  }
}

// J_m(x) and J_{m+1}(x) for x > 0 by Miller's algorithm.
inline OrderPair miller_j(int m, double x) {
  const double big = std::max(static_cast<double>(m + 1), x);
  const int start = 2 * ((static_cast<int>(big) + 24 + static_cast<int>(std::sqrt(60.0 * big))) / 2);
  constexpr double kRescaleAbove = 1e250;
  constexpr double kRescaleBy = 1e-250;

  double j_next = 0.0;  // J_{k+1}
  double j_here = 1.0;  // J_k, unnormalised, starting at k = start
  double sum = 0.0;     // 2 * sum over even k >= 2, plus J_0 at the end
  double want_m = 0.0;
  double want_m1 = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    if (k == m) want_m = j_here;
    if (k == m + 1) want_m1 = j_here;
    if (k % 2 == 0) sum += 2.0 * j_here;
    const double j_prev = k * two_over_x * j_here - j_next;
    j_next = j_here;
    j_here = j_prev;
    if (std::abs(j_here) > kRescaleAbove) {
      j_here *= kRescaleBy;
      j_next *= kRescaleBy;
      sum *= kRescaleBy;
      want_m *= kRescaleBy;
      want_m1 *= kRescaleBy;
    }
  }
  // j_here now holds J_0 (unnormalised).
  if (m == 0) want_m = j_here;
  sum += j_here;
  return {want_m / sum, want_m1 / sum};
}

// Y_0(x), Y_1(x) from the ascending series; accurate for 0 < x < 17.
inline std::pair<double, double> y01_series(double x) {
  using ld = long double;
  constexpr ld kEulerGamma = 0.57721566490153286060651209008240243L;
  constexpr ld kPi = 3.14159265358979323846264338327950288L;
  const ld half = static_cast<ld>(x) / 2.0L;
  const ld q = -half * half;  // (-x^2/4)
  const ld log_half = std::log(half);

  // J_0, J_1 and the digamma-weighted sums in one pass.
  ld j0 = 0.0L, j1 = 0.0L, s0 = 0.0L, s1 = 0.0L;
  ld term0 = 1.0L;  // q^k / (k!)^2
  ld term1 = 1.0L;  // q^k / (k! (k+1)!)
  ld harmonic_k = 0.0L;
  ld harmonic_k1 = 1.0L;
  for (int k = 0; k < 200; ++k) {
    j0 += term0;
    j1 += term1;
    const ld psi_k1 = -kEulerGamma + harmonic_k;   // psi(k+1)
    const ld psi_k2 = -kEulerGamma + harmonic_k1;  // psi(k+2)
    s0 += 2.0L * psi_k1 * term0;
    s1 += (psi_k1 + psi_k2) * term1;
    if (k > 4 && std::abs(term0) < 1e-22L * std::abs(j0) && std::abs(term1) < 1e-22L) break;
    term0 *= q / static_cast<ld>((k + 1) * (k + 1));
    term1 *= q / static_cast<ld>((k + 1) * (k + 2));
    harmonic_k += 1.0L / static_cast<ld>(k + 1);
    harmonic_k1 += 1.0L / static_cast<ld>(k + 2);
  }
  j1 *= half;
  const ld y0 = (2.0L / kPi) * log_half * j0 - s0 / kPi;
  const ld y1 = -1.0L / (kPi * half) + (2.0L / kPi) * log_half * j1 - half * s1 / kPi;
  return {static_cast<double>(y0), static_cast<double>(y1)};
}

// P(nu, x), Q(nu, x) of the Hankel asymptotic expansion for nu = 0, 1.
inline std::pair<double, double> hankel_pq(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    last = mag;
    // Signs: P gets (-1)^{k/2} a_k for even k, Q gets (-1)^{(k-1)/2} a_k for odd k.
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? term : -term);
    }
    if (mag < 1e-18) break;
  }
  return {p, q};
}

inline std::pair<double, double> y01_asymptotic(double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  constexpr double r2 = std::numbers::sqrt2 / 2.0;
  // chi_0 = x - pi/4, chi_1 = x - 3pi/4, expanded to keep the reduction exact in x.
  const double sin0 = (s - c) * r2, cos0 = (c + s) * r2;
  const double sin1 = -(s + c) * r2, cos1 = (s - c) * r2;
  const auto [p0, q0] = hankel_pq(0, x);
  const auto [p1, q1] = hankel_pq(1, x);
  return {amp * (p0 * sin0 + q0 * cos0), amp * (p1 * sin1 + q1 * cos1)};
}

inline std::pair<double, double> y01(double x) {
  return x < 17.0 ? y01_series(x) : y01_asymptotic(x);
}

// Y_m(x), Y_{m+1}(x) for x > 0 by forward recurrence.
inline OrderPair forward_y(int m, double x) {
  auto [y_prev, y_here] = y01(x);  // Y_0, Y_1
  if (m == 0) return {y_prev, y_here};
  const double two_over_x = 2.0 / x;
  for (int k = 1; k <= m; ++k) {
    const double y_next = k * two_over_x * y_here - y_prev;
    y_prev = y_here;
    y_here = y_next;
  }
  return {y_prev, y_here};
}

}  // namespace detail

inline double bessel_j(int m, double x) {
  detail::check_order(m, "bessel_j");
  detail::check_argument(x, true, "bessel_j");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  return detail::miller_j(m, x).m;
}

inline OrderPair bessel_j_pair(int m, double x) {
  detail::check_order(m, "bessel_j_pair");
  detail::check_argument(x, true, "bessel_j_pair");
  if (x == 0.0) return {m == 0 ? 1.0 : 0.0, 0.0};
  return detail::miller_j(m, x);
}

inline double bessel_y(int m, double x) {
  detail::check_order(m, "bessel_y");
  detail::check_argument(x, false, "bessel_y");
  return detail::forward_y(m, x).m;
}

inline OrderPair bessel_y_pair(int m, double x) {
  detail::check_order(m, "bessel_y_pair");
  detail::check_argument(x, false, "bessel_y_pair");
  return detail::forward_y(m, x);
}

inline std::complex<double> hankel1(int m, double x) {
  detail::check_order(m, "hankel1");
  detail::check_argument(x, false, "hankel1");
  return {detail::miller_j(m, x).m, detail::forward_y(m, x).m};
}

// H_m^(1)(x) and H_{m+1}^(1)(x).
inline std::pair<std::complex<double>, std::complex<double>> hankel1_pair(int m, double x) {
  detail::check_order(m, "hankel1_pair");
  detail::check_argument(x, false, "hankel1_pair");
  const auto j = detail::miller_j(m, x);
  const auto y = detail::forward_y(m, x);
  return {{j.m, y.m}, {j.m_plus_1, y.m_plus_1}};
}

inline CylinderFnValue hankel1_value(int m, double x) { return {m, x, hankel1(m, x)}; }

}  // namespace nvreg::specfun
