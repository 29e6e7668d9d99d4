#pragma once

#include <cstdint>

// Special functions in the variance-1/2 convention used throughout the library:
//
//   Phi(y) = (1/sqrt(pi)) * integral_{-inf}^{y} exp(-s^2) ds = erfc(-y) / 2
//   phi(y) = Phi'(y)      = exp(-y^2) / sqrt(pi)
//
// This is NOT the standard normal CDF. The erfc bridge above is the only
// place the two conventions meet.

namespace gausspoly::specfun {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kLnPi = 1.144729885849400174143427351353058712;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
/// ln(2 sqrt(pi))
inline constexpr double kLnTwoSqrtPi = kLn2 + 0.5 * kLnPi;

/// Complementary error function. Underflows to 0 for x beyond ~27.2;
/// use log_erfc there.
double erfc(double x);

/// ln erfc(x), accurate into the deep tail (x up to ~1e150).
double log_erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x), for x >= 0.
double erfcx(double x);

double phi_cap(double y);

/// ln Phi(y). Stable for y down to about -1e150 and up to +inf.
double log_phi_cap(double y);

/// ln(1 - Phi(y)) = ln Phi(-y), without forming 1 - Phi.
double log_phi_cap_complement(double y);

/// ln phi(y) = -y^2 - ln(pi)/2.
double log_phi_lower(double y);

struct MillsDecomposition {
  double z;
  double theta;
};

/// Solves 1 - Phi(z) = exp(-z^2)/(2 sqrt(pi) z) * (1 - theta/(2 z^2)) for theta.
/// Throws DomainError for z <= 1.
MillsDecomposition mills_theta(double z);

/// Inverse of Phi. Throws DomainError unless 0 < p < 1.
double phi_cap_inv(double p);

/// y with ln Phi(y) = log_p, for log_p < 0.
double phi_cap_inv_log(double log_p);

/// y with ln(1 - Phi(y)) = log_q, for log_q < 0. This is the form to use when
/// 1 - p is too small to survive the subtraction from 1.
double phi_cap_inv_complement(double log_q);

/// Leading-order inverse of the upper tail with remainder coefficient delta:
/// z(u)^2 = t - ln(t)/2 - ln(2 sqrt(pi)) + ln(t)/(4t) + delta/t, t = ln(1/u).
double inverse_tail_expansion(double u, double delta);

struct InverseExpansion {
  double u;
  double delta;
};

/// Remainder delta(u) of the expansion above at the exact inverse.
/// Defined on 0 < u <= 1/e; throws DomainError elsewhere.
InverseExpansion delta_of(double u);

/// ln g_d(u), g_d(u) = (phi(Phi^{-1}(1-u)) / (2u))^(d-1).
/// Throws DomainError unless 0 < u < 1 and d >= 2.
double log_g(double u, std::int64_t d);

/// ln g_d at a point given by both ln u and ln(1 - u); the form used inside
/// quadrature where u itself may underflow or round to 1. Accepts d >= 1.
double log_g_from_logs(double log_u, double log_one_minus_u, std::int64_t d);

/// Closed form (d-1)/2 lnln(1/u) - (d-1)/4 lnln(1/u)/ln(1/u) - (d-1) delta/ln(1/u)
/// with the exact delta. Defined on 0 < u <= 1/e.
double log_g_closed_form(double u, std::int64_t d);

}  // namespace gausspoly::specfun
