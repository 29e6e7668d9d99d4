#include "gausspoly/specfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "gausspoly/errors.hpp"

namespace gausspoly::specfun {

namespace {

// Above this std::erfc starts losing bits to subnormals.
constexpr double kErfcDirectLimit = 26.0;

// Continued fraction
//   sqrt(pi) exp(x^2) erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated by modified Lentz. Converges for x > 0; a handful of terms
// suffice for x >= 26.
double erfcx_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-17;
  double f = x;
  double c = x;
  double dd = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double a = 0.5 * k;
    dd = x + a * dd;
    if (std::abs(dd) < tiny) dd = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    const double delta = c * dd;
    f *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return 1.0 / (kSqrtPi * f);
}

// x^2 as an unevaluated sum hi + lo.
struct Square {
  double hi;
  double lo;
};

Square exact_square(double x) {
  const double hi = x * x;
  return {hi, std::fma(x, x, -hi)};
}

// Square of the tail expansion at t = ln(1/u).
double expansion_square(double t, double delta) {
  const double lt = std::log(t);
  return t - 0.5 * lt - kLnTwoSqrtPi + 0.25 * lt / t + delta / t;
}

}  // namespace

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (x < kErfcDirectLimit) {
    const auto sq = exact_square(x);
    return std::erfc(x) * std::exp(sq.hi) * std::exp(sq.lo);
  }
  return erfcx_continued_fraction(x);
}

double log_erfc(double x) {
  if (x < kErfcDirectLimit) return std::log(std::erfc(x));
  const auto sq = exact_square(x);
  return std::log(erfcx_continued_fraction(x)) - sq.lo - sq.hi;
}

double phi_cap(double y) { return 0.5 * std::erfc(-y); }

double log_phi_cap(double y) {
  if (y >= 0.0) return std::log1p(-0.5 * std::erfc(y));
  return log_erfc(-y) - kLn2;
}

double log_phi_cap_complement(double y) { return log_phi_cap(-y); }

double log_phi_lower(double y) { return -y * y - 0.5 * kLnPi; }

MillsDecomposition mills_theta(double z) {
  if (!(z > 1.0)) {
    throw DomainError("mills_theta requires z > 1, got " + std::to_string(z));
  }
  // (1 - Phi(z)) * 2 sqrt(pi) z exp(z^2) = sqrt(pi) z erfcx(z)
  const double ratio = kSqrtPi * z * erfcx(z);
  return {z, 2.0 * z * z * (1.0 - ratio)};
}

double inverse_tail_expansion(double u, double delta) {
  return std::sqrt(expansion_square(-std::log(u), delta));
}

namespace {

// Newton on ln Phi(y) = log_p. ln Phi is increasing and concave, so from any
// start the first step lands at or left of the root and the iterates then
// climb to it monotonically.
double solve_log_phi_cap(double log_p) {
  double y;
  if (log_p <= -1.0) {
    // Tail expansion with delta = 8, the midpoint of its admissible range.
    y = -std::sqrt(expansion_square(-log_p, 8.0));
  } else {
    // A few bisection steps on [-6, 6] give a start near the centre.
    double lo = -6.0;
    double hi = 6.0;
    for (int i = 0; i < 8; ++i) {
      const double mid = 0.5 * (lo + hi);
      (log_phi_cap(mid) < log_p ? lo : hi) = mid;
    }
    y = 0.5 * (lo + hi);
  }
  double step = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double lp = log_phi_cap(y);
    const double slope = std::exp(log_phi_lower(y) - lp);
    step = (log_p - lp) / slope;
    y += step;
    if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(y))) return y;
  }
  // Rounding noise in ln Phi can keep the last step from shrinking further.
  if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(y))) return y;
  throw ConvergenceError("phi_cap_inv: Newton iteration did not converge");
}

}  // namespace

double phi_cap_inv_log(double log_p) {
  if (!(log_p < 0.0)) {
    throw DomainError("phi_cap_inv_log requires log_p < 0");
  }
  // Upper half: solve on the complement, which is the smaller tail.
  if (log_p > -kLn2) return -solve_log_phi_cap(std::log(-std::expm1(log_p)));
  return solve_log_phi_cap(log_p);
}

double phi_cap_inv_complement(double log_q) { return -phi_cap_inv_log(log_q); }

namespace {

// ln p carries up to ulp(|ln p|) of relative error in p, about 1e-13 near
// p = 1e-300. Walking one ulp at a time against p itself recovers the
// closest double. target = Phi(y) is increasing in y.
double polish_against(double y, double target) {
  const auto resid = [&](double x) { return std::abs(phi_cap(x) - target); };
  double best = resid(y);
  for (const double dir : {-INFINITY, INFINITY}) {
    for (int i = 0; i < 4; ++i) {
      const double next = std::nextafter(y, dir);
      const double r = resid(next);
      if (!(r < best)) break;
      y = next;
      best = r;
    }
  }
  return y;
}

}  // namespace

double phi_cap_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("phi_cap_inv requires 0 < p < 1, got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  // Below DBL_MIN the direct residual loses digits; the log route is all there is.
  if (p < 0.5) {
    const double y = phi_cap_inv_log(std::log(p));
    return p >= DBL_MIN ? polish_against(y, p) : y;
  }
  // 1 - p is exact for p > 1/2; polish the mirrored point.
  const double q = 1.0 - p;
  return -polish_against(-phi_cap_inv_complement(std::log1p(-p)), q);
}

InverseExpansion delta_of(double u) {
  if (!(u > 0.0 && u <= std::exp(-1.0))) {
    throw DomainError("delta_of requires 0 < u <= 1/e, got " + std::to_string(u));
  }
  const double t = -std::log(u);
  const double lt = std::log(t);
  const double z = phi_cap_inv_complement(-t);
  const double delta = t * (z * z - t + 0.5 * lt + kLnTwoSqrtPi - 0.25 * lt / t);
  return {u, delta};
}

double log_g_from_logs(double log_u, double log_one_minus_u, std::int64_t d) {
  if (d < 1) throw DomainError("log_g requires d >= 1");
  if (d == 1) return 0.0;
  // z = Phi^{-1}(1 - u), taken from whichever tail is smaller.
  const double z = log_u <= -kLn2 ? phi_cap_inv_complement(log_u)
                                  : phi_cap_inv_log(log_one_minus_u);
  return static_cast<double>(d - 1) * (log_phi_lower(z) - kLn2 - log_u);
}

double log_g(double u, std::int64_t d) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("log_g requires 0 < u < 1, got " + std::to_string(u));
  }
  if (d < 2) throw DomainError("log_g requires d >= 2");
  return log_g_from_logs(std::log(u), std::log1p(-u), d);
}

double log_g_closed_form(double u, std::int64_t d) {
  const double delta = delta_of(u).delta;
  const double t = -std::log(u);
  const double lt = std::log(t);
  const double m = static_cast<double>(d - 1);
  return 0.5 * m * lt - 0.25 * m * lt / t - m * delta / t;
}

}  // namespace gausspoly::specfun
