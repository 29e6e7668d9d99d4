#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "gausspoly/quadrature.hpp"

namespace gausspoly::expectation {

/// Sample size n and dimension d, n >= d + 1, d >= 1.
struct Params {
  std::int64_t n;
  std::int64_t d;

  /// Throws InvalidParams when the invariant fails.
  void validate() const;
};

/// A positive quantity carried by its natural logarithm.
struct LogNumber {
  double log_value;

  double log10_value() const noexcept;
  /// exp(log_value) when |log_value| < 700, otherwise empty.
  std::optional<double> value() const noexcept;
};

enum class Route { QuadY, QuadU, QuadSmallDiff, McGeom, McOneDim };

std::string_view to_string(Route r) noexcept;

struct FacetExpectation {
  Params params;
  Route route;
  LogNumber value;
  /// Log-scale uncertainty (quadrature refinement or MC standard error).
  double error_estimate;
};

enum class BandSource { Thm11, Lemma5Sandwich, Thm13Trend };

std::string_view to_string(BandSource s) noexcept;

struct Band {
  double log_lower;
  double log_upper;
  BandSource source;

  bool contains(double log_value) const noexcept {
    return log_lower <= log_value && log_value <= log_upper;
  }
  double width() const noexcept { return log_upper - log_lower; }
};

/// e^e at full double precision.
double e_to_the_e();

/// ln E f_{d-1} = ln[2 C(n,d) sqrt(d/pi)] + ln integral Phi(y)^(n-d) exp(-d y^2) dy.
FacetExpectation ef_quad_y(const Params& p, const QuadConfig& cfg = {});

/// ln E f_{d-1} = d ln 2 + (d-1)/2 ln pi - ln(d)/2 + ln E g_d(U),
/// U ~ B(n-d+1, d) in reversed order. Integrates in w = lnln(1/u).
FacetExpectation ef_quad_u(const Params& p, const QuadConfig& cfg = {});

/// ln E f_{d-1} = ln[2 C(n,d)/sqrt(pi)] + ln integral Phi(y/sqrt d)^(n-d) exp(-y^2) dy;
/// the integrand is close to Gaussian when n - d << d.
FacetExpectation ef_quad_smalldiff(const Params& p, const QuadConfig& cfg = {});

/// ln E g_d(U) with its log-scale error estimate.
LogIntegral log_expected_g(const Params& p, const QuadConfig& cfg = {});

/// ln E g_d(U).
LogNumber e_g_quadrature(const Params& p, const QuadConfig& cfg = {});

/// d ln 2 + (d-1)/2 ln pi - ln(d)/2, the factor between E f_{d-1} and E g_d(U).
double log_prefactor(std::int64_t d);

/// Explicit upper/lower bounds on ln E g_d(U) for d >= 78 and n >= e^e d.
/// Throws PreconditionError outside that range.
Band lemma5_sandwich(const Params& p);

/// lemma5_sandwich shifted by log_prefactor: a band for ln E f_{d-1}
/// corresponding to theta in [-34, 2].
Band thm11_band(const Params& p);

/// d ln 2 + (d-1)/2 ln pi - ln(d)/2 + (d-1)/2 lnln n.  Throws DomainError for n <= e.
LogNumber cor12_leading(const Params& p);

/// ln C(n,d) - (k-1) ln 2 + k^2/(pi d), k = n - d.
LogNumber thm13_leading(const Params& p);

/// Rao-Blackwellised estimate of ln E f_{d-1} from the one-dimensional
/// identity: per trial draw Y_1..Y_{n-d} ~ N(0, 1/2) and average the exact
/// probability that an independent Y ~ N(0, 1/(2d)) falls outside
/// [min Y_i, max Y_i]. Trial t uses RngStream(seed, t).
FacetExpectation onedim_identity_mc(const Params& p, std::int64_t trials, std::uint64_t seed);

}  // namespace gausspoly::expectation
