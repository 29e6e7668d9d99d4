#include "gausspoly/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gausspoly/betadist.hpp"
#include "gausspoly/errors.hpp"
#include "gausspoly/parallel.hpp"
#include "gausspoly/rng.hpp"
#include "gausspoly/specfun.hpp"

namespace gausspoly::expectation {

using specfun::kLn2;
using specfun::kLnPi;
using specfun::kPi;

namespace {

constexpr double kLn10 = 2.302585092994045684017991454684364208;
constexpr std::int64_t kMinBandDimension = 78;

double as_double(std::int64_t v) { return static_cast<double>(v); }

void require_band_range(const Params& p, const char* what) {
  p.validate();
  if (p.d < kMinBandDimension) {
    throw PreconditionError(std::string(what) + " requires d >= 78 (got d = " +
                            std::to_string(p.d) + ")");
  }
  const double min_n = e_to_the_e() * as_double(p.d);
  if (as_double(p.n) < min_n) {
    throw PreconditionError(std::string(what) + " requires n >= e^e * d = " +
                            std::to_string(min_n) + " (got n = " + std::to_string(p.n) + ")");
  }
}

// (d-1)/2 lnln(n/d) - (d-1)/4 lnln(n/d)/ln(n/d), shared by both sandwich ends.
double sandwich_core(const Params& p) {
  const double m = as_double(p.d - 1);
  const double l = std::log(as_double(p.n) / as_double(p.d));
  const double ll = std::log(l);
  return 0.5 * m * ll - 0.25 * m * ll / l;
}

FacetExpectation make_result(const Params& p, Route r, double log_value, double err) {
  return {p, r, LogNumber{log_value}, err};
}

}  // namespace

void Params::validate() const {
  if (d < 1) throw InvalidParams("d must be >= 1 (got d = " + std::to_string(d) + ")");
  if (n < d + 1) {
    throw InvalidParams("n must be >= d + 1 (got n = " + std::to_string(n) +
                        ", d = " + std::to_string(d) + ")");
  }
}

double LogNumber::log10_value() const noexcept { return log_value / kLn10; }

std::optional<double> LogNumber::value() const noexcept {
  if (std::isfinite(log_value) && std::abs(log_value) < 700.0) return std::exp(log_value);
  return std::nullopt;
}

std::string_view to_string(Route r) noexcept {
  switch (r) {
    case Route::QuadY: return "quad_y";
    case Route::QuadU: return "quad_u";
    case Route::QuadSmallDiff: return "quad_smalldiff";
    case Route::McGeom: return "mc_geom";
    case Route::McOneDim: return "mc_onedim";
  }
  return "unknown";
}

std::string_view to_string(BandSource s) noexcept {
  switch (s) {
    case BandSource::Thm11: return "thm11";
    case BandSource::Lemma5Sandwich: return "lemma5_sandwich";
    case BandSource::Thm13Trend: return "thm13_trend";
  }
  return "unknown";
}

double e_to_the_e() { return std::exp(std::exp(1.0)); }

double log_prefactor(std::int64_t d) {
  const double dd = as_double(d);
  return dd * kLn2 + 0.5 * (dd - 1.0) * kLnPi - 0.5 * std::log(dd);
}

FacetExpectation ef_quad_y(const Params& p, const QuadConfig& cfg) {
  p.validate();
  const double k = as_double(p.n - p.d);
  const double d = as_double(p.d);
  const auto log_f = [=](double y) { return k * specfun::log_phi_cap(y) - d * y * y; };
  const double guess = std::sqrt(std::log(as_double(p.n) / d));
  const LogIntegral in = integrate_log(log_f, guess, cfg);
  const double log_front =
      kLn2 + betadist::log_binomial(p.n, p.d) + 0.5 * (std::log(d) - kLnPi);
  return make_result(p, Route::QuadY, log_front + in.log_value, in.error_estimate);
}

LogIntegral log_expected_g(const Params& p, const QuadConfig& cfg) {
  p.validate();
  const double k = as_double(p.n - p.d);
  const double d = as_double(p.d);
  const std::int64_t dim = p.d;
  // Substitution u = exp(-s), s = exp(w): du = -u s dw. Both tails of the
  // w-integrand decay at least exponentially, and no quantity is formed that
  // could round u to 0 or 1.
  const auto log_f = [=](double w) {
    const double s = std::exp(w);
    const double log_u = -s;
    const double log_one_minus_u = std::log(-std::expm1(-s));
    return specfun::log_g_from_logs(log_u, log_one_minus_u, dim) + k * log_one_minus_u +
           d * log_u + w;
  };
  const double guess = std::log(std::log(as_double(p.n) / d));
  LogIntegral in = integrate_log(log_f, guess, cfg);
  in.log_value -= betadist::log_beta_fn(k + 1.0, d);
  return in;
}

LogNumber e_g_quadrature(const Params& p, const QuadConfig& cfg) {
  return {log_expected_g(p, cfg).log_value};
}

FacetExpectation ef_quad_u(const Params& p, const QuadConfig& cfg) {
  const LogIntegral eg = log_expected_g(p, cfg);
  return make_result(p, Route::QuadU, log_prefactor(p.d) + eg.log_value, eg.error_estimate);
}

FacetExpectation ef_quad_smalldiff(const Params& p, const QuadConfig& cfg) {
  p.validate();
  const double k = as_double(p.n - p.d);
  const double inv_sqrt_d = 1.0 / std::sqrt(as_double(p.d));
  const auto log_f = [=](double y) {
    return k * specfun::log_phi_cap(y * inv_sqrt_d) - y * y;
  };
  // Mode of exp(2k y/sqrt(pi d) - y^2) to first order.
  const double guess = k * inv_sqrt_d / std::sqrt(kPi);
  const LogIntegral in = integrate_log(log_f, guess, cfg);
  const double log_front = kLn2 + betadist::log_binomial(p.n, p.d) - 0.5 * kLnPi;
  return make_result(p, Route::QuadSmallDiff, log_front + in.log_value, in.error_estimate);
}

Band lemma5_sandwich(const Params& p) {
  require_band_range(p, "lemma5_sandwich");
  const double m = as_double(p.d - 1);
  const double l = std::log(as_double(p.n) / as_double(p.d));
  const double core = sandwich_core(p);
  // sqrt(d) e^{-d/10} with the explicit constants e^6/pi (upper), 2e^6/pi (lower).
  const double tail = std::exp(6.0) / kPi * std::sqrt(as_double(p.d)) *
                      std::exp(-as_double(p.d) / 10.0);
  return {core - 34.0 * m / l - 2.0 * tail, core + 2.0 * m / l + tail,
          BandSource::Lemma5Sandwich};
}

Band thm11_band(const Params& p) {
  const Band g = lemma5_sandwich(p);
  const double shift = log_prefactor(p.d);
  return {g.log_lower + shift, g.log_upper + shift, BandSource::Thm11};
}

LogNumber cor12_leading(const Params& p) {
  p.validate();
  if (as_double(p.n) <= std::exp(1.0)) {
    throw DomainError("cor12_leading requires n > e so that lnln n is defined (got n = " +
                      std::to_string(p.n) + ")");
  }
  const double d = as_double(p.d);
  return {log_prefactor(p.d) + 0.5 * (d - 1.0) * std::log(std::log(as_double(p.n)))};
}

LogNumber thm13_leading(const Params& p) {
  p.validate();
  const double k = as_double(p.n - p.d);
  return {betadist::log_binomial(p.n, p.d) - (k - 1.0) * kLn2 + k * k / (kPi * as_double(p.d))};
}

FacetExpectation onedim_identity_mc(const Params& p, std::int64_t trials, std::uint64_t seed) {
  p.validate();
  if (trials < 1) {
    throw InvalidParams("trials must be >= 1 (got " + std::to_string(trials) + ")");
  }
  const std::int64_t k = p.n - p.d;
  const double sqrt_d = std::sqrt(as_double(p.d));
  constexpr double inv_sqrt2 = 0.70710678118654752440;

  // ln P(Y outside [min, max]) per trial. Y_i = Z_i / sqrt(2) ~ N(0, 1/2) and
  // P(Y < m) = Phi(m sqrt(d)) for Y ~ N(0, 1/(2d)).
  std::vector<double> log_prob(static_cast<std::size_t>(trials));
  parallel_for(log_prob.size(), [&](std::size_t t) {
    RngStream stream(seed, t);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::int64_t i = 0; i < k; i += 2) {
      const auto [z0, z1] = stream.normal_pair();
      lo = std::min(lo, z0);
      hi = std::max(hi, z0);
      if (i + 1 < k) {
        lo = std::min(lo, z1);
        hi = std::max(hi, z1);
      }
    }
    if (lo == hi) {
      log_prob[t] = 0.0;  // a single point: Y misses it almost surely
      return;
    }
    const double below = specfun::log_phi_cap(lo * inv_sqrt2 * sqrt_d);
    const double above = specfun::log_phi_cap(-hi * inv_sqrt2 * sqrt_d);
    const double top = std::max(below, above);
    log_prob[t] = top + std::log1p(std::exp(std::min(below, above) - top));
  });

  const double shift = *std::max_element(log_prob.begin(), log_prob.end());
  std::vector<double> scaled(log_prob.size());
  std::transform(log_prob.begin(), log_prob.end(), scaled.begin(),
                 [shift](double v) { return std::exp(v - shift); });
  const double count = as_double(trials);
  const double mean = pairwise_sum(scaled) / count;
  double rel_se = 0.0;
  if (trials > 1) {
    std::vector<double> sq(scaled.size());
    std::transform(scaled.begin(), scaled.end(), sq.begin(),
                   [mean](double v) { return (v - mean) * (v - mean); });
    const double var = pairwise_sum(sq) / (count - 1.0);
    rel_se = std::sqrt(var / count) / mean;
  }
  const double log_value = betadist::log_binomial(p.n, p.d) + shift + std::log(mean);
  return make_result(p, Route::McOneDim, log_value, rel_se);
}

}  // namespace gausspoly::expectation
