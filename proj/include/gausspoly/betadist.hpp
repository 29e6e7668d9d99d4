#pragma once

#include <cstdint>

#include "gausspoly/rng.hpp"

namespace gausspoly::betadist {

/// ln Gamma(x) for x > 0, good to a few ulps of max(1, |ln Gamma(x)|).
double log_gamma(double x);

/// ln B(x, y). Stable when one argument is much larger than the other.
/// Throws DomainError for nonpositive arguments.
double log_beta_fn(double x, double y);

/// ln C(n, k) for 0 <= k <= n, through log_beta_fn (n may reach ~1e15).
double log_binomial(std::int64_t n, std::int64_t k);

/// Beta law in reversed parameter order: the density is
///   (1 - u)^(alpha - 1) * u^(beta_ - 1) / B(alpha, beta_),
/// so BetaParams{alpha, beta_} is the standard Beta(beta_, alpha).
struct BetaParams {
  double alpha;
  double beta_;
};

/// P(U <= u). Absolute error <= 1e-12; relative accuracy is kept in the
/// lower tail.
double beta_cdf(double u, const BetaParams& p);

/// P(U >= u), computed without cancellation against 1.
double beta_sf(double u, const BetaParams& p);

/// ln P(U <= u); finite even where beta_cdf underflows.
double log_beta_cdf(double u, const BetaParams& p);

/// ln P(U >= u).
double log_beta_sf(double u, const BetaParams& p);

struct MeanVar {
  double mean;
  double variance;
};

MeanVar beta_mean_var(const BetaParams& p);

/// Gamma(shape, 1) variate (Marsaglia-Tsang squeeze, boosted for shape < 1).
double sample_gamma(double shape, RngStream& stream);

/// One draw in (0, 1) from the reversed-order Beta law.
double sample_beta(const BetaParams& p, RngStream& stream);

/// U ~ B(a + 1, b + 1) (reversed order), a >= b >= 1, n = a + b, with a
/// deviation scale s (or lambda for the large-deviation bound).
struct TailBoundInput {
  std::int64_t a;
  std::int64_t b;
  double s;

  std::int64_t n_sum() const noexcept { return a + b; }
  BetaParams law() const noexcept {
    return {static_cast<double>(a + 1), static_cast<double>(b + 1)};
  }
};

/// Threshold b/n - s sqrt(a b) / n^(3/2) of the lower-deviation event.
double lower_tail_threshold(const TailBoundInput& in);
/// Threshold b/n + s sqrt(a b) / n^(3/2) of the upper-deviation event.
double upper_tail_threshold(const TailBoundInput& in);

/// (3 e^3 / pi) (1/s) (exp(-s^2/6) - exp(-n b/(6 a)))_+ ; bounds
/// P(U <= lower_tail_threshold). Throws DomainError if a < b or s <= 0.
double lemma41_lower_tail_bound(const TailBoundInput& in);

/// lemma41 expression + P(U >= 2b/n) evaluated exactly; a claimed bound on
/// P(U >= upper_tail_threshold) that is only checked numerically.
double lemma42_upper_tail_bound(const TailBoundInput& in);

/// ln[(e^3/pi) lambda^b b^(1/2) e^(b + 3/2) e^(-lambda a b / n)], bounding
/// P(U >= lambda b / n). Throws DomainError if lambda < 2 or a < b.
double lemma43_lambda_tail_bound(std::int64_t a, std::int64_t b, double lambda);

struct LogBounds {
  double log_lower;
  double log_upper;
};

/// (ln(2 pi)/2 + (n + 1/2) ln n - n,  1 + (n + 1/2) ln n - n), a sandwich for ln n!.
LogBounds stirling_log_bounds(std::int64_t n);

}  // namespace gausspoly::betadist
