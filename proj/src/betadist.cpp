#include "gausspoly/betadist.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "gausspoly/errors.hpp"

namespace gausspoly::betadist {

namespace {

constexpr double kHalfLnTwoPi = 0.918938533204672741780329736405617640;
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kStirlingCutoff = 10.0;

constexpr std::array<double, 22> make_factorials() {
  std::array<double, 22> f{};
  f[0] = 1.0;
  for (std::size_t k = 1; k < f.size(); ++k) f[k] = f[k - 1] * static_cast<double>(k);
  return f;
}

constexpr auto kFactorials = make_factorials();

// ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2] for x >= 10, by the
// Stirling series truncated after B_16 (error below 1e-17 at x = 10).
double stirling_correction(double x) {
  constexpr std::array<double, 8> coeff = {
      1.0 / 12.0,     -1.0 / 360.0,        1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,   -691.0 / 360360.0,   1.0 / 156.0,  -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = 0.0;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) sum = sum * inv2 + *it;
  return sum * inv;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " requires a positive finite argument");
  }
}

// Continued fraction for the regularized incomplete beta I_x(a, b) (standard
// parameter order), modified Lentz. Converges quickly for x < (a+1)/(a+b+2).
double incbeta_cf(double a, double b, double x) {
  constexpr double fpmin = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 20000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge");
}

// ln of x^a (1-x)^b / (a B(a, b)) * cf(a, b, x): the lower tail of the
// standard Beta(a, b) law at x, valid (fast) on the near side of the mean.
double log_lower_standard(double a, double b, double x) {
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b);
  return log_front + std::log(incbeta_cf(a, b, x)) - std::log(a);
}

struct LogTails {
  double lower;  // ln P(V <= x)
  double upper;  // ln P(V >= x)
};

// Both tails of the standard Beta(a, b) law; the far tail is computed directly
// and the near tail as log1p(-far).
LogTails standard_log_tails(double a, double b, double x) {
  if (x <= 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  if (x >= 1.0) return {0.0, -std::numeric_limits<double>::infinity()};
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lo = log_lower_standard(a, b, x);
    return {lo, std::log1p(-std::exp(lo))};
  }
  const double up = log_lower_standard(b, a, 1.0 - x);
  return {std::log1p(-std::exp(up)), up};
}

void require_params(const BetaParams& p) {
  require_positive(p.alpha, "BetaParams.alpha");
  require_positive(p.beta_, "BetaParams.beta_");
}

void require_tail_input(std::int64_t a, std::int64_t b) {
  if (b < 1 || a < b) {
    throw DomainError("tail bounds require a >= b >= 1 (got a = " + std::to_string(a) +
                      ", b = " + std::to_string(b) + ")");
  }
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  if (x < kStirlingCutoff) {
    if (x == std::floor(x)) return std::log(kFactorials[static_cast<std::size_t>(x) - 1]);
    // Shift above the cutoff: Gamma(x) = Gamma(x + m) / (x (x+1) ... (x+m-1)).
    double shifted = x;
    double product = 1.0;
    while (shifted < kStirlingCutoff) {
      if (shifted != x) product *= shifted;
      shifted += 1.0;
    }
    return log_gamma(shifted) - std::log(x) - std::log(product);
  }
  return (x - 0.5) * std::log(x) - x + kHalfLnTwoPi + stirling_correction(x);
}

double log_beta_fn(double x, double y) {
  require_positive(x, "log_beta_fn");
  require_positive(y, "log_beta_fn");
  const double big = std::max(x, y);
  const double small = std::min(x, y);
  const double sum = big + small;
  if (small >= kStirlingCutoff) {
    // Stirling form with the (x-1/2) ln x - (x+y-1/2) ln(x+y) pieces regrouped
    // into ratios, so nothing of size x ln x is ever cancelled.
    return kHalfLnTwoPi - (big - 0.5) * std::log1p(small / big) +
           (small - 0.5) * std::log(small / sum) - 0.5 * std::log(sum) +
           stirling_correction(big) + stirling_correction(small) - stirling_correction(sum);
  }
  if (big >= kStirlingCutoff) {
    // ln Gamma(big) - ln Gamma(big + small) in the same regrouped form.
    const double ratio = -(big - 0.5) * std::log1p(small / big) - small * std::log(sum) +
                         small + stirling_correction(big) - stirling_correction(sum);
    return log_gamma(small) + ratio;
  }
  return log_gamma(x) + log_gamma(y) - log_gamma(sum);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("log_binomial requires 0 <= k <= n (got n = " + std::to_string(n) +
                      ", k = " + std::to_string(k) + ")");
  }
  if (k == 0 || k == n) return 0.0;
  if (k == 1 || k == n - 1) return std::log(static_cast<double>(n));
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return -std::log1p(nd) - log_beta_fn(nd - kd + 1.0, kd + 1.0);
}

// Reversed order: BetaParams{alpha, beta_} is the standard Beta(beta_, alpha).

double beta_cdf(double u, const BetaParams& p) { return std::exp(log_beta_cdf(u, p)); }

double beta_sf(double u, const BetaParams& p) { return std::exp(log_beta_sf(u, p)); }

double log_beta_cdf(double u, const BetaParams& p) {
  require_params(p);
  return standard_log_tails(p.beta_, p.alpha, u).lower;
}

double log_beta_sf(double u, const BetaParams& p) {
  require_params(p);
  return standard_log_tails(p.beta_, p.alpha, u).upper;
}

MeanVar beta_mean_var(const BetaParams& p) {
  require_params(p);
  const double s = p.alpha + p.beta_;
  return {p.beta_ / s, p.alpha * p.beta_ / (s * s * (s + 1.0))};
}

double sample_gamma(double shape, RngStream& stream) {
  require_positive(shape, "sample_gamma");
  if (shape < 1.0) {
    // Gamma(k) = Gamma(k + 1) * U^(1/k)
    const double g = sample_gamma(shape + 1.0, stream);
    return g * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = stream.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(const BetaParams& p, RngStream& stream) {
  require_params(p);
  const double toward_one = sample_gamma(p.beta_, stream);
  const double toward_zero = sample_gamma(p.alpha, stream);
  const double u = toward_one / (toward_one + toward_zero);
  if (u <= 0.0) return std::numeric_limits<double>::min();
  if (u >= 1.0) return std::nextafter(1.0, 0.0);
  return u;
}

double lower_tail_threshold(const TailBoundInput& in) {
  const auto a = static_cast<double>(in.a);
  const auto b = static_cast<double>(in.b);
  const double n = a + b;
  return b / n - in.s * std::sqrt(a * b) / std::pow(n, 1.5);
}

double upper_tail_threshold(const TailBoundInput& in) {
  const auto a = static_cast<double>(in.a);
  const auto b = static_cast<double>(in.b);
  const double n = a + b;
  return b / n + in.s * std::sqrt(a * b) / std::pow(n, 1.5);
}

double lemma41_lower_tail_bound(const TailBoundInput& in) {
  require_tail_input(in.a, in.b);
  if (!(in.s > 0.0)) throw DomainError("tail bound requires s > 0");
  const auto a = static_cast<double>(in.a);
  const auto b = static_cast<double>(in.b);
  const double n = a + b;
  const double diff = std::exp(-in.s * in.s / 6.0) - std::exp(-n * b / (6.0 * a));
  if (diff <= 0.0) return 0.0;
  return 3.0 * std::exp(3.0) / kPi / in.s * diff;
}

double lemma42_upper_tail_bound(const TailBoundInput& in) {
  const double first = lemma41_lower_tail_bound(in);
  const double cut = 2.0 * static_cast<double>(in.b) / static_cast<double>(in.n_sum());
  return first + beta_sf(cut, in.law());
}

double lemma43_lambda_tail_bound(std::int64_t a, std::int64_t b, double lambda) {
  require_tail_input(a, b);
  if (!(lambda >= 2.0)) {
    throw DomainError("lambda tail bound requires lambda >= 2, got " + std::to_string(lambda));
  }
  const auto ad = static_cast<double>(a);
  const auto bd = static_cast<double>(b);
  const double n = ad + bd;
  return 3.0 - std::log(kPi) + bd * std::log(lambda) + 0.5 * std::log(bd) + bd + 1.5 -
         lambda * ad * bd / n;
}

LogBounds stirling_log_bounds(std::int64_t n) {
  if (n < 1) throw DomainError("stirling_log_bounds requires n >= 1");
  const auto nd = static_cast<double>(n);
  const double common = (nd + 0.5) * std::log(nd) - nd;
  return {kHalfLnTwoPi + common, 1.0 + common};
}

}  // namespace gausspoly::betadist
