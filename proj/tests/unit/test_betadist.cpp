#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gausspoly/betadist.hpp"
#include "gausspoly/errors.hpp"

using namespace gausspoly;
using namespace gausspoly::betadist;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// I_x(a, b) for integer a, b: P(Bin(a + b - 1, x) >= a).
double incbeta_integer(int a, int b, double x) {
  const int m = a + b - 1;
  double sum = 0.0;
  for (int j = a; j <= m; ++j) {
    sum += std::exp(log_binomial(m, j)) * std::pow(x, j) * std::pow(1.0 - x, m - j);
  }
  return sum;
}

}  // namespace

TEST_CASE("log_gamma against high-precision values") {
  struct Case {
    double x;
    double value;
  };
  const Case cases[] = {
      {0.5, 0.57236494292470008707},   {1.5, -0.12078223763524522235},
      {3.7, 1.4280723266653879219},    {10.5, 13.940625219403763633},
      {123.4, 469.33609744219055844},  {10001.0, 82108.927836814353455},
      {1e6, 12815504.56914761166},
  };
  for (const auto& c : cases) {
    CAPTURE(c.x);
    CHECK(std::abs(log_gamma(c.x) - c.value) <= 1e-13 * std::max(1.0, std::abs(c.value)));
  }
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(2.0) == 0.0);
  CHECK(rel_err(log_gamma(11.0), std::log(3628800.0)) <= 1e-15);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("log_beta_fn") {
  CHECK(log_beta_fn(1.0, 1.0) == 0.0);
  CHECK(std::abs(log_beta_fn(3.0, 2.0) - std::log(1.0 / 12.0)) <= 1e-15);
  CHECK(std::abs(log_beta_fn(2.5, 7.25) - log_beta_fn(7.25, 2.5)) <= 1e-13);
  CHECK(rel_err(log_beta_fn(2.5, 7.25), -4.9053366188393039546) <= 1e-13);
  CHECK(rel_err(log_beta_fn(999901.0, 100.0), -1022.4119002626688436) <= 1e-13);
  CHECK_THROWS_AS(log_beta_fn(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_beta_fn(1.0, -2.0), DomainError);
}

TEST_CASE("log_binomial") {
  CHECK(log_binomial(10, 0) == 0.0);
  CHECK(log_binomial(10, 10) == 0.0);
  CHECK(std::abs(log_binomial(10, 3) - std::log(120.0)) <= 1e-14);
  CHECK(std::abs(log_binomial(52, 5) - std::log(2598960.0)) <= 1e-13);
  // Pascal's rule in log form at large n.
  const double lhs = log_binomial(1000000, 500);
  const double a = log_binomial(999999, 499);
  const double b = log_binomial(999999, 500);
  const double rhs = std::max(a, b) + std::log1p(std::exp(std::min(a, b) - std::max(a, b)));
  CHECK(rel_err(lhs, rhs) <= 1e-13);
  // n up to 1e9 must work.
  CHECK(std::isfinite(log_binomial(1000000000, 1000)));
  CHECK_THROWS_AS(log_binomial(5, 6), DomainError);
}

TEST_CASE("beta_cdf examples") {
  CHECK(std::abs(beta_cdf(0.3, {1.0, 1.0}) - 0.3) <= 1e-15);
  CHECK(beta_cdf(1.0, {3.0, 7.0}) == 1.0);
  CHECK(beta_cdf(0.0, {3.0, 7.0}) == 0.0);
  CHECK(std::abs(beta_cdf(0.5, {3.0, 2.0}) - 0.6875) <= 1e-14);
  CHECK(std::abs(beta_cdf(0.3, {2.0, 3.0}) - 0.0837) <= 1e-14);
  CHECK(rel_err(beta_cdf(0.05, {91.0, 10.0}), 0.028188294163416107473) <= 1e-12);
  CHECK(rel_err(beta_cdf(0.05, {1001.0, 78.0}), 0.00089288585641692186705) <= 1e-12);
}

TEST_CASE("beta_cdf matches the closed form for integer parameters up to 10") {
  for (int alpha = 1; alpha <= 10; ++alpha) {
    for (int beta = 1; beta <= 10; ++beta) {
      for (int i = 0; i <= 20; ++i) {
        const double u = i / 20.0;
        // Reversed order: U ~ standard Beta(beta, alpha).
        const double want = incbeta_integer(beta, alpha, u);
        CAPTURE(alpha);
        CAPTURE(beta);
        CAPTURE(u);
        REQUIRE(std::abs(beta_cdf(u, {double(alpha), double(beta)}) - want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("beta_cdf is monotone with the right endpoints") {
  const double grid[] = {1.0, 2.0, 10.0, 78.0, 1000.0};
  for (double a : grid) {
    for (double b : grid) {
      const BetaParams p{a, b};
      CHECK(beta_cdf(0.0, p) == 0.0);
      CHECK(beta_cdf(1.0, p) == 1.0);
      double prev = 0.0;
      for (int i = 1; i <= 1000; ++i) {
        const double v = beta_cdf(i / 1000.0, p);
        REQUIRE(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("convention flip: P(U <= u) under (a, b) equals P(V >= 1 - u) under (b, a)") {
  const double grid[] = {1.0, 2.0, 10.0, 78.0, 1000.0};
  for (double a : grid) {
    for (double b : grid) {
      for (double u : {0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(u);
        REQUIRE(std::abs(beta_cdf(u, {a, b}) - beta_sf(1.0 - u, {b, a})) <= 1e-12);
      }
    }
  }
}

TEST_CASE("log tails stay finite deep in the tails") {
  const BetaParams p{1000.0, 78.0};
  const double lc = log_beta_cdf(1e-4, p);
  CHECK(std::isfinite(lc));
  CHECK(lc < -300.0);
  const double ls = log_beta_sf(0.9, p);
  CHECK(std::isfinite(ls));
  CHECK(ls < -700.0);
}

TEST_CASE("beta_mean_var") {
  for (double k : {0.5, 1.0, 7.0, 1000.0}) CHECK(beta_mean_var({k, k}).mean == 0.5);
  CHECK(std::abs(beta_mean_var({91.0, 10.0}).mean - 10.0 / 101.0) <= 1e-16);
  CHECK(std::abs(beta_mean_var({1.0, 1.0}).variance - 1.0 / 12.0) <= 1e-16);
}

TEST_CASE("sample_beta: law of large numbers and determinism") {
  const BetaParams p{91.0, 10.0};
  RngStream s(42, 0);
  constexpr int count = 100000;
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = sample_beta(p, s);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const auto mv = beta_mean_var(p);
  CHECK(std::abs(sum / count - mv.mean) <= 4.0 * std::sqrt(mv.variance / count));

  RngStream a(7, 3);
  RngStream b(7, 3);
  for (int i = 0; i < 100; ++i) REQUIRE(sample_beta(p, a) == sample_beta(p, b));
  CHECK(a == b);
}

TEST_CASE("sample_beta passes a Kolmogorov-Smirnov test") {
  for (const BetaParams p : {BetaParams{2.0, 3.0}, BetaParams{0.5, 0.7}}) {
    RngStream s(2024, 1);
    constexpr int count = 10000;
    std::vector<double> draws(count);
    for (auto& u : draws) u = sample_beta(p, s);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < count; ++i) {
      const double f = beta_cdf(draws[i], p);
      ks = std::max({ks, f - static_cast<double>(i) / count,
                     static_cast<double>(i + 1) / count - f});
    }
    // Asymptotic 0.001-level critical value 1.9495 / sqrt(n).
    CHECK(ks < 1.9495 / std::sqrt(static_cast<double>(count)));
  }
}

TEST_CASE("lower-tail bound") {
  // Clamp: s^2 >= n b / a.
  CHECK(lemma41_lower_tail_bound({5, 5, std::sqrt(2.0 * 5.0)}) == 0.0);
  CHECK(lemma41_lower_tail_bound({5, 5, 4.0}) == 0.0);

  const TailBoundInput mid{50, 50, 3.0};
  const double want =
      3.0 * std::exp(3.0) / M_PI / 3.0 * (std::exp(-1.5) - std::exp(-100.0 / 6.0));
  CHECK(rel_err(lemma41_lower_tail_bound(mid), want) <= 1e-15);
  CHECK(beta_cdf(lower_tail_threshold(mid), mid.law()) <= lemma41_lower_tail_bound(mid));

  const TailBoundInput small{1, 1, 0.1};
  CHECK(beta_cdf(lower_tail_threshold(small), small.law()) <= lemma41_lower_tail_bound(small));

  CHECK_THROWS_AS(lemma41_lower_tail_bound({3, 5, 1.0}), DomainError);
  CHECK_THROWS_AS(lemma41_lower_tail_bound({5, 3, 0.0}), DomainError);
}

TEST_CASE("upper-tail bound (checked numerically)") {
  const TailBoundInput in{90, 10, 2.0};
  CHECK(beta_sf(upper_tail_threshold(in), in.law()) <= lemma42_upper_tail_bound(in));
  // Clamp case: the bound reduces to the exact P(U >= 2b/n).
  const TailBoundInput big{90, 10, 1e6};
  CHECK(lemma42_upper_tail_bound(big) == beta_sf(0.2, big.law()));
  CHECK_THROWS_AS(lemma42_upper_tail_bound({3, 5, 1.0}), DomainError);
}

TEST_CASE("lambda-tail bound") {
  // a = n - d, b = d - 1, lambda = 2 with n = 10 d, d = 78.
  const std::int64_t d = 78;
  const double bound = lemma43_lambda_tail_bound(9 * d, d - 1, 2.0);
  const double reference =
      6.0 - std::log(2.0 * M_PI) + 0.5 * std::log(double(d)) - double(d) / 10.0;
  CHECK(bound <= reference);

  const TailBoundInput in{20, 5, 0.0};
  CHECK(log_beta_sf(2.0 * 5.0 / 25.0, in.law()) <= lemma43_lambda_tail_bound(20, 5, 2.0));
  CHECK_THROWS_AS(lemma43_lambda_tail_bound(20, 5, 1.9), DomainError);
  CHECK_THROWS_AS(lemma43_lambda_tail_bound(4, 5, 2.0), DomainError);
}

TEST_CASE("bound domination grids") {
  for (std::int64_t a : {5, 50, 500}) {
    for (std::int64_t b = 1; b <= a; ++b) {
      for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const TailBoundInput in{a, b, s};
        const double t = lower_tail_threshold(in);
        const double exact = t <= 0.0 ? 0.0 : beta_cdf(t, in.law());
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(s);
        REQUIRE(exact <= lemma41_lower_tail_bound(in));
      }
      for (double lambda : {2.0, 3.0, 5.0}) {
        const double cut = lambda * double(b) / double(a + b);
        if (cut >= 1.0) continue;
        const TailBoundInput in{a, b, 0.0};
        REQUIRE(log_beta_sf(cut, in.law()) <= lemma43_lambda_tail_bound(a, b, lambda));
      }
    }
  }
}

TEST_CASE("Stirling sandwich") {
  const auto one = stirling_log_bounds(1);
  CHECK(one.log_upper == 0.0);
  CHECK(one.log_lower <= 0.0);
  const auto ten = stirling_log_bounds(10);
  CHECK(ten.log_lower <= std::log(3628800.0));
  CHECK(std::log(3628800.0) <= ten.log_upper);
  for (std::int64_t n = 1; n <= 10000; ++n) {
    const auto b = stirling_log_bounds(n);
    const double exact = log_gamma(double(n) + 1.0);
    REQUIRE(b.log_lower <= exact);
    REQUIRE(exact <= b.log_upper);
  }
  CHECK_THROWS_AS(stirling_log_bounds(0), DomainError);
}
