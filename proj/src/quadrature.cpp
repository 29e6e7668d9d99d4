#include "gausspoly/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "gausspoly/errors.hpp"

namespace gausspoly {

namespace {

constexpr int kMaxBracketSteps = 400;
constexpr int kInitialPanels = 64;
constexpr int kMinLevels = 3;
// Hard stop on grid size regardless of max_depth.
constexpr long kMaxPanels = 1L << 24;

// Compensated running sum (Neumaier).
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double safe_eval(const LogIntegrand& f, double x) {
  const double v = f(x);
  if (std::isnan(v)) {
    throw ConvergenceError("log-integrand returned NaN at x = " + std::to_string(x));
  }
  return v;
}

// Distance from the peak (in direction dir) at which log_f first falls below
// top - drop, located by doubling then bisection. Returns the outer end of
// the final bracket.
double find_level_crossing(const LogIntegrand& log_f, double peak, double top, double drop,
                           double dir, double start_step) {
  const double level = top - drop;
  double inside = 0.0;
  double step = start_step;
  double outside = 0.0;
  for (int i = 0;; ++i) {
    if (i >= kMaxBracketSteps) {
      throw ConvergenceError("integrand does not decay away from its peak");
    }
    if (safe_eval(log_f, peak + dir * step) < level) {
      outside = step;
      break;
    }
    inside = step;
    step *= 2.0;
  }
  for (int i = 0; i < 60 && outside - inside > 1e-3 * outside; ++i) {
    const double mid = 0.5 * (inside + outside);
    (safe_eval(log_f, peak + dir * mid) < level ? outside : inside) = mid;
  }
  return outside;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) {
    char got[32];
    std::snprintf(got, sizeof got, "%g", rel_tol);
    throw InvalidParams("QuadConfig.rel_tol must lie in (0, 1e-4], got " + std::string(got));
  }
  if (!(abs_tol > 0.0)) throw InvalidParams("QuadConfig.abs_tol must be positive");
  if (max_depth < 10) {
    throw InvalidParams("QuadConfig.max_depth must be >= 10, got " + std::to_string(max_depth));
  }
  if (!(peak_cutoff >= 30.0)) {
    throw InvalidParams("QuadConfig.peak_cutoff must be >= 30, got " +
                        std::to_string(peak_cutoff));
  }
}

PeakLocation locate_peak(const LogIntegrand& log_f, double guess, double initial_step) {
  double h = initial_step > 0.0 ? initial_step : 1e-3;
  double a = guess - h;
  double b = guess;
  double c = guess + h;
  double fa = safe_eval(log_f, a);
  double fb = safe_eval(log_f, b);
  double fc = safe_eval(log_f, c);
  for (int i = 0; !(fb >= fa && fb >= fc); ++i) {
    if (i >= kMaxBracketSteps || !std::isfinite(h)) {
      throw ConvergenceError("could not bracket the integrand's peak");
    }
    h *= 2.0;
    if (fa > fc) {
      c = b;
      fc = fb;
      b = a;
      fb = fa;
      a = b - h;
      fa = safe_eval(log_f, a);
    } else {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = b + h;
      fc = safe_eval(log_f, c);
    }
  }
  // Golden-section search on [a, c].
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = safe_eval(log_f, x1);
  double f2 = safe_eval(log_f, x2);
  for (int i = 0; i < 200 && (c - a) > 1e-12 * (1.0 + std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = safe_eval(log_f, x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = safe_eval(log_f, x1);
    }
  }
  PeakLocation best{b, fb};
  if (f1 > best.log_value) best = {x1, f1};
  if (f2 > best.log_value) best = {x2, f2};
  if (!std::isfinite(best.log_value)) {
    throw ConvergenceError("integrand has no finite maximum");
  }
  return best;
}

LogIntegral integrate_log(const LogIntegrand& log_f, double guess, const QuadConfig& cfg) {
  cfg.validate();
  long evaluations = 0;
  const LogIntegrand counted = [&](double x) {
    ++evaluations;
    return log_f(x);
  };

  const PeakLocation peak = locate_peak(counted, guess, 1e-3 * (1.0 + std::abs(guess)));
  const double tiny_step = 1e-9 * (1.0 + std::abs(peak.x));
  // Scale of the peak: where the log drops by one half.
  const double width = std::max(
      find_level_crossing(counted, peak.x, peak.log_value, 0.5, -1.0, tiny_step),
      find_level_crossing(counted, peak.x, peak.log_value, 0.5, +1.0, tiny_step));
  const double left =
      find_level_crossing(counted, peak.x, peak.log_value, cfg.peak_cutoff, -1.0, width);
  const double right =
      find_level_crossing(counted, peak.x, peak.log_value, cfg.peak_cutoff, +1.0, width);

  const double lo = peak.x - left;
  const double hi = peak.x + right;
  const auto g = [&](double x) { return std::exp(safe_eval(counted, x) - peak.log_value); };

  long panels = kInitialPanels;
  double h = (hi - lo) / static_cast<double>(panels);
  Accumulator acc;
  acc.add(0.5 * g(lo));
  acc.add(0.5 * g(hi));
  for (long i = 1; i < panels; ++i) acc.add(g(lo + static_cast<double>(i) * h));
  double previous = h * acc.value();

  for (int level = 1; level <= cfg.max_depth && panels <= kMaxPanels; ++level) {
    h *= 0.5;
    for (long j = 0; j < panels; ++j) acc.add(g(lo + static_cast<double>(2 * j + 1) * h));
    panels *= 2;
    const double current = h * acc.value();
    const double log_change = std::abs(std::log(current) - std::log(previous));
    if (level >= kMinLevels &&
        (log_change <= cfg.rel_tol || std::abs(current - previous) <= cfg.abs_tol)) {
      LogIntegral out;
      out.log_value = peak.log_value + std::log(current);
      out.error_estimate = 0.5 * log_change;
      out.peak_location = peak.x;
      out.peak_log_value = peak.log_value;
      out.lower = lo;
      out.upper = hi;
      out.levels = level;
      out.evaluations = evaluations;
      return out;
    }
    previous = current;
  }
  char tol[32];
  std::snprintf(tol, sizeof tol, "%g", cfg.rel_tol);
  throw ConvergenceError("quadrature did not reach rel_tol " + std::string(tol) + " within " +
                         std::to_string(evaluations) + " evaluations");
}

}  // namespace gausspoly
