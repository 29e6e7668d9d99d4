#pragma once

#include <functional>

namespace gausspoly {

/// Controls the peak-shifted log-domain integrator.
struct QuadConfig {
  double rel_tol = 1e-10;
  /// Floor on absolute change between refinement levels (integrand is
  /// normalised to 1 at its peak, so this is effectively "never").
  double abs_tol = 1e-300;
  /// Maximum number of step-halving levels.
  int max_depth = 60;
  /// Integrand is dropped where log f < log f(peak) - peak_cutoff.
  double peak_cutoff = 60.0;

  /// Throws InvalidParams unless rel_tol in (0, 1e-4], max_depth >= 10,
  /// peak_cutoff >= 30 and abs_tol > 0.
  void validate() const;
};

using LogIntegrand = std::function<double(double)>;

struct LogIntegral {
  double log_value = 0.0;
  /// Half the log-scale change between the last two refinement levels.
  double error_estimate = 0.0;
  double peak_location = 0.0;
  double peak_log_value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int levels = 0;
  long evaluations = 0;
};

struct PeakLocation {
  double x;
  double log_value;
};

/// Maximises a unimodal log-density: doubling bracket search from `guess`,
/// then golden-section refinement.
PeakLocation locate_peak(const LogIntegrand& log_f, double guess, double initial_step);

/// ln of integral_{-inf}^{inf} exp(log_f(x)) dx for a smooth unimodal log_f.
///
/// The mode is located, the domain is truncated to the superlevel set
/// {log_f >= peak - peak_cutoff}, and exp(log_f - peak) is integrated by the
/// trapezoid rule with repeated step halving until successive levels agree
/// to rel_tol on the log scale. All sums run in a fixed order, so the result
/// is bit-reproducible. Throws ConvergenceError when max_depth is exhausted.
LogIntegral integrate_log(const LogIntegrand& log_f, double guess, const QuadConfig& cfg);

}  // namespace gausspoly
