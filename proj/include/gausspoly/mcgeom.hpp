#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gausspoly/expectation.hpp"
#include "gausspoly/rng.hpp"

namespace gausspoly::mcgeom {

/// n points in R^d, stored row-major.
struct PointCloud {
  int n = 0;
  int d = 0;
  std::vector<double> coords;

  std::span<const double> point(int i) const {
    return {coords.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
  }
  std::span<double> point(int i) {
    return {coords.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
  }
  /// Largest absolute coordinate.
  double scale() const;
};

/// n*d independent standard normal coordinates (variance 1). Throws
/// InvalidParams unless d >= 1 and n >= d + 1.
PointCloud sample_points(int n, int d, RngStream& stream);

struct Hyperplane {
  std::vector<double> normal;  // unit length
  double offset;               // >= 0
};

/// Hyperplane {x : <normal, x> = offset} through the d rows of `points`
/// (a d x d row-major matrix). Throws DegenerateError when the rows are
/// affinely dependent up to 1e-12 times the largest difference-row norm.
Hyperplane hyperplane_through(std::span<const double> points, int d);

struct FacetCount {
  std::int64_t count = 0;
  /// Some point sat within tolerance of a candidate hyperplane, or a
  /// candidate subset was itself degenerate; the count is not meaningful.
  bool degenerate = false;
};

inline constexpr std::int64_t kDefaultSubsetGuard = 2'000'000;

/// Number of facets of conv(cloud) by exhaustive enumeration of d-subsets.
/// Throws GuardExceeded if C(n, d) > subset_guard.
FacetCount facet_count(const PointCloud& cloud, std::int64_t subset_guard = kDefaultSubsetGuard);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t degenerate_trials = 0;
};

/// Monte Carlo estimate of E f_{d-1}. Trial t draws from RngStream(seed, t);
/// degenerate clouds are redrawn from the continuation of that stream.
/// Requires trials >= 2.
McEstimate ef_mc(const expectation::Params& p, std::int64_t trials, std::uint64_t seed,
                 std::int64_t subset_guard = kDefaultSubsetGuard);

}  // namespace gausspoly::mcgeom
