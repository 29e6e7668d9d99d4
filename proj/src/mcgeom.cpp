#include "gausspoly/mcgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gausspoly/betadist.hpp"
#include "gausspoly/errors.hpp"
#include "gausspoly/parallel.hpp"

namespace gausspoly::mcgeom {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kSideTolerance = 1e-9;
constexpr int kMaxResamples = 1000;

// Scratch space reused across the subsets of one cloud.
struct Workspace {
  std::vector<double> matrix;  // (d-1) x d differences, row-major
  std::vector<int> columns;    // column permutation from complete pivoting
  std::vector<double> solution;
};

// Fits the hyperplane through the d rows of `points`. Returns false when the
// rows are affinely dependent to within the pivot tolerance.
bool fit_hyperplane(std::span<const double> points, int d, Workspace& ws, Hyperplane& out) {
  out.normal.assign(static_cast<std::size_t>(d), 0.0);
  if (d == 1) {
    const double x = points[0];
    out.normal[0] = x < 0.0 ? -1.0 : 1.0;
    out.offset = std::abs(x);
    return true;
  }
  const int rows = d - 1;
  auto at = [&](int r, int c) -> double& {
    return ws.matrix[static_cast<std::size_t>(r) * d + static_cast<std::size_t>(c)];
  };
  ws.matrix.resize(static_cast<std::size_t>(rows) * d);
  double max_norm = 0.0;
  for (int r = 0; r < rows; ++r) {
    double norm2 = 0.0;
    for (int c = 0; c < d; ++c) {
      const double v = points[static_cast<std::size_t>(r + 1) * d + c] - points[c];
      at(r, c) = v;
      norm2 += v * v;
    }
    max_norm = std::max(max_norm, std::sqrt(norm2));
  }
  const double tol = kPivotTolerance * max_norm;
  if (!(max_norm > 0.0)) return false;

  ws.columns.resize(static_cast<std::size_t>(d));
  std::iota(ws.columns.begin(), ws.columns.end(), 0);
  for (int k = 0; k < rows; ++k) {
    int best_r = k;
    int best_c = k;
    double best = 0.0;
    for (int r = k; r < rows; ++r) {
      for (int c = k; c < d; ++c) {
        const double v = std::abs(at(r, ws.columns[c]));
        if (v > best) {
          best = v;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best <= tol) return false;
    if (best_r != k) {
      for (int c = 0; c < d; ++c) std::swap(at(k, c), at(best_r, c));
    }
    std::swap(ws.columns[k], ws.columns[best_c]);
    const double pivot = at(k, ws.columns[k]);
    for (int r = k + 1; r < rows; ++r) {
      const double factor = at(r, ws.columns[k]) / pivot;
      if (factor == 0.0) continue;
      for (int c = k; c < d; ++c) at(r, ws.columns[c]) -= factor * at(k, ws.columns[c]);
    }
  }
  // The column left over after d-1 pivots spans the null space.
  ws.solution.assign(static_cast<std::size_t>(d), 0.0);
  ws.solution[ws.columns[d - 1]] = 1.0;
  for (int k = rows - 1; k >= 0; --k) {
    double acc = 0.0;
    for (int c = k + 1; c < d; ++c) acc += at(k, ws.columns[c]) * ws.solution[ws.columns[c]];
    ws.solution[ws.columns[k]] = -acc / at(k, ws.columns[k]);
  }
  double norm2 = 0.0;
  for (double v : ws.solution) norm2 += v * v;
  const double inv = 1.0 / std::sqrt(norm2);
  double offset = 0.0;
  for (int c = 0; c < d; ++c) {
    out.normal[c] = ws.solution[c] * inv;
    offset += out.normal[c] * points[c];
  }
  if (offset < 0.0) {
    for (double& v : out.normal) v = -v;
    offset = -offset;
  }
  out.offset = offset;
  return true;
}

}  // namespace

double PointCloud::scale() const {
  double s = 0.0;
  for (double v : coords) s = std::max(s, std::abs(v));
  return s;
}

PointCloud sample_points(int n, int d, RngStream& stream) {
  if (d < 1 || n < d + 1) {
    throw InvalidParams("sample_points requires d >= 1 and n >= d + 1 (got n = " +
                        std::to_string(n) + ", d = " + std::to_string(d) + ")");
  }
  PointCloud cloud{n, d, std::vector<double>(static_cast<std::size_t>(n) * d)};
  for (std::size_t i = 0; i < cloud.coords.size(); i += 2) {
    const auto [a, b] = stream.normal_pair();
    cloud.coords[i] = a;
    if (i + 1 < cloud.coords.size()) cloud.coords[i + 1] = b;
  }
  return cloud;
}

Hyperplane hyperplane_through(std::span<const double> points, int d) {
  if (d < 1 || points.size() != static_cast<std::size_t>(d) * d) {
    throw InvalidParams("hyperplane_through expects a d x d matrix");
  }
  Workspace ws;
  Hyperplane h;
  if (!fit_hyperplane(points, d, ws, h)) {
    throw DegenerateError("points are affinely dependent");
  }
  return h;
}

FacetCount facet_count(const PointCloud& cloud, std::int64_t subset_guard) {
  const int n = cloud.n;
  const int d = cloud.d;
  if (d < 1 || n < d + 1) {
    throw InvalidParams("facet_count requires n >= d + 1");
  }
  const double subsets = std::exp(betadist::log_binomial(n, d));
  if (subsets > static_cast<double>(subset_guard) + 0.5) {
    throw GuardExceeded(subsets, subset_guard);
  }
  const double tol = kSideTolerance * cloud.scale();

  FacetCount result;
  Workspace ws;
  Hyperplane plane;
  std::vector<double> block(static_cast<std::size_t>(d) * d);
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<char> in_subset(static_cast<std::size_t>(n), 0);

  for (;;) {
    for (int j = 0; j < d; ++j) {
      const auto p = cloud.point(idx[j]);
      std::copy(p.begin(), p.end(), block.begin() + static_cast<std::ptrdiff_t>(j) * d);
      in_subset[idx[j]] = 1;
    }
    if (!fit_hyperplane(block, d, ws, plane)) {
      result.degenerate = true;
      return result;
    }
    bool above = false;
    bool below = false;
    for (int i = 0; i < n; ++i) {
      if (in_subset[i]) continue;
      const auto x = cloud.point(i);
      double dist = -plane.offset;
      for (int c = 0; c < d; ++c) dist += plane.normal[c] * x[c];
      if (std::abs(dist) <= tol) {
        result.degenerate = true;
        return result;
      }
      (dist > 0.0 ? above : below) = true;
    }
    if (above != below) ++result.count;
    for (int j = 0; j < d; ++j) in_subset[idx[j]] = 0;

    // Next d-subset in lexicographic order.
    int j = d - 1;
    while (j >= 0 && idx[j] == n - d + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int m = j + 1; m < d; ++m) idx[m] = idx[m - 1] + 1;
  }
  return result;
}

McEstimate ef_mc(const expectation::Params& p, std::int64_t trials, std::uint64_t seed,
                 std::int64_t subset_guard) {
  p.validate();
  if (trials < 2) {
    throw InvalidParams("ef_mc requires trials >= 2 (got " + std::to_string(trials) + ")");
  }
  const double subsets = std::exp(betadist::log_binomial(p.n, p.d));
  if (subsets > static_cast<double>(subset_guard) + 0.5) {
    throw GuardExceeded(subsets, subset_guard);
  }
  if (p.n > std::numeric_limits<int>::max()) {
    throw InvalidParams("ef_mc requires n <= " + std::to_string(std::numeric_limits<int>::max()));
  }
  const int n = static_cast<int>(p.n);
  const int d = static_cast<int>(p.d);

  std::vector<double> counts(static_cast<std::size_t>(trials));
  std::vector<std::int64_t> degenerate(counts.size(), 0);
  parallel_for(counts.size(), [&](std::size_t t) {
    RngStream stream(seed, t);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
      const PointCloud cloud = sample_points(n, d, stream);
      const FacetCount fc = facet_count(cloud, subset_guard);
      if (!fc.degenerate) {
        counts[t] = static_cast<double>(fc.count);
        return;
      }
      ++degenerate[t];
    }
    throw ConvergenceError("trial " + std::to_string(t) + " stayed degenerate after " +
                           std::to_string(kMaxResamples) + " resamples");
  });

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.degenerate_trials = std::accumulate(degenerate.begin(), degenerate.end(), std::int64_t{0});
  const double count = static_cast<double>(trials);
  est.mean = pairwise_sum(counts) / count;
  std::vector<double> sq(counts.size());
  std::transform(counts.begin(), counts.end(), sq.begin(),
                 [m = est.mean](double v) { return (v - m) * (v - m); });
  est.std_error = std::sqrt(pairwise_sum(sq) / (count - 1.0) / count);
  return est;
}

}  // namespace gausspoly::mcgeom
