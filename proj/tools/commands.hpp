#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gausspoly/mcgeom.hpp"
#include "gausspoly/quadrature.hpp"
#include "report.hpp"

namespace gausspoly::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Flags shared by every subcommand.
struct CommonOptions {
  std::string format = "text";
  std::string output;
  QuadConfig quad;
  std::uint64_t seed = 0;
};

struct ExactOptions {
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::string route = "y";  // y, u, smalldiff, all
};

struct AsymptoticOptions {
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::string formula;  // thm11, cor12, thm13
  bool compare = false;
  std::string route = "auto";  // exact route used by --compare
};

struct McOptions {
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t trials = 10000;
  std::string method = "hull";  // hull, onedim
  bool compare = false;
  std::int64_t guard = mcgeom::kDefaultSubsetGuard;
};

struct VerifyOptions {
  std::string suite = "all";
  /// Points per one-dimensional grid; 0 selects each suite's default.
  std::int64_t grid_size = 0;
};

struct SweepOptions {
  std::vector<std::int64_t> d_list;
  std::vector<std::int64_t> n_list;
  std::vector<double> n_over_d_list;
  std::vector<std::string> routes = {"y", "u", "smalldiff"};
};

/// Each builder throws InvalidParams / PreconditionError / DomainError /
/// GuardExceeded for bad input and ConvergenceError when a numerical method
/// gives up. Metadata gets version, seed and config but not the wall time,
/// which the caller adds.
Report cmd_exact(const ExactOptions& opt, const CommonOptions& common);
Report cmd_asymptotic(const AsymptoticOptions& opt, const CommonOptions& common);
Report cmd_mc(const McOptions& opt, const CommonOptions& common);
Report cmd_verify(const VerifyOptions& opt, const CommonOptions& common);
Report cmd_sweep(const SweepOptions& opt, const CommonOptions& common);

/// The verification suites, in the order "all" runs them.
const std::vector<std::string>& verify_suites();

/// Columns of the sweep CSV, in order.
const std::vector<std::string>& sweep_columns();

}  // namespace gausspoly::cli
